"""Tests for the low-rank product-state engine."""

import numpy as np
import pytest

from macroq import catalog
from macroq.lowrank import ProductRankState, measure_lowrank
from macroq.measure import measure_operator


def two_mode_branch(a0, a1, b0, b1):
    return [np.array([a0, a1], dtype=complex), np.array([b0, b1], dtype=complex)]


def test_superposition_bell_pair():
    up = two_mode_branch(1, 0, 1, 0)
    down = two_mode_branch(0, 1, 0, 1)
    state = ProductRankState.superposition([up, down])
    dense = state.to_dense()
    vec = np.array([1, 0, 0, 1]) / np.sqrt(2)
    np.testing.assert_allclose(dense.data, np.outer(vec, vec), atol=1e-14)


def test_mixture_probabilities():
    up = two_mode_branch(1, 0, 1, 0)
    down = two_mode_branch(0, 1, 0, 1)
    state = ProductRankState.mixture([up, down], [0.25, 0.75])
    dense = state.to_dense()
    expected = np.zeros((4, 4))
    expected[0, 0] = 0.25
    expected[3, 3] = 0.75
    np.testing.assert_allclose(dense.data, expected, atol=1e-14)


def test_coeff_must_be_hermitian_psd():
    up = two_mode_branch(1, 0, 1, 0)
    down = two_mode_branch(0, 1, 0, 1)
    with pytest.raises(ValueError):
        ProductRankState([up, down], np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        ProductRankState([up, down], np.array([[1.0, 2.0], [2.0, 1.0]]))


def test_factor_dims_must_agree_per_mode():
    good = two_mode_branch(1, 0, 1, 0)
    bad = [np.array([0.0, 1.0]), np.array([0.0, 0.0, 1.0])]
    with pytest.raises(ValueError):
        ProductRankState.superposition([good, bad])


def test_unnormalized_factors_are_folded_in():
    # scaling a branch must not change the normalized state
    base = ProductRankState.superposition([two_mode_branch(1, 0, 1, 0),
                                           two_mode_branch(0, 1, 0, 1)])
    scaled = ProductRankState.superposition([two_mode_branch(3, 0, 3, 0),
                                             two_mode_branch(0, 1, 0, 1)])
    # not the same state (weights shift), but both remain unit trace
    for st in (base, scaled):
        assert st.to_dense().data.trace() == pytest.approx(1.0)
    r = measure_lowrank(scaled)
    assert 0.0 <= r.value <= r.mean_n + 1e-12


@pytest.mark.parametrize("n_modes", [2, 3, 5])
def test_ghz_measure_matches_dense(n_modes):
    state = catalog.make_ghz(n_modes)
    low = measure_lowrank(state)
    dense = measure_operator(state.to_dense())
    assert low.route == "low-rank"
    assert low.value == pytest.approx(dense.value, abs=1e-12)
    assert low.mean_n == pytest.approx(dense.mean_n, abs=1e-12)
    assert low.purity == pytest.approx(dense.purity, abs=1e-12)


def test_ghz_value_is_half_party_count():
    # mean occupation n/2 and no single-mode coherences
    res = measure_lowrank(catalog.make_ghz(8))
    assert res.value == pytest.approx(4.0, abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_noon_measure_matches_dense(n):
    state = catalog.make_noon(n)
    low = measure_lowrank(state)
    dense = measure_operator(state.to_dense())
    assert low.value == pytest.approx(dense.value, abs=1e-12)
    assert low.value == pytest.approx(float(n), abs=1e-12)


@pytest.mark.parametrize("n_modes", [1, 2, 5, 12])
def test_dur_measure_matches_dense(n_modes):
    state = catalog.make_dur(n_modes, 0.1)
    low = measure_lowrank(state)
    dense = measure_operator(state.to_dense())
    assert low.value == pytest.approx(dense.value, abs=1e-10)


def test_dur_single_party_is_pure_coherent_free():
    # one branch pair on one mode: a pure qubit state has I = <n> - |<a>|^2
    res = measure_lowrank(catalog.make_dur(1, 0.3))
    assert res.value == pytest.approx(0.0, abs=1e-14)


def test_random_rank_three_product_state_matches_dense():
    rng = np.random.default_rng(11)
    modes, dim, rank = 3, 4, 3
    terms = [[rng.normal(size=dim) + 1j * rng.normal(size=dim) for _ in range(modes)]
             for _ in range(rank)]
    w = rng.normal(size=rank) + 1j * rng.normal(size=rank)
    state = ProductRankState.superposition(terms, weights=w)
    low = measure_lowrank(state)
    dense = measure_operator(state.to_dense())
    assert low.value == pytest.approx(dense.value, abs=1e-10)
    assert low.purity == pytest.approx(dense.purity, abs=1e-12)


def test_to_dense_guards_dimension():
    state = catalog.make_ghz(20)
    with pytest.raises(ValueError):
        state.to_dense(max_dim=4096)


def test_gram_diagonal_is_branch_norm():
    state = catalog.make_ghz(4)
    g = state.gram()
    np.testing.assert_allclose(np.diag(g).real, 1.0, atol=1e-12)
    assert g.shape == (2, 2)
