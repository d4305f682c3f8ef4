"""Amplitude-damping evolution and the purity-rate identity."""

import numpy as np
import pytest

from macroq import catalog
from macroq.dynamics import evolve, lindblad_rhs, purity_rate_residuals
from macroq.fock import DensityMatrix, as_cutoffs
from macroq.measure import measure_operator


def test_rhs_is_trace_free_and_hermitian():
    rho = catalog.make_scs(1.2, 30)
    out = lindblad_rhs(rho.data, rho.cutoffs)
    assert abs(out.trace()) < 1e-14
    assert np.abs(out - out.conj().T).max() < 1e-14


def test_rhs_defines_the_measure():
    # -Tr[rho L(rho)] is the operator-route value
    rho = catalog.make_scs(1.2, 30)
    lhs = -float(np.real(np.einsum("ij,ji->", rho.data, lindblad_rhs(rho.data, rho.cutoffs))))
    assert lhs == pytest.approx(measure_operator(rho).value, abs=1e-12)


def test_evolve_requires_sane_record_times():
    rho = catalog.make_fock(1)
    with pytest.raises(ValueError):
        evolve(rho, [0.3, 0.1])
    with pytest.raises(ValueError):
        evolve(rho, [-0.1, 0.2])
    with pytest.raises(ValueError):
        evolve(rho, [])


def test_evolve_records_requested_times():
    rho = catalog.make_coherent(1.0, 25)
    times = [0.0, 0.15, 0.4]
    traj = evolve(rho, times, step=0.02)
    assert [p.tau for p in traj] == times
    assert traj[0].value == pytest.approx(measure_operator(rho).value, abs=1e-12)


def test_mean_occupation_decays_exponentially():
    rho = catalog.make_coherent(1.3, 30)
    n0 = rho.mean_number()
    traj = evolve(rho, [0.0, 0.2, 0.5, 1.0], step=0.01)
    for p in traj:
        assert p.mean_n == pytest.approx(n0 * np.exp(-p.tau), abs=1e-6)


def test_coherent_state_stays_coherent():
    # a displaced vacuum only shrinks; I stays zero along the way
    traj = evolve(catalog.make_coherent(1.0, 25), [0.3, 0.8], step=0.01)
    for p in traj:
        assert abs(p.value) < 1e-7
        assert p.purity == pytest.approx(1.0, abs=1e-7)


def test_thermal_purity_grows_towards_vacuum():
    rho = catalog.make_thermal(1.0, 40)
    traj = evolve(rho, [0.0, 0.5, 1.5], step=0.01)
    purs = [p.purity for p in traj]
    assert purs[0] < purs[1] < purs[2]
    # negative measure means purity is increasing, consistently
    assert traj[0].value < 0


def test_rk4_step_error_scales_fourth_order():
    rho = catalog.make_scs(1.0, 25)
    ref = evolve(rho, [0.4], step=0.0025)[0].state.data
    errs = []
    for h in (0.04, 0.02):
        out = evolve(rho, [0.4], step=h)[0].state.data
        errs.append(np.abs(out - ref).max())
    order = np.log2(errs[0] / errs[1])
    assert 3.5 < order < 4.5


def test_cat_trajectory_matches_closed_form():
    alpha = 1.5
    rho = catalog.make_scs(alpha, 40)
    taus = [0.1, 0.3, 0.7]
    traj = evolve(rho, taus, step=0.005)
    for p in traj:
        closed = catalog.closed_form_decohered_scs(alpha, p.tau)
        assert p.value == pytest.approx(closed.value, abs=2e-6)
        assert p.purity == pytest.approx(closed.purity, abs=1e-6)


def test_purity_rate_identity_on_cat():
    resid = purity_rate_residuals(catalog.make_scs(1.0, 30), [0.1, 0.5])
    assert max(resid) < 1e-6


def test_purity_rate_identity_on_thermal():
    # works for mixed states too, where the rate is positive
    resid = purity_rate_residuals(catalog.make_thermal(0.8, 30), [0.2])
    assert resid[0] < 1e-6


def test_evolve_rejects_unphysical_drift():
    # a state that is not positive blows the positivity monitor quickly
    data = np.eye(6) / 6.0
    data[0, 5] = data[5, 0] = 0.49
    bad = DensityMatrix(as_cutoffs(6), data)
    with pytest.raises(RuntimeError):
        evolve(bad, [2.0], step=0.05)
