"""Low-rank engine for many-mode states built from a few product terms.

A state rho = sum_ij c_ij |Psi_i><Psi_j| with product terms
|Psi_i> = tensor_m |u_i^m> never needs the tensor-product space: every trace
entering I reduces to r x r Gram algebra, so the cost is O(r^2 M) regardless
of mode count.  This is what makes thousand-mode entangled superpositions
tractable.
"""

from __future__ import annotations

import numpy as np

from .fock import DensityMatrix, ModeCutoffs
from .measure import MeasureResult


class ProductRankState:
    """Rank-r mixture/superposition of M-mode product vectors.

    ``factors[i][m]`` is the (unnormalized) single-mode ket of term i in mode m;
    ``coeff`` is the r x r Hermitian positive matrix of term weights.  Factor
    norms are folded into ``coeff`` and the whole object is scaled to unit trace
    on construction.
    """

    def __init__(self, factors, coeff):
        if not factors:
            raise ValueError("need at least one product term")
        self.rank = len(factors)
        self.modes = len(factors[0])
        if self.modes == 0:
            raise ValueError("terms must have at least one mode")
        coeff = np.asarray(coeff, dtype=complex)
        if coeff.shape != (self.rank, self.rank):
            raise ValueError(f"coeff shape {coeff.shape} does not match rank {self.rank}")
        dev = float(np.abs(coeff - coeff.conj().T).max())
        if dev > 1e-12 * max(float(np.abs(coeff).max()), 1e-300):
            raise ValueError("coefficient matrix is not Hermitian")
        coeff = 0.5 * (coeff + coeff.conj().T)
        low = float(np.linalg.eigvalsh(coeff)[0])
        if low < -1e-9 * max(float(np.abs(coeff).max()), 1e-300):
            raise ValueError(f"coefficient matrix has negative weight {low:.3e}")

        self.dims = []
        for m in range(self.modes):
            sizes = {len(term[m]) for term in factors}
            if len(sizes) != 1:
                raise ValueError(f"mode {m} has inconsistent factor dimensions {sizes}")
            self.dims.append(sizes.pop())

        # one (rank, d_m) array per mode, rows normalized with the norms
        # pushed into the coefficient matrix
        self.mode_arrays = []
        scales = np.ones(self.rank)
        for m in range(self.modes):
            um = np.array([np.asarray(term[m], dtype=complex) for term in factors])
            norms = np.linalg.norm(um, axis=1)
            if np.any(norms == 0.0):
                raise ValueError("zero factor vector")
            self.mode_arrays.append(um / norms[:, None])
            scales = scales * norms
        coeff = coeff * np.outer(scales, scales)

        tr = float(np.real(np.einsum("ij,ji->", coeff, self.gram())))
        if tr <= 0.0:
            raise ValueError(f"state trace {tr!r} is not positive")
        self.coeff = coeff / tr

    @classmethod
    def superposition(cls, terms, weights=None):
        """Pure state sum_i w_i |Psi_i>."""
        r = len(terms)
        w = np.ones(r, dtype=complex) if weights is None else np.asarray(weights, dtype=complex)
        return cls(terms, np.outer(w, w.conj()))

    @classmethod
    def mixture(cls, terms, probs):
        return cls(terms, np.diag(np.asarray(probs, dtype=float)))

    # -- Gram machinery -----------------------------------------------------

    def _factor_grams(self):
        return [um.conj() @ um.T for um in self.mode_arrays]

    def gram(self) -> np.ndarray:
        """Overlap matrix G[i, j] = <Psi_i | Psi_j>."""
        g = np.ones((self.rank, self.rank), dtype=complex)
        for f in self._factor_grams():
            g = g * f
        return g

    def to_dense(self, max_dim: int = 4096) -> DensityMatrix:
        """Materialize in the full tensor space; refuses above ``max_dim``."""
        total = int(np.prod(self.dims))
        if total > max_dim:
            raise ValueError(f"dense dimension {total} exceeds the {max_dim} limit")
        vecs = np.zeros((self.rank, total), dtype=complex)
        for i in range(self.rank):
            v = self.mode_arrays[0][i]
            for m in range(1, self.modes):
                v = np.kron(v, self.mode_arrays[m][i])
            vecs[i] = v
        rho = vecs.T @ self.coeff @ vecs.conj()
        return DensityMatrix(ModeCutoffs(tuple(self.dims)), rho)


def measure_lowrank(state: ProductRankState) -> MeasureResult:
    """Evaluate I, the occupation and the purity entirely in Gram space."""
    c = state.coeff
    grams = state._factor_grams()
    r = state.rank
    M = state.modes

    pre = [np.ones((r, r), dtype=complex)]
    for f in grams[:-1]:
        pre.append(pre[-1] * f)
    suf = [np.ones((r, r), dtype=complex)]
    for f in grams[:0:-1]:
        suf.append(suf[-1] * f)
    suf = suf[::-1]

    gram = pre[-1] * grams[-1]
    value = 0.0
    mean = 0.0
    for m in range(M):
        um = state.mode_arrays[m]
        d = state.dims[m]
        n_w = np.arange(d, dtype=float)
        au = np.zeros_like(um)
        if d > 1:
            au[:, :-1] = um[:, 1:] * np.sqrt(n_w[1:])
        a_m = um.conj() @ au.T
        n_m = um.conj() @ (um * n_w).T
        excl = pre[m] * suf[m]
        gn = excl * n_m
        ga = excl * a_m
        value += float(np.real(np.trace(c @ gram @ c @ gn)))
        value -= float(np.real(np.trace(c @ ga @ c @ ga.conj().T)))
        mean += float(np.real(np.trace(c @ gn)))

    purity = float(np.real(np.trace(c @ gram @ c @ gram)))
    return MeasureResult(value=value, route="low-rank", mean_n=mean,
                         purity=purity, err_estimate=0.0)
