"""Dense Fock-space representation of bosonic states and operators.

Everything here works on explicit numpy arrays over a truncated number basis.
Multi-mode objects use the C-order (row-major) tensor convention, so the kron
of per-mode operators acts on the flat index returned by ``ModeCutoffs.index_of``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .config import DEFAULT, Tolerances


class TruncationLeakError(RuntimeError):
    """Raised when an operation pushes weight past the Fock cutoff."""


@dataclass(frozen=True)
class ModeCutoffs:
    """Per-mode Fock dimensions.  ``cutoffs[m]`` counts levels 0..cutoffs[m]-1."""

    cutoffs: tuple[int, ...]

    def __post_init__(self):
        if not self.cutoffs or any(int(d) < 1 for d in self.cutoffs):
            raise ValueError(f"cutoffs must be positive, got {self.cutoffs}")
        object.__setattr__(self, "cutoffs", tuple(int(d) for d in self.cutoffs))

    @property
    def modes(self) -> int:
        return len(self.cutoffs)

    @property
    def dim(self) -> int:
        return int(np.prod(self.cutoffs))

    def index_of(self, occupations) -> int:
        """Flat index of the basis state |n_1, ..., n_M>."""
        return int(np.ravel_multi_index(tuple(occupations), self.cutoffs))

    def occupations_of(self, index: int) -> tuple[int, ...]:
        return tuple(int(n) for n in np.unravel_index(index, self.cutoffs))


def as_cutoffs(spec) -> ModeCutoffs:
    """Coerce an int, a sequence of ints, or a ModeCutoffs."""
    if isinstance(spec, ModeCutoffs):
        return spec
    if np.isscalar(spec):
        return ModeCutoffs((int(spec),))
    return ModeCutoffs(tuple(int(d) for d in spec))


def suggest_cutoff(mean_n: float) -> int:
    """Fock dimension heuristic: mean occupation plus a six-sigma safety band."""
    mean_n = max(float(mean_n), 0.0)
    return int(np.ceil(mean_n + 6.0 * np.sqrt(mean_n) + 10.0))


@dataclass
class Ket:
    """Pure state as a flat amplitude vector over ``cutoffs``."""

    cutoffs: ModeCutoffs
    amplitudes: np.ndarray
    tol: Tolerances = field(default=DEFAULT, repr=False, compare=False)

    def __post_init__(self):
        self.cutoffs = as_cutoffs(self.cutoffs)
        amp = np.asarray(self.amplitudes, dtype=complex).ravel()
        if amp.size != self.cutoffs.dim:
            raise ValueError(
                f"amplitude vector has size {amp.size}, expected {self.cutoffs.dim}")
        norm = float(np.linalg.norm(amp))
        if abs(norm - 1.0) > self.tol.ket_norm:
            raise ValueError(f"ket norm {norm!r} deviates from 1 beyond tolerance")
        self.amplitudes = amp / norm

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.cutoffs, np.outer(self.amplitudes, self.amplitudes.conj()),
                             tol=self.tol)


@dataclass
class DensityMatrix:
    """Mixed state as a dense Hermitian matrix, trace-normalized on construction."""

    cutoffs: ModeCutoffs
    data: np.ndarray
    tol: Tolerances = field(default=DEFAULT, repr=False, compare=False)

    def __post_init__(self):
        self.cutoffs = as_cutoffs(self.cutoffs)
        rho = np.asarray(self.data, dtype=complex)
        d = self.cutoffs.dim
        if rho.shape != (d, d):
            raise ValueError(f"density matrix has shape {rho.shape}, expected {(d, d)}")
        scale = float(np.abs(rho).max())
        if scale == 0.0:
            raise ValueError("density matrix is zero")
        dev = float(np.abs(rho - rho.conj().T).max())
        if dev > self.tol.hermiticity * scale:
            raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")
        rho = 0.5 * (rho + rho.conj().T)
        tr = float(rho.trace().real)
        if tr <= 0.0:
            raise ValueError(f"trace {tr!r} is not positive")
        self.data = rho / tr

    @property
    def dim(self) -> int:
        return self.cutoffs.dim

    def mean_number(self) -> float:
        return float(np.real(self.data.diagonal() @ number_diagonal(self.cutoffs)))

    def purity(self) -> float:
        return float(np.real(np.einsum("ij,ji->", self.data, self.data)))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.data)[0])


def annihilation_op(cutoffs, mode: int = 0) -> np.ndarray:
    """Dense annihilation operator for one mode of a multi-mode register."""
    cutoffs = as_cutoffs(cutoffs)
    mats = []
    for m, d in enumerate(cutoffs.cutoffs):
        if m == mode:
            mats.append(np.diag(np.sqrt(np.arange(1.0, d)), k=1))
        else:
            mats.append(np.eye(d))
    out = mats[0]
    for mat in mats[1:]:
        out = np.kron(out, mat)
    return out.astype(complex)


def number_diagonal(cutoffs, mode: int | None = None) -> np.ndarray:
    """Diagonal of the number operator (one mode, or the total when mode is None)."""
    cutoffs = as_cutoffs(cutoffs)
    modes = range(cutoffs.modes) if mode is None else [mode]
    total = np.zeros(cutoffs.dim)
    for m in modes:
        per = np.arange(cutoffs.cutoffs[m], dtype=float)
        shape = [1] * cutoffs.modes
        shape[m] = cutoffs.cutoffs[m]
        total += np.broadcast_to(per.reshape(shape), cutoffs.cutoffs).ravel()
    return total


def number_op(cutoffs) -> np.ndarray:
    return np.diag(number_diagonal(cutoffs)).astype(complex)


def a_rho_adag(rho: np.ndarray, cutoffs, mode: int) -> np.ndarray:
    """Compute a_m rho a_m^dag by index shifts, without building the operator.

    Cost is O(dim^2) per call, which keeps Lindblad evolution and the operator
    route usable at four-digit dimensions.
    """
    cutoffs = as_cutoffs(cutoffs)
    dims = cutoffs.cutoffs
    M = len(dims)
    d = dims[mode]
    T = rho.reshape(dims + dims)
    T = np.moveaxis(T, (mode, M + mode), (0, 1))
    rest = T.shape[2:]
    T = T.reshape(d, d, -1)
    out = np.zeros_like(T)
    if d > 1:
        w = np.sqrt(np.arange(1.0, d))
        out[:-1, :-1, :] = w[:, None, None] * w[None, :, None] * T[1:, 1:, :]
    out = out.reshape((d, d) + rest)
    out = np.moveaxis(out, (0, 1), (mode, M + mode))
    return out.reshape(rho.shape)


def _displaced_diagonals(k: int, r: np.ndarray, nmax: int) -> np.ndarray:
    """Matrix elements <n+k| D(r) |n> for real r > 0, n = 0..nmax-1.

    Returns shape (nmax, r.size).  Uses the normalized three-term recurrence in
    n, which stays bounded by 1 in magnitude (the elements belong to a unitary),
    so there is no overflow for any cutoff or radius of practical interest.
    """
    r = np.asarray(r, dtype=float)
    x = r * r
    out = np.zeros((nmax, r.size))
    f0 = np.exp(-0.5 * x + k * np.log(r) - 0.5 * gammaln(k + 1.0))
    out[0] = f0
    if nmax == 1:
        return out
    fm1 = np.zeros_like(f0)
    fn = f0
    for n in range(nmax - 1):
        a = (2.0 * n + k + 1.0 - x) / np.sqrt((n + 1.0) * (n + k + 1.0))
        b = -np.sqrt(n * (n + k) / ((n + 1.0) * (n + k + 1.0))) if n > 0 else 0.0
        fnew = a * fn + b * fm1
        out[n + 1] = fnew
        fm1, fn = fn, fnew
    return out


def displacement_matrix(cutoff: int, beta: complex) -> np.ndarray:
    """Truncated single-mode displacement operator D(beta).

    Rows and columns are cut at ``cutoff``, so the matrix is sub-unitary; the
    shortfall of D rho D^dag from unit trace measures the truncation leak.
    """
    cutoff = int(cutoff)
    beta = complex(beta)
    D = np.zeros((cutoff, cutoff), dtype=complex)
    r = abs(beta)
    if r == 0.0:
        np.fill_diagonal(D, 1.0)
        return D
    phi = np.angle(beta)
    rr = np.array([r])
    for k in range(cutoff):
        nmax = cutoff - k
        f = _displaced_diagonals(k, rr, nmax)[:, 0]
        n = np.arange(nmax)
        D[n + k, n] = f * np.exp(1j * k * phi)
        if k > 0:
            D[n, n + k] = (-1.0) ** k * f * np.exp(-1j * k * phi)
    return D


def apply_displacement(state: DensityMatrix, betas) -> DensityMatrix:
    """Displace each mode by betas[m].  Raises if the cutoff truncates the result."""
    if np.isscalar(betas):
        betas = [betas]
    cut = state.cutoffs
    if len(betas) != cut.modes:
        raise ValueError(f"got {len(betas)} displacements for {cut.modes} modes")
    D = displacement_matrix(cut.cutoffs[0], betas[0])
    for m in range(1, cut.modes):
        D = np.kron(D, displacement_matrix(cut.cutoffs[m], betas[m]))
    rho = D @ state.data @ D.conj().T
    leak = 1.0 - float(rho.trace().real)
    if leak > state.tol.displacement_leak:
        raise TruncationLeakError(
            f"displacement leaks {leak:.3e} of the trace past the cutoff; "
            "increase the Fock dimension")
    return DensityMatrix(cut, rho, tol=state.tol)


def apply_rotation(state: DensityMatrix, thetas) -> DensityMatrix:
    """Apply exp(i theta_m n_m) per mode.  Exact on the truncated space."""
    if np.isscalar(thetas):
        thetas = [thetas]
    cut = state.cutoffs
    if len(thetas) != cut.modes:
        raise ValueError(f"got {len(thetas)} angles for {cut.modes} modes")
    phase = np.zeros(cut.dim)
    for m, th in enumerate(thetas):
        phase = phase + float(th) * number_diagonal(cut, mode=m)
    u = np.exp(1j * phase)
    return DensityMatrix(cut, u[:, None] * state.data * u.conj()[None, :], tol=state.tol)
