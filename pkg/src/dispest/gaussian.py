"""Gaussian states of bosonic modes: means, covariance matrices, symplectic maps.

Conventions: hbar = 1 and [q, p] = i, so the vacuum covariance is I/2.
Quadratures are ordered (q1, p1, ..., qm, pm).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

VACUUM_VARIANCE = 0.5

_SYMMETRY_TOL = 1e-12
_PHYSICALITY_TOL = 1e-10
_SYMPLECTIC_TOL = 1e-10


def symplectic_form(modes: int) -> np.ndarray:
    """Standard symplectic form, block-diagonal [[0, 1], [-1, 0]] per mode."""
    omega = np.zeros((2 * modes, 2 * modes))
    for k in range(modes):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class GaussianState:
    """Immutable Gaussian state given by its mean vector and covariance matrix.

    Parameters
    ----------
    mean : ndarray, shape (2m,)
        First moments (q1, p1, ..., qm, pm).
    cov : ndarray, shape (2m, 2m)
        Symmetric covariance matrix satisfying cov + (i/2) Omega >= 0.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = _readonly(np.atleast_1d(self.mean))
        cov = _readonly(np.atleast_2d(self.cov))
        if mean.ndim != 1 or cov.shape != (mean.size, mean.size):
            raise ValueError("mean must have length 2m and cov shape (2m, 2m)")
        if mean.size % 2 != 0 or mean.size == 0:
            raise ValueError("mean length must be a positive even number")
        if not np.allclose(cov, cov.T, atol=_SYMMETRY_TOL, rtol=0.0):
            raise ValueError("covariance matrix is not symmetric")
        m = mean.size // 2
        herm = cov + 0.5j * symplectic_form(m)
        if np.linalg.eigvalsh(herm).min() < -_PHYSICALITY_TOL:
            raise ValueError("covariance matrix violates the uncertainty principle")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def modes(self) -> int:
        return self.mean.size // 2

    @property
    def purity(self) -> float:
        """Purity mu = 1 / sqrt(det(2 cov)); equals 1 for pure states."""
        return 1.0 / np.sqrt(np.linalg.det(2.0 * self.cov))

    def symplectic_eigenvalues(self) -> np.ndarray:
        """Symplectic spectrum of cov; all values are 1/2 iff the state is pure."""
        ev = np.linalg.eigvals(symplectic_form(self.modes) @ self.cov)
        return np.sort(np.abs(ev))[::2]

    def reduced(self, mode: int) -> "GaussianState":
        """Single-mode marginal state."""
        sl = _mode_slice(self, mode)
        return GaussianState(self.mean[sl], self.cov[sl, sl])


@dataclass(frozen=True)
class SymplecticTransform:
    """Affine Gaussian map: cov -> S cov S^T, mean -> S mean + d."""

    S: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        S = _readonly(np.atleast_2d(self.S))
        d = _readonly(np.atleast_1d(self.d))
        if S.shape[0] != S.shape[1] or S.shape[0] != d.size:
            raise ValueError("S must be square with matching displacement length")
        m = S.shape[0] // 2
        omega = symplectic_form(m)
        if not np.allclose(S @ omega @ S.T, omega, atol=_SYMPLECTIC_TOL, rtol=0.0):
            raise ValueError("matrix S is not symplectic")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "d", d)

    def apply(self, state: GaussianState) -> GaussianState:
        if self.S.shape[0] != 2 * state.modes:
            raise ValueError("transform and state mode counts differ")
        return GaussianState(self.S @ state.mean + self.d,
                             self.S @ state.cov @ self.S.T)


def _mode_slice(state: GaussianState, mode: int) -> slice:
    if not 0 <= mode < state.modes:
        raise ValueError(f"mode index {mode} out of range for {state.modes} modes")
    return slice(2 * mode, 2 * mode + 2)


def _embed(block: np.ndarray, modes: int, targets: tuple[int, ...]) -> np.ndarray:
    """Place a symplectic block acting on `targets` into an identity on all modes."""
    S = np.eye(2 * modes)
    idx = np.concatenate([[2 * t, 2 * t + 1] for t in targets])
    S[np.ix_(idx, idx)] = block
    return S


def vacuum(modes: int = 1) -> GaussianState:
    return make_thermal(0.0, modes)


def make_thermal(N: float, modes: int = 1) -> GaussianState:
    """Thermal state with mean photon number N per mode: cov = (2N+1)/2 I."""
    if N < 0:
        raise ValueError("mean photon number must be nonnegative")
    dim = 2 * modes
    return GaussianState(np.zeros(dim), (2.0 * N + 1.0) / 2.0 * np.eye(dim))


def squeeze_single(state: GaussianState, mode: int, r: float) -> GaussianState:
    """Single-mode squeezer; r > 0 reduces Var(p) by e^{-2r} and grows Var(q)."""
    _mode_slice(state, mode)
    block = np.diag([np.exp(r), np.exp(-r)])
    S = _embed(block, state.modes, (mode,))
    return SymplecticTransform(S, np.zeros(2 * state.modes)).apply(state)


def squeeze_two(state: GaussianState, modes: tuple[int, int], r: float) -> GaussianState:
    """Two-mode squeezer on a pair of modes.

    On thermal inputs this produces covariance blocks A I on the diagonal and
    -C Z off-diagonal (Z = diag(1, -1)), with A = (2N+1)cosh(2r)/2 and
    C = (2N+1)sinh(2r)/2, i.e. q1 - q2 and p1 + p2 are the squeezed pairs.
    """
    i, j = modes
    if i == j:
        raise ValueError("two-mode squeezing needs two distinct modes")
    _mode_slice(state, i)
    _mode_slice(state, j)
    Z = np.diag([1.0, -1.0])
    ch, sh = np.cosh(r), np.sinh(r)
    block = np.block([[ch * np.eye(2), -sh * Z], [-sh * Z, ch * np.eye(2)]])
    S = _embed(block, state.modes, (i, j))
    return SymplecticTransform(S, np.zeros(2 * state.modes)).apply(state)


def make_squeezed_thermal(r: float, N: float) -> GaussianState:
    """Single-mode squeezed thermal state."""
    return squeeze_single(make_thermal(N, 1), 0, r)


def make_tmst(r: float, N: float, N2: float | None = None) -> GaussianState:
    """Two-mode squeezed thermal state; pass N2 for an asymmetric thermal input."""
    if N < 0 or (N2 is not None and N2 < 0):
        raise ValueError("mean photon numbers must be nonnegative")
    n2 = N if N2 is None else N2
    dim = 4
    cov = np.diag([(2 * N + 1) / 2.0, (2 * N + 1) / 2.0,
                   (2 * n2 + 1) / 2.0, (2 * n2 + 1) / 2.0])
    return squeeze_two(GaussianState(np.zeros(dim), cov), (0, 1), r)


def displace(state: GaussianState, mode: int, q0: float, p0: float) -> GaussianState:
    """Phase-space displacement of one mode; covariance is unchanged."""
    sl = _mode_slice(state, mode)
    mean = state.mean.copy()
    mean[sl] += (q0, p0)
    return GaussianState(mean, state.cov)


def phase_rotate(state: GaussianState, mode: int, theta: float) -> GaussianState:
    """Phase-space rotation of one mode by angle theta."""
    _mode_slice(state, mode)
    c, s = np.cos(theta), np.sin(theta)
    S = _embed(np.array([[c, s], [-s, c]]), state.modes, (mode,))
    return SymplecticTransform(S, np.zeros(2 * state.modes)).apply(state)


def beamsplit_balanced(state: GaussianState, modes: tuple[int, int] = (0, 1)) -> GaussianState:
    """Balanced beam splitter mixing two modes.

    Convention: output mode i carries (R_i - R_j)/sqrt(2) and output mode j
    carries (R_i + R_j)/sqrt(2) for both quadratures.  With the squeeze_two
    convention above, a two-mode squeezed thermal input factorizes into a
    p-squeezed output at mode i and a q-squeezed output at mode j, both
    displaced by the input-mode-i displacement rescaled by 1/sqrt(2).
    """
    i, j = modes
    if i == j:
        raise ValueError("beam splitter needs two distinct modes")
    _mode_slice(state, i)
    _mode_slice(state, j)
    I2 = np.eye(2)
    block = np.block([[I2, -I2], [I2, I2]]) / np.sqrt(2.0)
    S = _embed(block, state.modes, (i, j))
    return SymplecticTransform(S, np.zeros(2 * state.modes)).apply(state)


def homodyne_marginal(state: GaussianState, mode: int, quadrature: str) -> tuple[float, float]:
    """Mean and variance of the Gaussian marginal of one quadrature."""
    sl = _mode_slice(state, mode)
    if quadrature not in ("q", "p"):
        raise ValueError("quadrature must be 'q' or 'p'")
    k = sl.start + (0 if quadrature == "q" else 1)
    return float(state.mean[k]), float(state.cov[k, k])


def heterodyne_outcome_cov(state: GaussianState, mode: int) -> np.ndarray:
    """Covariance of the complex-plane heterodyne outcome: mode cov + I/2."""
    sl = _mode_slice(state, mode)
    return state.cov[sl, sl] + 0.5 * np.eye(2)
