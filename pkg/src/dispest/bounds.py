"""Closed-form Gaussian Fisher matrices and Cramer-Rao bounds.

For a probe displaced in phase space, the SLD Fisher matrix is the displaced
mode's block of cov^-1 and the inverse RLD Fisher matrix is the Schur
complement of cov + (i/2) Omega onto that mode.  The bounds on the summed
variances are

    B_S = tr[G (H + A)^-1] / M
    B_R = (tr[G Re X] + tr|G Im X|) / M,   X = (J + A)^-1

with weight G, prior Fisher matrix A and shot count M.  B_MI = max(B_S, B_R).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import (GaussianState, displace, make_squeezed_thermal,
                       make_tmst, symplectic_form, vacuum)

_PURE_TOL = 1e-9
_EIG_CLIP = 1e-14


class RLDUnavailableError(RuntimeError):
    """RLD bound could not be evaluated and no limiting value applies."""


@dataclass(frozen=True)
class FisherMatrices:
    """SLD matrix H and inverse RLD matrix J^-1 for the pair (q0, p0).

    J^-1 is stored rather than J because it exists for every physical state,
    pure ones included, and every bound formula consumes J^-1.
    """

    H: np.ndarray
    j_inv: np.ndarray
    pure: bool
    mode: int


@dataclass(frozen=True)
class BoundQuery:
    """Probe family plus estimation context for a bound evaluation.

    kind is one of 'coherent', 'single', 'tmst', 'tmst_asym'.  delta is the
    standard deviation of the Gaussian prior on each parameter (None for a
    flat prior), weight a 2x2 positive definite matrix (None means identity),
    shots the number of independent repetitions M.
    """

    kind: str
    r: float = 0.0
    N: float = 0.0
    N2: float | None = None
    delta: float | None = None
    weight: np.ndarray | None = None
    shots: int = 1

    def __post_init__(self):
        if self.kind not in ("coherent", "single", "tmst", "tmst_asym"):
            raise ValueError(f"unknown probe kind '{self.kind}'")
        if self.kind == "tmst_asym" and self.N2 is None:
            raise ValueError("tmst_asym needs N2")
        if self.r < 0 or self.N < 0 or (self.N2 is not None and self.N2 < 0):
            raise ValueError("r and N must be nonnegative")
        if self.delta is not None and not self.delta > 0:
            raise ValueError("prior width must be positive")
        if self.shots < 1:
            raise ValueError("shots must be at least 1")
        if self.weight is not None:
            w = np.asarray(self.weight, dtype=float)
            if w.shape != (2, 2) or np.linalg.eigvalsh(0.5 * (w + w.T)).min() <= 0:
                raise ValueError("weight must be 2x2 positive definite")

    def probe_state(self) -> GaussianState:
        if self.kind == "coherent":
            return vacuum(1)
        if self.kind == "single":
            return make_squeezed_thermal(self.r, self.N)
        return make_tmst(self.r, self.N, self.N2)


@dataclass(frozen=True)
class BoundReport:
    """Evaluated bounds with the most-informative branch and thresholds."""

    b_sld: float
    b_rld: float
    b_mi: float
    branch: str
    r_ths: float | None = None
    r_sql: float | None = None
    scheme_variance: float | None = None
    gap: float | None = None
    query: BoundQuery | None = None


def _hermitian_pinv(mat: np.ndarray, floor: float = 1e-12) -> np.ndarray:
    vals, vecs = np.linalg.eigh(mat)
    cut = floor * max(np.max(np.abs(vals)), 1.0)
    inv = np.where(np.abs(vals) > cut, 1.0 / np.where(vals == 0, 1.0, vals), 0.0)
    return (vecs * inv) @ vecs.conj().T


def gaussian_fisher(state: GaussianState, mode: int = 0) -> FisherMatrices:
    """Fisher matrices for displacement of one mode of a Gaussian probe."""
    if not 0 <= mode < state.modes:
        raise ValueError("mode index out of range")
    rows = [2 * mode, 2 * mode + 1]
    others = [k for k in range(2 * state.modes) if k not in rows]

    H = np.linalg.inv(state.cov)[np.ix_(rows, rows)]
    H = 0.5 * (H + H.T)

    M = state.cov + 0.5j * symplectic_form(state.modes)
    if others:
        Mdd = M[np.ix_(rows, rows)]
        Mdo = M[np.ix_(rows, others)]
        Moo = M[np.ix_(others, others)]
        j_inv = Mdd - Mdo @ _hermitian_pinv(Moo) @ Mdo.conj().T
    else:
        j_inv = M
    j_inv = 0.5 * (j_inv + j_inv.conj().T)
    pure = state.purity > 1.0 - _PURE_TOL
    return FisherMatrices(H=H, j_inv=j_inv, pure=pure, mode=mode)


def _abs_eig_2x2(mat: np.ndarray) -> float:
    """Sum of singular values of a 2x2 matrix (trace norm), eigenvalues clipped."""
    g = mat.conj().T @ mat
    m = 0.5 * (g[0, 0] + g[1, 1]).real
    det = (g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]).real
    spread = np.sqrt(max(m * m - det, 0.0))
    lo, hi = m - spread, m + spread
    lo = 0.0 if lo < _EIG_CLIP else lo
    hi = 0.0 if hi < _EIG_CLIP else hi
    return float(np.sqrt(hi) + np.sqrt(lo))


def bound_sld(fm: FisherMatrices, weight: np.ndarray | None = None,
              prior: np.ndarray | None = None, shots: int = 1) -> float:
    """SLD Cramer-Rao bound tr[G (H + A)^-1] / M; +inf when H + A is singular."""
    A = np.zeros((2, 2)) if prior is None else np.asarray(prior, dtype=float)
    G = np.eye(2) if weight is None else np.asarray(weight, dtype=float)
    total = fm.H + A
    if abs(np.linalg.det(total)) < 1e-300:
        return float("inf")
    return float(np.trace(G @ np.linalg.inv(total)).real) / shots


def bound_rld(fm: FisherMatrices, weight: np.ndarray | None = None,
              prior: np.ndarray | None = None, shots: int = 1) -> float:
    """RLD Cramer-Rao bound (tr[G Re X] + tr|G Im X|) / M with X = (J + A)^-1.

    X is built from the stored J^-1 as (I + J^-1 A)^-1 J^-1, which stays finite
    for pure probes where J itself diverges.
    """
    G = np.eye(2) if weight is None else np.asarray(weight, dtype=float)
    if prior is None:
        X = fm.j_inv
    else:
        A = np.asarray(prior, dtype=complex)
        lhs = np.eye(2) + fm.j_inv @ A
        if abs(np.linalg.det(lhs)) < 1e-14:
            raise RLDUnavailableError("RLD bound unavailable: singular J + A")
        X = np.linalg.solve(lhs, fm.j_inv)
        X = 0.5 * (X + X.conj().T)
    real_part = float(np.trace(G @ X.real))
    imag_part = _abs_eig_2x2(G @ X.imag)
    return (real_part + imag_part) / shots


def thresholds(N: float) -> tuple[float, float]:
    """Squeezing thresholds (r_ths, r_sql) of the symmetric two-mode probe.

    r_ths = arccosh(2N+1)/2 is where the most-informative branch switches from
    RLD to SLD; r_sql = ln(1 + 4N + 4N^2)/4 is where the double-homodyne
    scheme starts to beat the standard quantum limit.
    """
    if N < 0:
        raise ValueError("mean photon number must be nonnegative")
    r_ths = 0.5 * np.arccosh(2.0 * N + 1.0)
    r_sql = 0.25 * np.log1p(4.0 * N + 4.0 * N * N)
    return float(r_ths), float(r_sql)


def scheme_variance_sum(r: float, N: float,
                        jitter: tuple[float, float] | None = None) -> float:
    """Variance sum 2(2N+1)e^{-2r} of the double-homodyne scheme.

    An imperfect displacement with Gaussian jitter (dq^2, dp^2) adds its
    variances on top.
    """
    if r < 0 or N < 0:
        raise ValueError("r and N must be nonnegative")
    extra = sum(jitter) if jitter is not None else 0.0
    return 2.0 * (2.0 * N + 1.0) * np.exp(-2.0 * r) + extra


def _tmst_flat_bounds(r: float, N: float) -> tuple[float, float, float, str]:
    """Closed-form flat-prior bounds of the symmetric two-mode probe.

    The RLD value for a pure probe (N = 0) is the N -> 0+ limit, zero, so the
    most informative branch is the SLD one on the whole N = 0 line.
    """
    b_s = (2.0 * N + 1.0) / np.cosh(2.0 * r)
    if N == 0:
        b_r = 0.0
    else:
        b_r = 4.0 * N * (1.0 + N) / ((2.0 * N + 1.0) * np.cosh(2.0 * r) - 1.0)
    r_ths, _ = thresholds(N)
    if r < r_ths:
        return b_s, b_r, b_r, "RLD"
    return b_s, b_r, b_s, "SLD"


def gap_D(r: float, N: float) -> float:
    """Relative gap (E - B_MI)/B_MI between the scheme variance sum and the
    flat-prior most-informative bound; equals e^{-4r} on the N = 0 line."""
    if r < 0 or N < 0:
        raise ValueError("r and N must be nonnegative")
    _, _, b_mi, _ = _tmst_flat_bounds(r, N)
    E = scheme_variance_sum(r, N)
    return float((E - b_mi) / b_mi)


def prior_fisher_gaussian(delta: float) -> np.ndarray:
    """Fisher matrix I/delta^2 of the product Gaussian prior on (q0, p0)."""
    if np.isinf(delta):
        return np.zeros((2, 2))
    if not delta > 0:
        raise ValueError("prior width must be positive")
    return np.eye(2) / (delta * delta)


@dataclass(frozen=True)
class ScalingFactors:
    """Estimator scalings and averaged mean squared errors under a Gaussian prior."""

    k_c: float
    k_min: float
    mse_min: float
    mse_kc: float


def scaling_factors(var0: float, delta: float) -> ScalingFactors:
    """Scalings K_c = D^2/(1+D^2) and K_min = D^2/(Var0+D^2), with the averaged
    two-parameter MSE each achieves when the unscaled per-parameter variance
    is Var0."""
    if not var0 > 0:
        raise ValueError("var0 must be positive")
    if np.isinf(delta):
        return ScalingFactors(1.0, 1.0, 2.0 * var0, 2.0 * var0)
    if not delta > 0:
        raise ValueError("prior width must be positive")
    d2 = delta * delta
    k_c = d2 / (1.0 + d2)
    k_min = d2 / (var0 + d2)
    mse_min = 2.0 * var0 * d2 / (var0 + d2)
    mse_kc = 2.0 * d2 * (1.0 + d2 * var0) / (1.0 + d2) ** 2
    return ScalingFactors(float(k_c), float(k_min), float(mse_min), float(mse_kc))


def bound_most_informative(query: BoundQuery) -> BoundReport:
    """Evaluate B_S, B_R and B_MI = max(B_S, B_R) for a probe family.

    For the symmetric two-mode probe the report also carries the branch
    thresholds, the scheme variance sum, and (flat prior) the optimality gap.
    For pure two-mode probes B_R is the zero N -> 0+ limit, so B_MI follows
    the SLD branch there.
    """
    probe = query.probe_state()
    fm = gaussian_fisher(probe, mode=0)
    prior = None if query.delta is None else prior_fisher_gaussian(query.delta)

    b_s = bound_sld(fm, weight=query.weight, prior=prior, shots=query.shots)
    if query.kind in ("tmst", "tmst_asym") and fm.pure:
        b_r = 0.0
    else:
        b_r = bound_rld(fm, weight=query.weight, prior=prior, shots=query.shots)

    if b_r > b_s:
        b_mi, branch = b_r, "RLD"
    else:
        b_mi, branch = b_s, "SLD"

    r_ths = r_sql = scheme_variance = gap = None
    if query.kind == "tmst":
        r_ths, r_sql = thresholds(query.N)
        scheme_variance = scheme_variance_sum(query.r, query.N)
        if query.delta is None and query.weight is None and query.shots == 1:
            gap = gap_D(query.r, query.N)
    return BoundReport(b_sld=float(b_s), b_rld=float(b_r), b_mi=float(b_mi),
                       branch=branch, r_ths=r_ths, r_sql=r_sql,
                       scheme_variance=scheme_variance, gap=gap, query=query)
