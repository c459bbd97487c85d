"""Truncated Fock-space oracle for displacement-estimation Fisher matrices.

Probes are built by numerically exponentiating the squeezing generators and
applying them to thermal density matrices.  The SLD Fisher matrix comes from
the spectral sum over eigenpairs of the probe, the RLD Fisher matrix from the
operator-trace formula; both use the displacement generators G_q0 = p_hat and
G_p0 = -q_hat of the displaced mode.  This module is the slow ground-truth
path used to validate the closed Gaussian forms.

Two-mode squeezing conserves the photon-number difference n - m, so the
squeezer, the probe eigenbasis and the generator couplings all decompose over
difference sectors.  build_probe_fock keeps that block form, which lets the
oracle run at large truncations; a dense eigendecomposition path is kept for
generic (e.g. displaced) probes and for validating the block path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil

import numpy as np
from scipy.linalg import expm

_SQRT2 = np.sqrt(2.0)

DEFAULT_TAIL_TOL = 1e-10
DEFAULT_SLD_TOL = 1e-12   # skip spectral pairs with p_s + p_t below this
DEFAULT_INV_FLOOR = 1e-10  # eigenvalues below this are outside the rho^-1 support
_PURITY_TOL = 1e-8


class TruncationError(RuntimeError):
    """Fock-space truncation too small for the requested tolerance."""

    def __init__(self, message: str, tail_mass: float | None = None):
        super().__init__(message)
        self.tail_mass = tail_mass


class PureStateError(ValueError):
    """Raised where the right logarithmic derivative needs rho^-1 to exist."""


def ladder(dim: int) -> np.ndarray:
    """Annihilation operator on a dim-dimensional Fock space."""
    return np.diag(np.sqrt(np.arange(1.0, dim)), k=1)


def quadratures(dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Matrices of q = (a + a†)/sqrt(2) and p = (a - a†)/(i sqrt(2))."""
    a = ladder(dim)
    q = (a + a.T) / _SQRT2
    p = (a - a.T) / (1j * _SQRT2)
    return q, p


def thermal_probs(N: float, dim: int) -> np.ndarray:
    """Occupation probabilities N^n / (N+1)^(n+1) of a thermal state."""
    if N < 0:
        raise ValueError("mean photon number must be nonnegative")
    if N == 0:
        out = np.zeros(dim)
        out[0] = 1.0
        return out
    n = np.arange(dim)
    return np.exp(n * np.log(N / (N + 1.0)) - np.log(N + 1.0))


def _single_squeeze_unitary(r: float, dim: int) -> np.ndarray:
    """exp((r/2)(a†² - a²)); real orthogonal, squeezes p for r > 0."""
    a = ladder(dim)
    gen = 0.5 * r * (a.T @ a.T - a @ a)
    return expm(gen)


def _sector_states(dim: int, d: int) -> np.ndarray:
    """Flat indices n*dim + m of the two-mode states with n - m = d."""
    a0, b0 = max(d, 0), max(-d, 0)
    k = np.arange(dim - abs(d))
    return (k + a0) * dim + (k + b0)


def _sector_squeeze_block(r: float, dim: int, d: int) -> np.ndarray:
    """Block of exp(-r(a†b† - ab)) on the n - m = d sector; real orthogonal."""
    a0, b0 = max(d, 0), max(-d, 0)
    size = dim - abs(d)
    k = np.arange(1, size)
    c = r * np.sqrt((k + a0) * (k + b0))
    gen = np.diag(c, k=1) - np.diag(c, k=-1)
    return expm(gen)


def _coupling_block(dim: int, d: int, mode: int) -> np.ndarray:
    """Matrix elements of q_mode between sectors d (rows) and d+1 (columns).

    The p_mode block is the entrywise negative of this one; both follow from
    the single raising/lowering path that connects adjacent sectors.
    """
    sd, se = dim - abs(d), dim - abs(d + 1)
    block = np.zeros((sd, se))
    if mode == 0:
        if d >= 0:
            l = np.arange(se)
            block[l, l] = np.sqrt(l + d + 1.0) / _SQRT2
        else:
            l = np.arange(1, se)
            block[l - 1, l] = np.sqrt(l) / _SQRT2
    else:
        if d >= 0:
            l = np.arange(se)
            block[l + 1, l] = np.sqrt(l + 1.0) / _SQRT2
        else:
            l = np.arange(sd)
            block[l, l] = np.sqrt(l - d * 1.0) / _SQRT2
    return block


@dataclass(frozen=True)
class FockOperatorSet:
    """Truncated operators and probe density matrix for the oracle.

    For probes built by build_probe_fock the exact spectral decomposition
    (thermal eigenvalues, numerically exponentiated squeezer as eigenbasis)
    is carried along; two-mode probes keep it in difference-sector blocks.
    """

    kind: str
    params: tuple
    dim: int
    modes: int
    a: np.ndarray
    adag: np.ndarray
    q: np.ndarray
    p: np.ndarray
    eigs: np.ndarray | None = None
    basis: np.ndarray | None = None
    rho_dense: np.ndarray | None = None
    sector_U: list | None = field(default=None, repr=False)
    sector_probs: list | None = field(default=None, repr=False)

    @property
    def hilbert_dim(self) -> int:
        return self.dim ** self.modes

    @property
    def rho0(self) -> np.ndarray:
        """Dense probe density matrix (assembled on demand for sector sets)."""
        if self.rho_dense is not None:
            return self.rho_dense
        rho = np.zeros((self.hilbert_dim, self.hilbert_dim))
        for d, (U, pd) in enumerate(zip(self.sector_U, self.sector_probs)):
            idx = _sector_states(self.dim, d - (self.dim - 1))
            rho[np.ix_(idx, idx)] = (U * pd) @ U.T
        return rho

    def dense_basis(self) -> np.ndarray:
        """Dense eigenvector matrix; columns ordered to match eigenvalues()."""
        if self.basis is not None:
            return self.basis
        B = np.zeros((self.hilbert_dim, self.hilbert_dim))
        col = 0
        for d, U in enumerate(self.sector_U):
            idx = _sector_states(self.dim, d - (self.dim - 1))
            B[idx, col:col + idx.size] = U
            col += idx.size
        return B

    def eigenvalues(self) -> np.ndarray:
        if self.eigs is not None:
            return self.eigs
        if self.sector_probs is not None:
            return np.concatenate(self.sector_probs)
        return np.clip(np.linalg.eigvalsh(self.rho_dense), 0.0, None)

    def purity(self) -> float:
        if self.eigs is None and self.sector_probs is None:
            return float(np.sum(np.abs(self.rho_dense) ** 2).real)
        return float(np.sum(self.eigenvalues() ** 2))

    def number_diagonal(self) -> np.ndarray:
        """Diagonal of rho0 in the bare Fock basis."""
        if self.rho_dense is not None:
            return np.real(np.diag(self.rho_dense)).copy()
        diag = np.zeros(self.hilbert_dim)
        for d, (U, pd) in enumerate(zip(self.sector_U, self.sector_probs)):
            idx = _sector_states(self.dim, d - (self.dim - 1))
            diag[idx] = (U ** 2) @ pd
        return diag

    def tail_mass(self) -> float:
        """Probability weight on the top 10% of Fock levels of any mode."""
        cut = ceil(0.9 * self.dim)
        diag = self.number_diagonal()
        if self.modes == 1:
            return float(np.sum(diag[cut:]))
        grid = diag.reshape(self.dim, self.dim)
        inner = np.sum(grid[:cut, :cut])
        return float(max(np.sum(grid) - inner, 0.0))

    def q_mode(self, mode: int) -> np.ndarray:
        """Dense q operator of one mode on the full Hilbert space."""
        return self._embed(self.q, mode)

    def p_mode(self, mode: int) -> np.ndarray:
        return self._embed(self.p, mode)

    def _embed(self, op: np.ndarray, mode: int) -> np.ndarray:
        if not 0 <= mode < self.modes:
            raise ValueError("mode index out of range")
        if self.modes == 1:
            return op
        eye = np.eye(self.dim)
        return np.kron(op, eye) if mode == 0 else np.kron(eye, op)


def default_dim(r: float, N: float) -> int:
    """Per-mode truncation heuristic for squeezed thermal occupation."""
    return max(20, ceil(8.0 * (N + 1.0) * np.cosh(2.0 * r)))


def build_probe_fock(kind: str, r: float = 0.0, N: float = 0.0,
                     N2: float | None = None, dim: int | None = None,
                     tail_tol: float = DEFAULT_TAIL_TOL,
                     auto_escalate: bool = True,
                     max_dim: int | None = None) -> FockOperatorSet:
    """Build a probe density matrix by exponentiated squeezing of thermal states.

    Parameters
    ----------
    kind : {'single', 'tmst', 'tmst_asym'}
        Single-mode squeezed thermal, symmetric two-mode squeezed thermal, or
        asymmetric two-mode squeezed thermal (needs N2).
    dim : int, optional
        Per-mode truncation; defaults to a squeezed-occupation heuristic.
    tail_tol : float
        Maximum probability allowed in the top 10% of Fock levels. The
        truncation escalates until this holds, or TruncationError is raised.
    """
    if kind not in ("single", "tmst", "tmst_asym"):
        raise ValueError(f"unknown probe kind '{kind}'")
    if kind == "tmst_asym" and N2 is None:
        raise ValueError("tmst_asym needs N2")
    if r < 0:
        raise ValueError("squeezing parameter must be nonnegative")
    n_hi = max(N, N2 or 0.0)
    if dim is None:
        dim = default_dim(r, n_hi)
    if max_dim is None:
        max_dim = 600 if kind == "single" else 320

    while True:
        probe = _build_at_dim(kind, r, N, N2, dim)
        tail = probe.tail_mass()
        if tail < tail_tol:
            return probe
        if not auto_escalate or dim >= max_dim:
            raise TruncationError(
                f"truncation dim={dim} leaves tail mass {tail:.3e} "
                f"(tolerance {tail_tol:.1e})", tail_mass=tail)
        dim = min(max_dim, ceil(1.25 * dim) + 1)


def _build_at_dim(kind: str, r: float, N: float, N2: float | None,
                  dim: int) -> FockOperatorSet:
    a = ladder(dim).astype(complex)
    q, p = quadratures(dim)
    params = (r, N) if N2 is None else (r, N, N2)

    if kind == "single":
        probs = thermal_probs(N, dim)
        U = _single_squeeze_unitary(r, dim)
        rho = (U * probs) @ U.T
        return FockOperatorSet(kind=kind, params=params, dim=dim, modes=1,
                               a=a, adag=a.conj().T, q=q, p=p,
                               eigs=probs, basis=U, rho_dense=rho)

    p1 = thermal_probs(N, dim)
    p2 = thermal_probs(N if N2 is None else N2, dim)
    sector_U, sector_probs = [], []
    for d in range(-(dim - 1), dim):
        a0, b0 = max(d, 0), max(-d, 0)
        k = np.arange(dim - abs(d))
        sector_U.append(_sector_squeeze_block(r, dim, d))
        sector_probs.append(p1[k + a0] * p2[k + b0])
    return FockOperatorSet(kind=kind, params=params, dim=dim, modes=2,
                           a=a, adag=a.conj().T, q=q, p=p,
                           sector_U=sector_U, sector_probs=sector_probs)


def displace_fock(probe: FockOperatorSet, mode: int, q0: float, p0: float) -> FockOperatorSet:
    """Displaced copy of the probe (dense route; meant for moderate dims)."""
    qm = probe.q_mode(mode)
    pm = probe.p_mode(mode)
    D = expm(1j * p0 * qm - 1j * q0 * pm)
    rho = D @ probe.rho0 @ D.conj().T
    basis = D @ probe.dense_basis()
    return FockOperatorSet(kind=probe.kind, params=probe.params, dim=probe.dim,
                           modes=probe.modes, a=probe.a, adag=probe.adag,
                           q=probe.q, p=probe.p, eigs=probe.eigenvalues(),
                           basis=basis, rho_dense=rho)


def _dense_spectral(probe: FockOperatorSet) -> tuple[np.ndarray, np.ndarray]:
    if probe.eigs is not None and probe.basis is not None:
        return probe.eigs, probe.basis
    vals, vecs = np.linalg.eigh(probe.rho0)
    vals = np.clip(vals, 0.0, None)
    return vals, vecs


def sld_fisher_fock(probe: FockOperatorSet, displaced_mode: int = 0,
                    pair_tol: float = DEFAULT_SLD_TOL) -> np.ndarray:
    """SLD Fisher matrix H for the displacement pair (q0, p0).

    Spectral sum over eigenpairs of the probe with weights
    p_s ((p_s - p_t)/(p_s + p_t))^2; pairs with p_s + p_t below pair_tol are
    skipped (support-orthogonal sectors carry no information).
    """
    if probe.sector_U is not None:
        hqq, _, _ = _sector_sums(probe, displaced_mode, pair_tol, None)
        return np.diag([hqq, hqq])

    eigs, basis = _dense_spectral(probe)
    gq = basis.conj().T @ probe.p_mode(displaced_mode) @ basis
    gp = -(basis.conj().T @ probe.q_mode(displaced_mode) @ basis)
    ps, pt = eigs[:, None], eigs[None, :]
    denom = ps + pt
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(denom > pair_tol, ps * ((ps - pt) / denom) ** 2, 0.0)
    np.fill_diagonal(w, 0.0)
    H = np.empty((2, 2))
    H[0, 0] = 4.0 * np.sum(w * (gq * gq.T)).real
    H[1, 1] = 4.0 * np.sum(w * (gp * gp.T)).real
    H[0, 1] = H[1, 0] = 2.0 * np.sum(w * (gq * gp.T + gp * gq.T)).real
    return H


def rld_fisher_fock(probe: FockOperatorSet, displaced_mode: int = 0,
                    inv_floor: float = DEFAULT_INV_FLOOR) -> np.ndarray:
    """RLD Fisher matrix J, Hermitian, using rho^-1 on its numerical support.

    Raises PureStateError when the probe has no usable inverse (pure states),
    in which case callers fall back to closed-form limits.
    """
    if probe.purity() > 1.0 - _PURITY_TOL:
        raise PureStateError("RLD undefined for pure states")
    if probe.eigs is not None or probe.sector_probs is not None:
        # built probes carry exact thermal eigenvalues; exact zeros mean the
        # probe is not full rank and rho^-1 does not exist
        if np.any(probe.eigenvalues() == 0.0):
            raise PureStateError(
                "RLD undefined for pure states (probe is rank deficient)")

    if probe.sector_U is not None:
        _, jdiag, jqp = _sector_sums(probe, displaced_mode, DEFAULT_SLD_TOL,
                                     inv_floor)
        return np.array([[jdiag, jqp], [np.conj(jqp), jdiag]])

    eigs, basis = _dense_spectral(probe)
    if np.count_nonzero(eigs > inv_floor) < 2:
        raise PureStateError("RLD undefined for pure states")
    gq = basis.conj().T @ probe.p_mode(displaced_mode) @ basis
    gp = -(basis.conj().T @ probe.q_mode(displaced_mode) @ basis)
    pn, pm = eigs[:, None], eigs[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        R = np.where(pn > inv_floor, (pn - pm) ** 2 / pn, 0.0)
    jqq = np.sum(R * (gq * gq.T))
    jpp = np.sum(R * (gp * gp.T))
    jqp = np.sum(R * (gq * gp.T))
    jpq = np.sum(R * (gp * gq.T))
    J = np.array([[jqq, jqp], [jpq, jpp]])
    return 0.5 * (J + J.conj().T)


def _sector_sums(probe: FockOperatorSet, displaced_mode: int,
                 pair_tol: float, inv_floor: float | None):
    """Accumulate the spectral SLD sum and the RLD trace sum over sectors.

    The generator couplings only connect adjacent difference sectors, and the
    p coupling block is the negative of the q block, so a single transformed
    block per sector pair carries everything.  Isotropy (H_qq = H_pp,
    J_qq = J_pp, H_qp = 0) is structural for these probes.
    """
    dim = probe.dim
    want_rld = inv_floor is not None
    # Sector (d, d+1) lowers n for mode 0 but raises m for mode 1, which
    # flips the sign relating the p block to the q block.
    sign = -1.0 if displaced_mode == 0 else 1.0
    hqq = 0.0
    jdiag = 0.0
    jqp_imag = 0.0
    for d in range(-(dim - 1), dim - 1):
        Ud = probe.sector_U[d + dim - 1]
        Ue = probe.sector_U[d + dim]
        pd = probe.sector_probs[d + dim - 1]
        pe = probe.sector_probs[d + dim]
        B = _coupling_block(dim, d, displaced_mode)
        T2 = (Ud.T @ (B @ Ue)) ** 2

        a, b = pd[:, None], pe[None, :]
        denom = a + b
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(denom > pair_tol,
                         (a + b) * ((a - b) / denom) ** 2, 0.0)
        hqq += 4.0 * np.sum(w * T2)
        if want_rld:
            with np.errstate(divide="ignore", invalid="ignore"):
                r1 = np.where(a > inv_floor, (a - b) ** 2 / a, 0.0)
                r2 = np.where(b > inv_floor, (b - a) ** 2 / b, 0.0)
            jdiag += np.sum((r1 + r2) * T2)
            jqp_imag += sign * np.sum((r2 - r1) * T2)
    return hqq, jdiag, 1j * jqp_imag


def moments_fock(probe: FockOperatorSet, monomials) -> list[complex]:
    """Trace moments tr[rho0 * prod(ops)] for validation against Gaussian moments.

    Each monomial is a sequence of (name, mode) pairs, name in
    {'q', 'p', 'a', 'adag'}, multiplied left to right.
    """
    rho = probe.rho0
    table = {"q": probe.q, "p": probe.p, "a": probe.a, "adag": probe.adag}
    out = []
    for monomial in monomials:
        per_mode = [np.eye(probe.dim, dtype=complex) for _ in range(probe.modes)]
        for name, mode in monomial:
            if not 0 <= mode < probe.modes:
                raise ValueError("mode index out of range")
            per_mode[mode] = per_mode[mode] @ table[name]
        if probe.modes == 1:
            out.append(complex(np.trace(rho @ per_mode[0])))
        else:
            T = rho.reshape(probe.dim, probe.dim, probe.dim, probe.dim)
            val = np.einsum("nmab,an,bm->", T.astype(complex),
                            per_mode[0], per_mode[1], optimize=True)
            out.append(complex(val))
    return out


def moment_fock(probe: FockOperatorSet, monomial) -> complex:
    return moments_fock(probe, [monomial])[0]


def fock_fisher_converged(kind: str, r: float, N: float, N2: float | None = None,
                          dim: int | None = None, step: int = 5,
                          tol: float = 1e-8, **build_kwargs):
    """Compute (H, J) at dim and dim + step and insist they agree within tol."""
    probe = build_probe_fock(kind, r, N, N2, dim=dim, **build_kwargs)
    bigger = build_probe_fock(kind, r, N, N2, dim=probe.dim + step,
                              **{**build_kwargs, "auto_escalate": False,
                                 "tail_tol": np.inf})
    H1, H2 = sld_fisher_fock(probe), sld_fisher_fock(bigger)
    J1, J2 = rld_fisher_fock(probe), rld_fisher_fock(bigger)
    drift = max(np.max(np.abs(H1 - H2)), np.max(np.abs(J1 - J2)))
    if drift > tol:
        raise TruncationError(
            f"Fisher matrices drift by {drift:.3e} between dim={probe.dim} "
            f"and dim={bigger.dim}", tail_mass=probe.tail_mass())
    return H1, J1
