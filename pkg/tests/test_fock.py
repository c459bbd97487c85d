import numpy as np
import pytest

from dispest import (FockOperatorSet, PureStateError, TruncationError,
                     build_probe_fock, displace_fock, fock_fisher_converged,
                     gaussian_fisher, make_squeezed_thermal, make_tmst,
                     moment_fock, moments_fock, rld_fisher_fock,
                     sld_fisher_fock)


def dense_copy(probe):
    """Strip the sector decomposition to force the generic dense path."""
    return FockOperatorSet(kind=probe.kind, params=probe.params, dim=probe.dim,
                           modes=probe.modes, a=probe.a, adag=probe.adag,
                           q=probe.q, p=probe.p, rho_dense=probe.rho0)


def test_vacuum_probe_is_ground_state():
    probe = build_probe_fock("single", 0.0, 0.0, dim=10)
    expected = np.zeros((10, 10))
    expected[0, 0] = 1.0
    assert np.allclose(probe.rho0, expected)


def test_probe_density_matrix_invariants():
    probe = build_probe_fock("single", 0.5, 0.4)
    rho = probe.rho0
    assert np.allclose(rho, rho.conj().T, atol=1e-12)
    assert np.isclose(np.trace(rho).real, 1.0, atol=1e-10)
    assert np.linalg.eigvalsh(rho).min() > -1e-10
    assert probe.tail_mass() < 1e-10


def test_commutator_on_bulk():
    probe = build_probe_fock("single", 0.0, 0.0, dim=30)
    comm = probe.q @ probe.p - probe.p @ probe.q
    bulk = np.diag(comm)[:-1]
    assert np.allclose(bulk, 1j, atol=1e-12)


def test_moments_examples():
    vac = build_probe_fock("single", 0.0, 0.0, dim=10)
    assert np.isclose(moment_fock(vac, [("q", 0), ("q", 0)]).real, 0.5)
    th = build_probe_fock("single", 0.0, 2.0)
    assert np.isclose(moment_fock(th, [("p", 0), ("p", 0)]).real, 2.5, atol=1e-9)
    tm = build_probe_fock("tmst", 0.5, 0.0, dim=25)
    assert np.isclose(moment_fock(tm, [("q", 0), ("q", 0)]).real,
                      np.cosh(1.0) / 2, atol=1e-8)


def test_tmst_cross_moment_matches_covariance():
    probe = build_probe_fock("tmst", 0.5, 0.2, dim=25)
    got = moment_fock(probe, [("q", 0), ("q", 1)]).real
    expected = make_tmst(0.5, 0.2).cov[0, 2]
    assert np.isclose(abs(got), (2 * 0.2 + 1) * np.sinh(1.0) / 2, atol=1e-8)
    assert np.isclose(got, expected, atol=1e-8)


def test_single_mode_moments_match_gaussian():
    r, N = 0.4, 0.3
    probe = build_probe_fock("single", r, N)
    st = make_squeezed_thermal(r, N)
    qq, pp, m1, m2 = moments_fock(probe, [
        [("q", 0), ("q", 0)], [("p", 0), ("p", 0)], [("q", 0)], [("p", 0)]])
    assert abs(qq.real - st.cov[0, 0]) < 1e-8
    assert abs(pp.real - st.cov[1, 1]) < 1e-8
    assert abs(m1) < 1e-10 and abs(m2) < 1e-10


def test_sld_vacuum():
    probe = build_probe_fock("single", 0.0, 0.0, dim=12)
    H = sld_fisher_fock(probe)
    assert np.allclose(H, 2.0 * np.eye(2), atol=1e-10)
    assert np.isclose(np.trace(np.linalg.inv(H)), 1.0)


def test_rld_rejects_pure_states():
    with pytest.raises(PureStateError):
        rld_fisher_fock(build_probe_fock("single", 0.0, 0.0, dim=12))
    with pytest.raises(PureStateError):
        rld_fisher_fock(build_probe_fock("tmst", 0.6, 0.0, dim=30))


def test_rld_thermal_yuen_lax():
    probe = build_probe_fock("single", 0.0, 1.0)
    J = rld_fisher_fock(probe)
    j_inv = np.linalg.inv(J)
    assert np.allclose(j_inv, np.array([[1.5, 0.5j], [-0.5j, 1.5]]), atol=1e-9)
    b_r = np.trace(j_inv.real) + 2 * abs(j_inv[0, 1].imag)
    assert np.isclose(b_r, 4.0, atol=1e-8)


def test_rld_tmst_closed_form_value():
    probe = build_probe_fock("tmst", 0.3, 1.0)
    j_inv = np.linalg.inv(rld_fisher_fock(probe))
    b_r = np.trace(j_inv.real).real + 2 * abs(j_inv[0, 1].imag)
    assert np.isclose(b_r, 8.0 / (3.0 * np.cosh(0.6) - 1.0), rtol=1e-7)
    assert np.isclose(b_r, 3.1294, atol=5e-5)


def test_single_squeezed_thermal_traces():
    r, N = 0.6, 0.5
    probe = build_probe_fock("single", r, N)
    H = sld_fisher_fock(probe)
    assert np.isclose(np.trace(np.linalg.inv(H)), (2 * N + 1) * np.cosh(2 * r),
                      rtol=1e-8)
    j_inv = np.linalg.inv(rld_fisher_fock(probe))
    b_r = np.trace(j_inv.real) + 2 * abs(j_inv[0, 1].imag)
    assert np.isclose(b_r, (2 * N + 1) * np.cosh(2 * r) + 1.0, rtol=1e-7)


@pytest.mark.parametrize("r,N", [(0.0, 0.5), (0.3, 0.2), (0.6, 1.0)])
def test_entrywise_equivalence_with_gaussian_forms(r, N):
    probe = build_probe_fock("tmst", r, N)
    fm = gaussian_fisher(make_tmst(r, N))
    H = sld_fisher_fock(probe)
    assert np.allclose(H, fm.H, rtol=1e-6, atol=1e-9)
    j_inv = np.linalg.inv(rld_fisher_fock(probe))
    assert np.allclose(j_inv, fm.j_inv, rtol=1e-6, atol=1e-8)


@pytest.mark.parametrize("mode", [0, 1])
def test_sector_path_matches_dense_path(mode):
    probe = build_probe_fock("tmst_asym", 0.4, 0.6, 0.25, dim=18,
                             tail_tol=np.inf, auto_escalate=False)
    dense = dense_copy(probe)
    assert np.allclose(sld_fisher_fock(probe, mode), sld_fisher_fock(dense, mode),
                       atol=1e-9)
    assert np.allclose(rld_fisher_fock(probe, mode), rld_fisher_fock(dense, mode),
                       atol=1e-8)


def test_fisher_independent_of_displacement():
    probe = build_probe_fock("single", 0.3, 0.5, dim=70)
    moved = displace_fock(probe, 0, 0.7, -0.3)
    assert np.allclose(sld_fisher_fock(moved), sld_fisher_fock(probe), atol=1e-10)
    assert np.allclose(rld_fisher_fock(moved), rld_fisher_fock(probe), atol=1e-10)


def test_truncation_error_reports_tail():
    with pytest.raises(TruncationError) as err:
        build_probe_fock("single", 1.0, 2.0, dim=10, auto_escalate=False)
    assert err.value.tail_mass > 1e-10


def test_auto_escalation():
    probe = build_probe_fock("tmst", 0.5, 0.2, dim=25)
    assert probe.dim >= 25
    assert probe.tail_mass() < 1e-10


def test_convergence_helper():
    H, J = fock_fisher_converged("tmst", 0.3, 0.5, tol=1e-8)
    fm = gaussian_fisher(make_tmst(0.3, 0.5))
    assert np.allclose(H, fm.H, rtol=1e-6)
    assert np.allclose(np.linalg.inv(J), fm.j_inv, rtol=1e-6)


def test_asymmetric_probe_against_gaussian():
    r, n1, n2 = 0.5, 0.3, 0.8
    probe = build_probe_fock("tmst_asym", r, n1, n2)
    fm = gaussian_fisher(make_tmst(r, n1, n2))
    assert np.allclose(sld_fisher_fock(probe), fm.H, rtol=1e-6, atol=1e-9)
    j_inv = np.linalg.inv(rld_fisher_fock(probe))
    assert np.allclose(j_inv, fm.j_inv, rtol=1e-6, atol=1e-8)


def test_rld_rejects_rank_deficient_probe():
    # one vacuum thermal input leaves the probe mixed but not full rank,
    # so rho^-1 does not exist and the trace formula does not apply
    probe = build_probe_fock("tmst_asym", 0.5, 0.0, 0.8, dim=25)
    assert probe.purity() < 0.9
    with pytest.raises(PureStateError):
        rld_fisher_fock(probe)
