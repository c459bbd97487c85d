import numpy as np
import pytest

from dispest import (GaussianState, SymplecticTransform, beamsplit_balanced,
                     displace, heterodyne_outcome_cov, homodyne_marginal,
                     make_squeezed_thermal, make_thermal, make_tmst,
                     phase_rotate, squeeze_single, squeeze_two,
                     symplectic_form, vacuum)


def test_vacuum_covariance():
    st = vacuum(1)
    assert np.allclose(st.cov, 0.5 * np.eye(2))
    assert np.allclose(st.mean, 0.0)


def test_thermal_examples():
    assert np.allclose(make_thermal(1.0, 1).cov, 1.5 * np.eye(2))
    st = make_thermal(0.5, 2)
    assert np.allclose(st.cov, np.eye(4))
    assert np.isclose(st.purity, 0.25)


def test_thermal_negative_N_rejected():
    with pytest.raises(ValueError):
        make_thermal(-0.1, 1)


def test_state_validation():
    with pytest.raises(ValueError):
        GaussianState(np.zeros(2), np.array([[0.5, 0.1], [0.0, 0.5]]))
    with pytest.raises(ValueError):
        GaussianState(np.zeros(2), 0.1 * np.eye(2))  # below vacuum noise
    with pytest.raises(ValueError):
        GaussianState(np.zeros(3), np.eye(3))


def test_state_immutable():
    st = vacuum(1)
    with pytest.raises(ValueError):
        st.cov[0, 0] = 3.0


def test_squeeze_single_vacuum():
    r = 0.37
    st = squeeze_single(vacuum(1), 0, r)
    assert np.allclose(st.cov, np.diag([np.exp(2 * r) / 2, np.exp(-2 * r) / 2]))


def test_squeeze_single_thermal_variance():
    r, N = 0.6, 0.8
    st = squeeze_single(make_thermal(N, 1), 0, r)
    assert np.isclose(st.cov[1, 1], (2 * N + 1) * np.exp(-2 * r) / 2)


def test_squeeze_single_identity_at_zero():
    st = make_thermal(0.3, 2)
    out = squeeze_single(st, 1, 0.0)
    assert np.allclose(out.cov, st.cov) and np.allclose(out.mean, st.mean)


def test_squeeze_single_bad_mode():
    with pytest.raises(ValueError):
        squeeze_single(vacuum(1), 1, 0.5)


def test_squeeze_two_blocks():
    r, N = 0.45, 0.3
    st = make_tmst(r, N)
    A = (2 * N + 1) * np.cosh(2 * r) / 2
    C = (2 * N + 1) * np.sinh(2 * r) / 2
    Z = np.diag([1.0, -1.0])
    assert np.allclose(st.cov[:2, :2], A * np.eye(2))
    assert np.allclose(st.cov[2:, 2:], A * np.eye(2))
    # Off-diagonal sign squeezes q1 - q2 and p1 + p2, making the EPR pair
    # u = q1 + q2, v = p1 - p2 the low-noise combination.
    assert np.allclose(st.cov[:2, 2:], -C * Z)


def test_squeeze_two_identity_and_errors():
    st = make_thermal(0.2, 2)
    assert np.allclose(squeeze_two(st, (0, 1), 0.0).cov, st.cov)
    with pytest.raises(ValueError):
        squeeze_two(st, (0, 0), 0.3)
    with pytest.raises(ValueError):
        squeeze_two(st, (0, 2), 0.3)


def test_squeeze_two_reduced_variance():
    st = make_tmst(0.5, 0.0)
    assert np.isclose(st.reduced(0).cov[0, 0], np.cosh(1.0) / 2)


def test_displace():
    st = displace(vacuum(1), 0, 1.0, -0.5)
    assert np.allclose(st.mean, [1.0, -0.5])
    assert np.allclose(st.cov, 0.5 * np.eye(2))
    again = displace(st, 0, 0.2, 0.7)
    assert np.allclose(again.mean, [1.2, 0.2])  # group law on means
    assert np.allclose(displace(st, 0, 0.0, 0.0).mean, st.mean)


def test_beamsplit_factorizes_tmst():
    r, N = 0.7, 0.3
    q0, p0 = 1.1, -0.4
    out = beamsplit_balanced(displace(make_tmst(r, N), 0, q0, p0), (0, 1))
    assert np.abs(out.cov[:2, 2:]).max() < 1e-12
    v = (2 * N + 1) / 2
    assert np.allclose(out.cov[:2, :2],
                       np.diag([v * np.exp(2 * r), v * np.exp(-2 * r)]))
    assert np.allclose(out.cov[2:, 2:],
                       np.diag([v * np.exp(-2 * r), v * np.exp(2 * r)]))
    assert np.allclose(out.mean, np.array([q0, p0, q0, p0]) / np.sqrt(2))


def test_beamsplit_vacuum_invariant():
    out = beamsplit_balanced(vacuum(2), (0, 1))
    assert np.allclose(out.cov, 0.5 * np.eye(4))


def test_beamsplit_twice_is_quarter_rotation():
    st = make_tmst(0.5, 0.2)
    twice = beamsplit_balanced(beamsplit_balanced(st, (0, 1)), (0, 1))
    # mode-plane rotation by pi/2 flips the sign of the correlation block
    assert np.allclose(twice.cov[:2, :2], st.cov[:2, :2])
    assert np.allclose(twice.cov[:2, 2:], -st.cov[:2, 2:])


def test_homodyne_marginals():
    assert homodyne_marginal(vacuum(1), 0, "q") == (0.0, 0.5)
    assert homodyne_marginal(make_thermal(1.0, 1), 0, "p") == (0.0, 1.5)
    r, N, p0 = 0.8, 0.4, -0.9
    out = beamsplit_balanced(displace(make_tmst(r, N), 0, 0.3, p0), (0, 1))
    mean, var = homodyne_marginal(out, 0, "p")
    assert np.isclose(mean, p0 / np.sqrt(2))
    assert np.isclose(var, (2 * N + 1) * np.exp(-2 * r) / 2)
    with pytest.raises(ValueError):
        homodyne_marginal(vacuum(1), 0, "x")


def test_heterodyne_outcome_cov():
    assert np.allclose(heterodyne_outcome_cov(vacuum(1), 0), np.eye(2))
    N = 0.7
    assert np.allclose(heterodyne_outcome_cov(make_thermal(N, 1), 0),
                       (N + 1) * np.eye(2))
    r = 0.5
    sq = squeeze_single(vacuum(1), 0, r)
    assert np.allclose(heterodyne_outcome_cov(sq, 0),
                       np.diag([np.exp(2 * r) + 1, np.exp(-2 * r) + 1]) / 2)


def test_symplectic_transform_validation():
    with pytest.raises(ValueError):
        SymplecticTransform(np.diag([2.0, 2.0]), np.zeros(2))


@pytest.mark.parametrize("seed", range(8))
def test_random_pipelines_stay_physical_and_symplectic(seed):
    rng = np.random.default_rng(seed)
    st = make_thermal(rng.uniform(0, 2), 2)
    for _ in range(5):
        op = rng.integers(0, 5)
        if op == 0:
            st = squeeze_single(st, rng.integers(0, 2), rng.uniform(-1, 1))
        elif op == 1:
            st = squeeze_two(st, (0, 1), rng.uniform(-1, 1))
        elif op == 2:
            st = displace(st, rng.integers(0, 2), rng.normal(), rng.normal())
        elif op == 3:
            st = phase_rotate(st, rng.integers(0, 2), rng.uniform(0, 7))
        else:
            st = beamsplit_balanced(st, (0, 1))
    omega = symplectic_form(2)
    herm = st.cov + 0.5j * omega
    assert np.linalg.eigvalsh(herm).min() > -1e-10
    assert 0.0 < st.purity <= 1.0 + 1e-12


def test_displacement_never_touches_covariance():
    st = make_tmst(0.9, 1.3)
    moved = displace(displace(st, 0, 2.0, -1.0), 1, 0.4, 0.1)
    assert np.array_equal(moved.cov, st.cov)


def test_purity_and_symplectic_eigenvalues():
    st = make_tmst(0.8, 0.0)
    assert np.isclose(st.purity, 1.0)
    assert np.allclose(st.symplectic_eigenvalues(), 0.5)
    th = make_thermal(1.0, 1)
    assert np.allclose(th.symplectic_eigenvalues(), 1.5)
    assert np.isclose(th.purity, 1.0 / 3.0)
