import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from ncoup.errors import NoConvergence, NonHermitianInput, DimensionMismatch
from ncoup.matcore import herm_eigen, inv_sqrtm_pd, is_psd, sqrtm_psd
from ncoup.models import example_bae_noise_matrix
from ncoup.symplectic import standard_J

from oracles import all_principal_minors_nonneg, charpoly_roots, leading_minors_nonneg


def reconstruction_error(H, res):
    V, w = res.eigenvectors, res.eigenvalues
    return np.max(np.abs(V @ np.diag(w) @ V.conj().T - H))


def test_identity():
    res = herm_eigen(np.eye(2))
    assert np.array_equal(res.eigenvalues, [1.0, 1.0])


def test_pauli_y():
    res = herm_eigen(np.array([[0, -1j], [1j, 0]]))
    np.testing.assert_allclose(res.eigenvalues, [-1.0, 1.0], atol=1e-15)
    assert reconstruction_error(np.array([[0, -1j], [1j, 0]]), res) < 1e-15


def test_example_noise_matrix_spectrum_matches_charpoly():
    H = example_bae_noise_matrix(g=1.0) + 0.5j * standard_J(2)
    res = herm_eigen(H)
    np.testing.assert_allclose(res.eigenvalues, charpoly_roots(H), atol=1e-12)


def test_rejects_non_hermitian():
    with pytest.raises(NonHermitianInput):
        herm_eigen(np.array([[0, 1], [0, 0]]))
    with pytest.raises(DimensionMismatch):
        herm_eigen(np.ones((2, 3)))


def test_sweep_budget_is_enforced():
    rng = np.random.default_rng(3)
    M = rng.normal(size=(6, 6))
    with pytest.raises(NoConvergence):
        herm_eigen(M + M.T, max_sweeps=1)


@pytest.mark.parametrize("n", range(1, 9))
def test_random_against_charpoly(rng, n):
    for _ in range(5):
        M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        H = M + M.conj().T
        res = herm_eigen(H)
        np.testing.assert_allclose(res.eigenvalues, charpoly_roots(H), atol=1e-7)
        assert np.all(np.diff(res.eigenvalues) >= 0)
        V = res.eigenvectors
        assert np.max(np.abs(V.conj().T @ V - np.eye(n))) <= 1e-9
        assert reconstruction_error(H, res) <= 1e-9 * (1 + np.max(np.abs(H)))


def test_degenerate_spectrum(rng):
    U, _ = np.linalg.qr(rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))
    H = (U * np.array([1.0, 1.0, 1.0, -2.0, -2.0, 0.0])) @ U.conj().T
    res = herm_eigen(H)
    np.testing.assert_allclose(res.eigenvalues, [-2, -2, 0, 1, 1, 1], atol=1e-13)
    assert reconstruction_error(H, res) < 1e-13


hermitian_4 = arrays(np.float64, (2, 4, 4), elements=st.floats(-10, 10, allow_subnormal=False))


@given(hermitian_4)
def test_eigen_invariants_property(parts):
    M = parts[0] + 1j * parts[1]
    H = M + M.conj().T
    res = herm_eigen(H)
    V = res.eigenvectors
    assert np.max(np.abs(V.conj().T @ V - np.eye(4))) <= 1e-9
    assert reconstruction_error(H, res) <= 1e-9 * (1 + np.max(np.abs(H)))
    np.testing.assert_allclose(res.eigenvalues, np.linalg.eigvalsh(H), atol=1e-9 * (1 + np.max(np.abs(H))))


def test_is_psd_examples():
    ok = is_psd(np.eye(3))
    assert ok.flag and ok.lambda_min == 1.0

    bad = is_psd(np.diag([1.0, -0.5]))
    assert not bad.flag and bad.lambda_min == -0.5
    np.testing.assert_allclose(np.abs(bad.witness), [0.0, 1.0])

    sat = is_psd(0.5 * np.eye(2) + 0.5j * standard_J(1))
    assert sat.flag and abs(sat.lambda_min) < 1e-15
    H = 0.5 * np.eye(2) + 0.5j * standard_J(1)
    assert abs(sat.witness.conj() @ H @ sat.witness) < 1e-15


def test_is_psd_tolerance_scales_with_norm():
    H = np.diag([1e6, -1e-4])
    assert not is_psd(H, tol=0.0).flag
    assert is_psd(H, tol=1e-9).flag


def test_is_psd_rejects_negative_tol():
    with pytest.raises(ValueError):
        is_psd(np.eye(2), tol=-1.0)


def test_is_psd_agrees_with_minors(rng):
    for _ in range(200):
        n = int(rng.integers(1, 7))
        M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        H = M.conj().T @ M
        assert is_psd(H).flag
        assert leading_minors_nonneg(H + 1e-9 * np.eye(n))
        shifted = H - rng.uniform(0, 2) * np.eye(n)
        lam = np.linalg.eigvalsh(shifted)[0]
        if abs(lam) > 1e-6:
            assert is_psd(shifted).flag == all_principal_minors_nonneg(shifted)


def test_continuity_in_skew_part(rng):
    A = rng.normal(size=(4, 4))
    A = A + A.T
    X = rng.normal(size=(4, 4))
    X = X - X.T
    base = np.linalg.eigvalsh(A)
    for s in (1e-2, 1e-4, 1e-6):
        w = herm_eigen(A + 0.5j * s * X).eigenvalues
        assert np.max(np.abs(w - base)) <= s * np.linalg.norm(X, 2)


def test_square_roots(rng):
    A = rng.normal(size=(5, 5))
    A = A @ A.T + 0.1 * np.eye(5)
    R = sqrtm_psd(A)
    np.testing.assert_allclose(R @ R, A, atol=1e-12)
    np.testing.assert_allclose(inv_sqrtm_pd(A) @ R, np.eye(5), atol=1e-11)
