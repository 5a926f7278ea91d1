import numpy as np
import pytest
from hypothesis import given, strategies as st

from ncoup.algebra import JetArray, bae_oracle, nqt_oracle
from ncoup.errors import DimensionMismatch, InputError, InvalidGain, NegativeDiagonal
from ncoup.matcore import is_psd
from ncoup.models import (
    bae_congruence,
    bae_model,
    gaussian_probe_example,
    noise_matrix,
    noise_matrix_jet,
    nqt_blocks,
    nqt_model,
    example_bae_noise_matrix,
    scalar_measures,
)
from ncoup.symplectic import E2, R11, R12, R21, R22, NCParams, build_Omega, standard_J

from oracles import random_spd

J2 = standard_J(2)
GRID = [(t, e, G) for t in (0, 1e-3, 1e-2) for e in (0, 1e-3, 1e-2) for G in (0.5, 1, 2, 5)]


def jets_close(a: JetArray, b: JetArray, atol):
    for x, y in zip(a.parts(), b.parts()):
        np.testing.assert_allclose(x, y, atol=atol)


# ---------------------------------------------------------------- BAE


def test_bae_commutative_limit():
    m = bae_model(NCParams(hbar=1.3), 2.0)
    assert np.all(m.Lambda == 0)
    assert np.all(m.Gamma == 0)
    np.testing.assert_array_equal(m.Xi_eff, 1.3 * J2)
    np.testing.assert_array_equal(m.Pi, np.diag([0.5, 0.5, -2, -2]))
    assert np.max(np.abs(m.Tmat)) == 0


def test_bae_closed_forms():
    p = NCParams(0.1, 0.2, 1.5)
    G = 3.0
    m = bae_model(p, G)
    np.testing.assert_allclose(m.Lambda, -(0.2 * G**2 / 3.0) * R21, atol=1e-15)
    np.testing.assert_allclose(m.Pi, np.diag([1 / G, 1 / G, -G, -G]) + (0.1 * G / 3.0) * R12, atol=1e-15)
    np.testing.assert_allclose(m.Gamma, -0.2 * G**2 * R22, atol=1e-14)
    np.testing.assert_allclose(m.Xi_eff, 1.5 * J2 - (0.1 / G**2) * R11 - 0.2 * G**2 * R22, atol=1e-15)


def test_bae_determinant_example():
    m = bae_model(NCParams(0.1, 0.2, 1.0), 1.0)
    assert np.linalg.det(m.Xi_eff) == pytest.approx(0.9604, rel=1e-12)


@given(st.floats(0, 0.5), st.floats(0, 0.5), st.floats(0.75, 2), st.floats(0.1, 10))
def test_bae_determinant_property(theta, eta, hbar, G):
    p = NCParams(theta, eta, hbar)
    det = np.linalg.det(bae_model(p, G).Xi_eff)
    assert det == pytest.approx(hbar**4 * (1 - p.xi) ** 2, rel=1e-10)


@pytest.mark.parametrize("G", [0.0, -1.0, np.nan, np.inf, "two"])
def test_bae_invalid_gain(G):
    with pytest.raises(InvalidGain):
        bae_model(NCParams(), G)


@pytest.mark.parametrize("theta,eta,G", GRID)
def test_bae_matches_oracle(theta, eta, G):
    m = bae_model(NCParams(theta, eta, 1.0), G)
    o = bae_oracle(G)
    jets_close(m.Lambda_jet, o.model.Lambda, 1e-10)
    jets_close(m.Pi_jet, o.model.Pi, 1e-10)
    jets_close(m.T_jet, o.T, 1e-10)


def test_gamma_matches_definition_up_to_second_order():
    p = NCParams(1e-3, 2e-3, 1.0)
    m = bae_model(p, 2.0)
    Om, L = build_Omega(p), m.Lambda
    full = Om @ L.T - L @ Om.T
    assert np.max(np.abs(full - m.Gamma)) <= 10 * p.theta * p.eta * 4


def test_bae_effective_form_is_congruent_ncoup_form():
    # P^-1 (Omega + Gamma - T) P^-T = Xi_eff at first order, P = I - (theta/2 hbar) R12
    for G in (0.5, 2.0):
        m = bae_model(NCParams(hbar=1.0), G)
        Pinv = JetArray(np.eye(4), R12 / 2, None)
        jets_close(Pinv @ m.ncoup_form_jet @ Pinv.T, m.Xi_jet, 1e-13)
    np.testing.assert_array_equal(R12 @ J2 - J2 @ R21, -2 * R11)


def test_effective_form_equals_minus_congruent_omega():
    # Xi_eff = -Pi_C Omega Pi_C exactly
    p = NCParams(0.3, 0.4, 1.2)
    for G in (0.5, 1.0, 3.0):
        m = bae_model(p, G)
        np.testing.assert_allclose(m.Xi_eff, -m.Pi_C @ build_Omega(p) @ m.Pi_C, atol=1e-14)


def test_gain_scaling_of_corrections():
    p = NCParams(0.1, 0.2, 1.0)
    theta_terms, eta_terms = [], []
    for G in (1.5, 2.0, 3.0, 5.0):
        Xi = bae_model(p, G).Xi_eff
        theta_terms.append(-Xi[0, 1])
        eta_terms.append(-Xi[2, 3])
        assert -Xi[0, 1] == pytest.approx(0.1 / G**2)
        assert -Xi[2, 3] == pytest.approx(0.2 * G**2)
    assert np.all(np.diff(theta_terms) < 0)
    assert np.all(np.diff(eta_terms) > 0)


# ---------------------------------------------------------------- NQT


def test_nqt_commutative():
    m = nqt_model(NCParams())
    C = np.diag([0.0, 0, -1, -1])
    np.testing.assert_array_equal(m.Lambda, C)
    np.testing.assert_array_equal(m.Pi, C)
    np.testing.assert_array_equal(m.Gamma, -J2)
    np.testing.assert_array_equal(m.Xi_eff, np.zeros((4, 4)))
    np.testing.assert_allclose(m.ncoup_form, 0, atol=0)


def test_nqt_effective_form():
    m = nqt_model(NCParams(0.0, 0.2, 1.0))
    assert m.Xi_eff[2, 3] == pytest.approx(-0.6)
    assert m.Xi_eff[3, 2] == pytest.approx(0.6)
    assert np.count_nonzero(m.Xi_eff) == 2
    # Lambda Omega Lambda^T + Pi Omega Pi^T = 3 eta R22 at first order
    Om = m.Omega_jet
    S = m.Lambda_jet @ Om @ m.Lambda_jet.T + m.Pi_jet @ Om @ m.Pi_jet.T
    jets_close(S, JetArray(np.zeros((4, 4)), None, 3 * R22), 1e-14)
    jets_close(m.ncoup_form_jet, m.Xi_jet, 1e-14)


def test_nqt_matches_oracle():
    for hbar in (1.0, 2.0):
        m = nqt_model(NCParams(hbar=hbar))
        o = nqt_oracle(hbar=hbar)
        jets_close(m.Lambda_jet, o.model.Lambda, 1e-10)
        jets_close(m.Pi_jet, o.model.Pi, 1e-10)
        jets_close(m.T_jet, o.T, 1e-10)


# ---------------------------------------------------------------- noise matrices


def test_bae_commutative_noise_matrix():
    W = gaussian_probe_example()
    G = 2.0
    K = noise_matrix(bae_model(NCParams(), G), None, W)
    assert K[0, 0] == pytest.approx(W[0, 0] / G**2)
    Pc = np.diag([1 / G, 1 / G, -G, -G])
    np.testing.assert_allclose(K, Pc @ W @ Pc, atol=1e-15)


def test_bae_nc_noise_matrix_matches_congruence_form(rng):
    p = NCParams(0.02, 0.03, 1.0)
    for G in (0.5, 2.0):
        m = bae_model(p, G)
        W = random_spd(rng, 4)
        Z = random_spd(rng, 4)
        K = noise_matrix_jet(m, Z, W)
        Kc = K.c0
        Pc_inv = np.linalg.inv(m.Pi_C)
        left = JetArray(np.eye(4), (G / 2) * R12 @ Pc_inv, None)
        right = JetArray(np.eye(4), -(G / 2) * Pc_inv @ R21, None)
        jets_close(K, left @ Kc @ right, 1e-12)
        # the same transformation written as K^NC = P K^C P^T
        np.testing.assert_allclose(np.eye(4) + left.c_theta, bae_congruence(NCParams(1.0, 0, 1.0)), atol=1e-15)
        # Z enters only at second order
        jets_close(noise_matrix_jet(m, None, W), K, 1e-14)


def test_example_noise_matrix_is_half_of_the_rule():
    W = gaussian_probe_example()
    for g in (0.5, 1.0, 3.0):
        K = noise_matrix(bae_model(NCParams(), g), None, W)
        np.testing.assert_allclose(example_bae_noise_matrix(g), K / 2, atol=1e-15)


def test_nqt_noise_matrix_blocks(rng):
    p = NCParams(0.01, 0.02, 1.0)
    m = nqt_model(p)
    Z, W = random_spd(rng, 4), random_spd(rng, 4)
    K = noise_matrix(m, Z, W)
    assert np.all(K[:2, :2] == 0)
    np.testing.assert_allclose(K[:2, 2:], -(p.theta / 2) * E2 @ W[2:, 2:], atol=1e-15)
    np.testing.assert_allclose(K[2:, :2], (p.theta / 2) * W[2:, 2:] @ E2, atol=1e-15)
    EZ = E2 @ Z[:2, 2:]
    np.testing.assert_allclose(K[2:, 2:], Z[2:, 2:] + W[2:, 2:] + p.eta * (EZ + EZ.T) / 2, atol=1e-14)
    ur, lr = nqt_blocks(Z, W, p)
    np.testing.assert_allclose(ur, K[:2, 2:], atol=1e-15)
    np.testing.assert_allclose(lr, K[2:, 2:], atol=1e-14)


def test_nqt_commutative_noise_matrix(rng):
    Z, W = random_spd(rng, 4), random_spd(rng, 4)
    K = noise_matrix(nqt_model(NCParams()), Z, W)
    expected = np.zeros((4, 4))
    expected[2:, 2:] = Z[2:, 2:] + W[2:, 2:]
    np.testing.assert_allclose(K, expected, atol=1e-14)


def test_noise_matrix_symmetric_and_psd(rng):
    for _ in range(30):
        Z, W = random_spd(rng, 4), random_spd(rng, 4)
        for m in (bae_model(NCParams(), 1.7), nqt_model(NCParams())):
            K = noise_matrix(m, Z, W)
            np.testing.assert_array_equal(K, K.T)
            assert is_psd(K, 1e-12).flag
        K = noise_matrix(bae_model(NCParams(0.01, 0.02), 2.0), Z, W)
        np.testing.assert_array_equal(K, K.T)


def test_noise_matrix_errors():
    with pytest.raises(DimensionMismatch):
        noise_matrix(bae_model(NCParams(), 1.0), None, np.eye(3))
    with pytest.raises(InputError):
        noise_matrix(nqt_model(NCParams()), None, np.eye(4))
    with pytest.raises(NegativeDiagonal):
        noise_matrix(bae_model(NCParams(), 1.0), None, -np.eye(4))


# ---------------------------------------------------------------- scalar measures


def test_scalar_measures():
    eps, chis = scalar_measures(np.diag([4.0, 4.0, 9.0, 9.0]))
    assert eps == (2.0, 2.0) and chis == (3.0, 3.0)
    assert scalar_measures(np.zeros((4, 4))) == ((0.0, 0.0), (0.0, 0.0))
    eps, _ = scalar_measures(example_bae_noise_matrix(1.0))
    assert eps[0] == pytest.approx(np.sqrt(0.5))
    with pytest.raises(NegativeDiagonal):
        scalar_measures(np.diag([1.0, -1.0, 1.0, 1.0]))
    with pytest.raises(DimensionMismatch):
        scalar_measures(np.eye(2))
