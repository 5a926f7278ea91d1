"""Closed-form BAE and NQT measurement models, commutative and first-order
noncommutative.

Every model quantity is stored as a first-order jet in (theta, eta) and
evaluated at the model's parameters on access. The object observables are
``Z = (X_a, Y_a, P_Xa, P_Ya)``, the probe observables ``W = (X_b, ..., P_Yb)``
and the noise-disturbance vector is ``K = Lambda Z + Pi W``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .algebra import JetArray, omega_jet
from .errors import DimensionMismatch, InputError, InvalidGain, NegativeDiagonal
from .symplectic import (
    E2,
    R11,
    R12,
    R21,
    R22,
    NCParams,
    build_Omega,
    check_symmetric,
    standard_J,
)


def _sym_jet(X: JetArray) -> JetArray:
    return (X + X.T) * 0.5


@dataclass(frozen=True)
class MeasurementModel:
    """Linear measurement interaction ``V_out = (I + Lambda) Z + Pi W``."""

    kind: str
    params: NCParams
    gain: Optional[float]
    Lambda_jet: JetArray
    Pi_jet: JetArray
    Xi_jet: JetArray  # effective skew form of the NCOUP as stated for K^C

    def _eval(self, X: JetArray) -> np.ndarray:
        return X.value(self.params.theta, self.params.eta)

    @property
    def Omega_jet(self) -> JetArray:
        return omega_jet(self.params.hbar)

    @property
    def Gamma_jet(self) -> JetArray:
        Om, L = self.Omega_jet, self.Lambda_jet
        return Om @ L.T - L @ Om.T

    @property
    def T_jet(self) -> JetArray:
        Om = self.Omega_jet
        IL = self.Lambda_jet + np.eye(4)
        P = self.Pi_jet
        return IL @ Om @ IL.T + P @ Om @ P.T

    @property
    def ncoup_form_jet(self) -> JetArray:
        """``Omega + Gamma - T``, the form paired with the full noise matrix."""
        return self.Omega_jet + self.Gamma_jet - self.T_jet

    @property
    def Lambda(self) -> np.ndarray:
        return self._eval(self.Lambda_jet)

    @property
    def Pi(self) -> np.ndarray:
        return self._eval(self.Pi_jet)

    @property
    def Omega(self) -> np.ndarray:
        return build_Omega(self.params)

    @property
    def Gamma(self) -> np.ndarray:
        return self._eval(self.Gamma_jet)

    @property
    def Tmat(self) -> np.ndarray:
        return self._eval(self.T_jet)

    @property
    def ncoup_form(self) -> np.ndarray:
        return self._eval(self.ncoup_form_jet)

    @property
    def Xi_eff(self) -> np.ndarray:
        return self._eval(self.Xi_jet)

    @property
    def Lambda_C(self) -> np.ndarray:
        return self.Lambda_jet.c0

    @property
    def Pi_C(self) -> np.ndarray:
        return self.Pi_jet.c0


def _check_gain(G) -> float:
    try:
        G = float(G)
    except (TypeError, ValueError):
        raise InvalidGain(f"gain must be a real number, got {G!r}") from None
    if not np.isfinite(G) or G <= 0:
        raise InvalidGain(f"gain must be positive, got {G!r}")
    return G


def bae_Pi_C(G: float) -> np.ndarray:
    G = _check_gain(G)
    return np.diag([1.0 / G, 1.0 / G, -G, -G])


def bae_model(p: NCParams, G: float) -> MeasurementModel:
    """Backaction-evading amplifier with gain ``G``.

    ``Lambda = -(eta G^2 / 2 hbar) R21``, ``Pi = Pi_C + (theta G / 2 hbar) R12``
    and ``Xi_eff = hbar J - (theta/G^2) R11 - eta G^2 R22``.

    Raises:
        InvalidGain: G is not a positive finite number.
    """
    G = _check_gain(G)
    h = p.hbar
    Lam = JetArray(np.zeros((4, 4)), None, -(G**2 / (2 * h)) * R21)
    Pi = JetArray(bae_Pi_C(G), (G / (2 * h)) * R12, None)
    Xi = JetArray(h * standard_J(2), -R11 / G**2, -(G**2) * R22)
    return MeasurementModel("BAE", p, G, Lam, Pi, Xi)


def nqt_model(p: NCParams) -> MeasurementModel:
    """Noiseless quadrature transducer, ``Lambda_C = Pi_C = diag(0, 0, -1, -1)``."""
    h = p.hbar
    C = np.diag([0.0, 0.0, -1.0, -1.0])
    Lam = JetArray(C, None, -R21 / (2 * h))
    Pi = JetArray(C, R12 / (2 * h), None)
    Xi = JetArray(np.zeros((4, 4)), None, -3.0 * R22)
    return MeasurementModel("NQT", p, None, Lam, Pi, Xi)


def _cov(M, name: str) -> np.ndarray:
    if M is None:
        raise InputError(f"{name} covariance is required")
    M = np.asarray(M, dtype=float)
    if M.shape != (4, 4):
        raise DimensionMismatch(f"{name} must be 4x4, got shape {M.shape}")
    M = check_symmetric(M, name)
    if np.any(np.diag(M) < -1e-12):
        raise NegativeDiagonal(f"{name} has a negative diagonal entry")
    return M


def noise_matrix_jet(model: MeasurementModel, Z_cov=None, W_cov=None) -> JetArray:
    W = _cov(W_cov, "W")
    K = model.Pi_jet @ W @ model.Pi_jet.T
    if model.kind == "NQT" or Z_cov is not None:
        Z = _cov(Z_cov, "Z")
        K = K + model.Lambda_jet @ Z @ model.Lambda_jet.T
    return _sym_jet(K)


def noise_matrix(model: MeasurementModel, Z_cov=None, W_cov=None, commutative: bool = False):
    """Noise-disturbance matrix ``K = Lambda Z Lambda^T + Pi W Pi^T``.

    Cross terms vanish because the probe has zero mean. The result is
    truncated at first order in (theta, eta). With ``commutative=True`` only
    the zeroth-order part (``K^C``) is returned.

    Z is required for NQT. For BAE it may be omitted: its contribution is
    second order in eta.

    Raises:
        DimensionMismatch: covariances are not 4x4.
    """
    K = noise_matrix_jet(model, Z_cov, W_cov)
    if commutative:
        return K.c0.copy()
    return model._eval(K)


class ScalarMeasures(NamedTuple):
    epsilons: tuple
    chis: tuple


def scalar_measures(K) -> ScalarMeasures:
    """Root-mean-square noise ``eps_i = sqrt(K_ii)`` and disturbance ``chi_i``."""
    K = np.asarray(K, dtype=float)
    if K.shape != (4, 4):
        raise DimensionMismatch(f"K must be 4x4, got shape {K.shape}")
    d = np.diag(K)
    if np.any(d < -1e-12):
        raise NegativeDiagonal("K has a negative diagonal entry")
    r = np.sqrt(np.clip(d, 0.0, None))
    return ScalarMeasures((float(r[0]), float(r[1])), (float(r[2]), float(r[3])))


def gaussian_probe_example(m: float = 1.0, n: float = 0.25, a: float = 0.5) -> np.ndarray:
    """Gaussian example probe covariance with parameters (m, n, a)."""
    return np.array(
        [
            [m, n, n, n],
            [n, m, -n, n],
            [n, -n, a, n],
            [n, n, n, a],
        ]
    )


def example_bae_noise_matrix(g: float = 1.0, m: float = 1.0, n: float = 0.25, a: float = 0.5):
    """Closed-form commutative BAE noise matrix for the Gaussian example probe.

    This equals ``Pi_C W Pi_C / 2``, half of what ``noise_matrix`` returns
    for the same probe. The halved normalisation is the commonly quoted one
    and is kept for comparison.
    """
    g2 = g * g
    return np.array(
        [
            [m / (2 * g2), n / (2 * g2), -n / 2, -n / 2],
            [n / (2 * g2), m / (2 * g2), n / 2, -n / 2],
            [-n / 2, n / 2, a * g2 / 2, n * g2 / 2],
            [-n / 2, -n / 2, n * g2 / 2, a * g2 / 2],
        ]
    )


def bae_congruence(p: NCParams) -> np.ndarray:
    """``P = I - (theta / 2 hbar) R12`` with ``K^NC = P K^C P^T`` at first order."""
    return np.eye(4) - (p.theta / (2 * p.hbar)) * R12


def nqt_blocks(Z_cov, W_cov, p: NCParams):
    """Blocks of the first-order NQT noise matrix in closed form.

    Returns ``(upper_right, lower_right)``; the upper-left block is zero.
    """
    Z = _cov(Z_cov, "Z")
    W = _cov(W_cov, "W")
    h = p.hbar
    EZ12 = E2 @ Z[:2, 2:]
    upper_right = -(p.theta / (2 * h)) * (E2 @ W[2:, 2:])
    lower_right = Z[2:, 2:] + W[2:, 2:] + (p.eta / h) * 0.5 * (EZ12 + EZ12.T)
    return upper_right, lower_right
