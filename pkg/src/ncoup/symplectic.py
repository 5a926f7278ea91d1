"""Standard and deformed symplectic forms, Seiberg-Witten maps and the
Xi-symplectic (Williamson) spectrum of a covariance-like matrix.

Phase-space ordering is ``(X, Y, P_X, P_Y)`` per two-dimensional system.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import matcore
from .errors import (
    DimensionMismatch,
    InvalidLambda,
    InvalidParams,
    NotPositiveDefinite,
    NotSkew,
    NotSymmetric,
    SingularForm,
)

SYM_ATOL = 1e-12

#: 2x2 standard symplectic block.
E2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
_I2 = np.eye(2)
_Z2 = np.zeros((2, 2))


@dataclass(frozen=True)
class NCParams:
    """Deformation parameters of the noncommutative Heisenberg algebra.

    ``[X, Y] = i theta``, ``[P_X, P_Y] = i eta``, ``[X_i, P_j] = i hbar delta_ij``.
    """

    theta: float = 0.0
    eta: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("theta", "eta", "hbar"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise InvalidParams(f"{name} must be finite, got {value!r}")
        if self.theta < 0 or self.eta < 0:
            raise InvalidParams("theta and eta must be nonnegative")
        if self.hbar <= 0:
            raise InvalidParams("hbar must be positive")
        if self.xi >= 1:
            raise InvalidParams(f"theta*eta/hbar**2 must be < 1, got {self.xi}")

    @property
    def xi(self) -> float:
        return self.theta * self.eta / self.hbar**2

    @property
    def sw_product(self) -> float:
        """Required value of ``lambda * mu`` for a Seiberg-Witten map."""
        return 0.5 * (1.0 + np.sqrt(1.0 - self.xi))

    @property
    def lambda_sw(self) -> float:
        # symmetric choice lambda == mu
        return float(np.sqrt(self.sw_product))

    @property
    def mu_sw(self) -> float:
        return self.sw_product / self.lambda_sw

    @property
    def commutative(self) -> bool:
        return self.theta == 0 and self.eta == 0


class SymplecticSpectrum(NamedTuple):
    values: np.ndarray  # n ascending positive values
    pos_vectors: np.ndarray  # column j: eigenvector for +values[j], u^dagger Xi u = 2i
    neg_vectors: np.ndarray  # column j: eigenvector for -values[j], v^dagger Xi v = -2i
    pairing_defect: float


class MinDirection(NamedTuple):
    u1: np.ndarray
    v1: np.ndarray
    lambda1: float
    saturation_gap: float


# ---------------------------------------------------------------- validation


def check_symmetric(A, name: str = "matrix") -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NotSymmetric(f"{name} has non-finite entries")
    if matcore.max_abs(A - A.T) > SYM_ATOL * max(1.0, matcore.max_abs(A)):
        raise NotSymmetric(f"{name} is not symmetric")
    return 0.5 * (A + A.T)


def check_skew(X, name: str = "form") -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise NotSkew(f"{name} has non-finite entries")
    if matcore.max_abs(X + X.T) > SYM_ATOL * max(1.0, matcore.max_abs(X)):
        raise NotSkew(f"{name} is not skew-symmetric")
    return 0.5 * (X - X.T)


def is_singular(Xi) -> bool:
    """Relative determinant test: ``|det Xi| <= 1e-12 * max|Xi|**dim``."""
    Xi = np.asarray(Xi, dtype=float)
    scale = matcore.max_abs(Xi)
    if scale == 0.0:
        return True
    return abs(np.linalg.det(Xi / scale)) <= 1e-12


# ---------------------------------------------------------------- builders


def standard_J(n: int) -> np.ndarray:
    """``[[0, I_n], [-I_n, 0]]``."""
    if n < 1:
        raise DimensionMismatch("n must be >= 1")
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, I], [-I, Z]])


def r_block(i: int, j: int) -> np.ndarray:
    """4x4 matrix with ``E2`` in block position (i, j), zeros elsewhere (1-based)."""
    if i not in (1, 2) or j not in (1, 2):
        raise ValueError("block indices must be 1 or 2")
    R = np.zeros((4, 4))
    R[2 * (i - 1) : 2 * i, 2 * (j - 1) : 2 * j] = E2
    return R


R11 = r_block(1, 1)
R12 = r_block(1, 2)
R21 = r_block(2, 1)
R22 = r_block(2, 2)


def build_Omega(p: NCParams) -> np.ndarray:
    """Deformed commutator matrix ``[[theta E, hbar I], [-hbar I, eta E]]``."""
    return np.block([[p.theta * E2, p.hbar * _I2], [-p.hbar * _I2, p.eta * E2]])


def sw_map(p: NCParams, lambda_choice: Optional[float] = None) -> np.ndarray:
    """Seiberg-Witten (Darboux) map S with ``hbar S J S^T = Omega``.

    ``mu`` follows from ``lambda * mu = (1 + sqrt(1 - xi)) / 2``. Every
    admissible ``lambda_choice`` gives a valid map; the default is the
    symmetric one, ``lambda == mu``.
    """
    lam = p.lambda_sw if lambda_choice is None else float(lambda_choice)
    if not np.isfinite(lam) or lam <= 0:
        raise InvalidLambda(f"lambda_choice must be positive, got {lambda_choice!r}")
    mu = p.sw_product / lam
    h = p.hbar
    return np.block(
        [
            [lam * _I2, -(p.theta / (2 * lam * h)) * E2],
            [(p.eta / (2 * mu * h)) * E2, mu * _I2],
        ]
    )


# ---------------------------------------------------------------- spectrum


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    if v[k] == 0:
        return v
    return v * (np.abs(v[k]) / v[k])


def _validate_pair(A, Xi):
    A = check_symmetric(A, "A")
    Xi = check_skew(Xi, "Xi")
    if A.shape != Xi.shape:
        raise DimensionMismatch(f"A {A.shape} and Xi {Xi.shape} differ in shape")
    if A.shape[0] % 2:
        raise DimensionMismatch("phase-space dimension must be even")
    if is_singular(Xi):
        raise SingularForm("Xi is singular; the symplectic spectrum is undefined")
    return A, Xi


def _spectrum_pd(A, Xi, evals, evecs):
    n = A.shape[0] // 2
    inv_root = np.real((evecs / np.sqrt(evals)) @ evecs.conj().T)
    root = np.real((evecs * np.sqrt(evals)) @ evecs.conj().T)
    Xinv = np.linalg.inv(Xi)
    Xinv = 0.5 * (Xinv - Xinv.T)
    M = 2j * (root @ Xinv @ root)
    M = 0.5 * (M + M.conj().T)
    w, Wv = matcore.herm_eigen(M)
    defect = float(np.max(np.abs(w + w[::-1])))
    values = w[n:].copy()
    pos = np.empty((2 * n, n), dtype=complex)
    neg = np.empty((2 * n, n), dtype=complex)
    for j in range(n):
        lam = values[j]
        pos[:, j] = _fix_phase(np.sqrt(lam) * (inv_root @ Wv[:, n + j]))
        neg[:, j] = _fix_phase(np.sqrt(lam) * (inv_root @ Wv[:, n - 1 - j]))
    return SymplecticSpectrum(values, pos, neg, defect)


def _spectrum_general(A, Xi):
    n = A.shape[0] // 2
    L = 2j * np.linalg.solve(Xi, A)
    w, V = np.linalg.eig(L)
    scale = 1.0 + float(np.max(np.abs(w)))
    if np.max(np.abs(w.imag)) > 1e-9 * scale:
        raise NotSymmetric("2i Xi^-1 A has non-real eigenvalues; A is not positive semidefinite")
    order = np.argsort(w.real, kind="stable")
    w = w.real[order]
    V = V[:, order]
    defect = float(np.max(np.abs(w + w[::-1])))
    values = np.clip(w[n:], 0.0, None)

    def normalise(v, sign):
        q = (v.conj() @ Xi @ v) / (2j * sign)
        if q.real > 1e-12 * scale:
            return _fix_phase(v / np.sqrt(q.real))
        return _fix_phase(v / np.linalg.norm(v))

    pos = np.column_stack([normalise(V[:, n + j], 1) for j in range(n)])
    neg = np.column_stack([normalise(V[:, n - 1 - j], -1) for j in range(n)])
    return SymplecticSpectrum(values, pos, neg, defect)


def symplectic_spectrum(A, Xi) -> SymplecticSpectrum:
    """Xi-symplectic spectrum: the positive eigenvalues of ``2i Xi^-1 A``.

    For positive-definite A the problem is solved as the Hermitian
    eigenproblem of ``2i A^1/2 Xi^-1 A^1/2``; eigenvectors are mapped back
    with ``A^-1/2`` and scaled so that ``u^dagger Xi u = +2i`` (``-2i`` for the
    negative branch). Degenerate values come out Xi-orthogonal. A merely
    semidefinite A falls back to the non-symmetric eigenproblem.

    Raises:
        SingularForm: Xi fails the determinant test.
        NotSymmetric: A is not symmetric (or not semidefinite in fallback).
    """
    A, Xi = _validate_pair(A, Xi)
    evals, evecs = matcore.herm_eigen(A)
    if evals[0] > 1e-12 * max(1.0, matcore.max_abs(A)):
        return _spectrum_pd(A, Xi, evals, evecs)
    return _spectrum_general(A, Xi)


def williamson_diag(A, Xi):
    """Williamson normal form on the symplectic space defined by Xi.

    Returns ``(S, D)`` with ``Xi = S J S^T`` and
    ``S^-1 A S^-T = D = diag(l_1..l_n, l_1..l_n) / 2`` where ``l_j`` are the
    Xi-symplectic values of A. The halving is what makes both identities
    hold at once (``A = I/2, Xi = J`` has values ``{1, 1}``).

    Raises:
        SingularForm, NotPositiveDefinite
    """
    A, Xi = _validate_pair(A, Xi)
    evals, evecs = matcore.herm_eigen(A)
    if evals[0] <= 1e-12 * max(1.0, matcore.max_abs(A)):
        raise NotPositiveDefinite("A must be positive-definite for the Williamson form")
    spec = _spectrum_pd(A, Xi, evals, evecs)
    U = spec.pos_vectors
    F = np.concatenate([U.real, U.imag], axis=1)
    S = np.linalg.inv(F).T
    D = np.diag(np.concatenate([spec.values, spec.values]) / 2.0)
    return S, D


def min_uncertainty_directions(A, Xi) -> MinDirection:
    """Directions saturating ``A + (i/2) Xi >= 0`` as closely as possible.

    ``u1`` is the eigenvector of ``2i Xi^-1 A`` for the smallest positive
    value ``lambda1``; ``saturation_gap = u1^dagger (A + i Xi / 2) u1``, which
    equals ``lambda1 - 1``.
    """
    spec = symplectic_spectrum(A, Xi)
    A = check_symmetric(A)
    Xi = check_skew(Xi)
    u1 = spec.pos_vectors[:, 0]
    v1 = spec.neg_vectors[:, 0]
    H = A + 0.5j * Xi
    gap = float(np.real(u1.conj() @ H @ u1))
    return MinDirection(u1, v1, float(spec.values[0]), gap)
