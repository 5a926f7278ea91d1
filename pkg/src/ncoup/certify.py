"""Uncertainty-principle certificates: RSUP, scalar and matrix Ozawa,
the noncommutative matrix OUP, and the NQT feasibility verdict."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import matcore
from .errors import DimensionMismatch, NegativeInput
from .models import _cov, nqt_blocks
from .symplectic import E2, NCParams, check_skew, check_symmetric, is_singular, standard_J, symplectic_spectrum

DEFAULT_TOL = 1e-9

INCOMPATIBLE_NOTE = "incompatible with noncommutative quantum mechanics"


def _complex_text(z) -> str:
    re, im = float(z.real), float(z.imag)
    return f"{re!r}{'-' if im < 0 else '+'}{abs(im)!r}j"


@dataclass(frozen=True)
class CertReport:
    principle: str
    holds: bool
    lambda_min_herm: float
    symplectic_lambda1: Optional[float] = None
    witness: Optional[np.ndarray] = None
    notes: str = ""

    def to_items(self) -> list[tuple[str, str]]:
        """Flat key-value view used for text reports."""
        items = [
            ("principle", self.principle),
            ("holds", "true" if self.holds else "false"),
            ("lambda_min_herm", repr(float(self.lambda_min_herm))),
        ]
        if self.symplectic_lambda1 is not None:
            items.append(("lambda1", repr(float(self.symplectic_lambda1))))
        if self.witness is not None:
            items.append(("witness", ",".join(_complex_text(z) for z in self.witness)))
        if self.notes:
            items.append(("notes", self.notes))
        return items

    def to_line(self) -> str:
        parts = []
        for key, value in self.to_items():
            if key == "notes":
                value = '"' + value + '"'
            parts.append(f"{key}={value}")
        return " ".join(parts)


def check_form(A, Xi, tol: float = DEFAULT_TOL, principle: str = "FORM_GENERIC") -> CertReport:
    """Is ``A + (i/2) Xi`` positive semidefinite?

    The verdict comes from the Hermitian eigenvalues. When Xi is
    nonsingular and A positive-definite the smallest Xi-symplectic value is
    reported too, so the two routes can be compared.

    Raises:
        DimensionMismatch: A and Xi differ in shape.
    """
    A = check_symmetric(A, "A")
    Xi = check_skew(Xi, "Xi")
    if A.shape != Xi.shape:
        raise DimensionMismatch(f"A {A.shape} and Xi {Xi.shape} differ in shape")
    res = matcore.is_psd(A + 0.5j * Xi, tol)
    lam1 = None
    if A.shape[0] % 2 == 0 and not is_singular(Xi):
        w = matcore.herm_eigen(A).eigenvalues
        if w[0] > 1e-12 * max(1.0, matcore.max_abs(A)):
            lam1 = float(symplectic_spectrum(A, Xi).values[0])
    witness = None if res.flag else res.witness
    return CertReport(principle, res.flag, res.lambda_min, lam1, witness)


def rsup(Sigma, hbar: float = 1.0, tol: float = DEFAULT_TOL) -> CertReport:
    """Robertson-Schroedinger test ``Sigma + (i hbar / 2) J >= 0``."""
    Sigma = np.asarray(Sigma, dtype=float)
    if Sigma.ndim != 2 or Sigma.shape[0] % 2:
        raise DimensionMismatch("Sigma must be 2n x 2n")
    J = standard_J(Sigma.shape[0] // 2)
    return check_form(Sigma, hbar * J, tol, principle="RSUP")


def oup_matrix(K, G_mat, Gamma, T_mat=None, tol: float = DEFAULT_TOL) -> CertReport:
    """Matrix OUP ``K + (i/2)(G + Gamma - T) >= 0``.

    With ``T`` absent or zero this is the commutative matrix OUP;
    otherwise it is its noncommutative extension.

    Raises:
        DimensionMismatch, NotSkew
    """
    K = check_symmetric(K, "K")
    G_mat = check_skew(G_mat, "G")
    Gamma = check_skew(Gamma, "Gamma")
    T_mat = np.zeros_like(K) if T_mat is None else check_skew(T_mat, "T")
    shapes = {K.shape, G_mat.shape, Gamma.shape, T_mat.shape}
    if len(shapes) != 1:
        raise DimensionMismatch(f"argument shapes differ: {sorted(shapes)}")
    principle = "OUP_MATRIX" if not np.any(T_mat) else "NCOUP"
    return check_form(K, G_mat + Gamma - T_mat, tol, principle=principle)


class OzawaScalar(NamedTuple):
    lhs3: float
    rhs: float
    holds_three_term: bool
    lhs1: float
    holds_product: bool


def scalar_ozawa(eps: float, chi: float, sigmaA: float, sigmaB: float, c_expect: float) -> OzawaScalar:
    """Scalar Ozawa relation and its independent-intervention special case.

    ``lhs3 = eps chi + eps sigmaB + sigmaA chi`` and ``lhs1 = eps chi`` are
    compared with ``|<[A, B]>| / 2``, where ``c_expect`` is the real number
    with ``<[A, B]> = i c_expect``.
    """
    for name, v in (("eps", eps), ("chi", chi), ("sigmaA", sigmaA), ("sigmaB", sigmaB)):
        if not np.isfinite(v) or v < 0:
            raise NegativeInput(f"{name} must be nonnegative, got {v!r}")
    lhs1 = eps * chi
    lhs3 = lhs1 + eps * sigmaB + sigmaA * chi
    rhs = abs(c_expect) / 2.0
    return OzawaScalar(float(lhs3), float(rhs), bool(lhs3 >= rhs), float(lhs1), bool(lhs1 >= rhs))


def nqt_feasibility(Z_cov, W_cov, p: NCParams, tol: float = DEFAULT_TOL) -> CertReport:
    """Verdict of the first-order NCOUP for the noiseless transducer.

    The noise matrix has a vanishing position block and off-diagonal
    blocks proportional to ``theta E W22``, so positivity forces
    ``theta = 0`` or ``W22 = 0``; the latter is unphysical. With
    ``theta = 0`` what remains is the 2x2 test
    ``Z22 + W22 + (eta/hbar)(E Z12)_S - (3 i eta / 2) E >= 0``.
    """
    Z = _cov(Z_cov, "Z")
    W = _cov(W_cov, "W")
    upper_right, A = nqt_blocks(Z, W, p)
    W22 = W[2:, 2:]
    Xi = -3.0 * p.eta * E2
    K = np.zeros((4, 4))
    K[:2, 2:] = upper_right
    K[2:, :2] = upper_right.T
    K[2:, 2:] = A
    Xi4 = np.zeros((4, 4))
    Xi4[2:, 2:] = Xi
    full = matcore.is_psd(K + 0.5j * Xi4, tol)

    w22_nonzero = matcore.max_abs(W22) > 1e-12 * max(1.0, matcore.max_abs(W))
    if p.theta > 0 and w22_nonzero:
        return CertReport(
            "NQT_FEASIBILITY",
            False,
            full.lambda_min,
            None,
            full.witness,
            f"{INCOMPATIBLE_NOTE}: theta > 0 requires W22 = 0, which no probe state allows",
        )
    reduced = check_form(A, Xi, tol, principle="NQT_FEASIBILITY")
    note = (
        "theta = 0 branch; interchanging positions and momenta gives the mirror condition eta = 0"
        if p.theta == 0
        else "W22 = 0 branch"
    )
    return CertReport("NQT_FEASIBILITY", reduced.holds, reduced.lambda_min_herm,
                      reduced.symplectic_lambda1, reduced.witness, note)
