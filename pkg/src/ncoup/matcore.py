"""Small dense Hermitian eigensolver and positive-semidefiniteness tests.

Every positivity statement in the package (``A + (i/2) Xi >= 0``) ends up
here. Matrices are at most 8x8, so a cyclic Jacobi sweep is plenty and
keeps the results deterministic across platforms.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NonHermitianInput

HERMITIAN_ATOL = 1e-12
MAX_SWEEPS = 100


class EigenResult(NamedTuple):
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # columns, aligned with eigenvalues


class PSDResult(NamedTuple):
    flag: bool
    lambda_min: float
    witness: np.ndarray


def max_abs(M) -> float:
    """Max-norm ``max |M_ij|`` (0 for an empty array)."""
    M = np.asarray(M)
    return float(np.max(np.abs(M))) if M.size else 0.0


def as_hermitian(H, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Validate ``H`` and return its exactly-Hermitian part as complex128."""
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] == 0:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {H.shape}")
    if not np.all(np.isfinite(H)):
        raise NonHermitianInput("matrix has non-finite entries")
    defect = max_abs(H - H.conj().T)
    if defect > atol * max(1.0, max_abs(H)):
        raise NonHermitianInput(f"matrix is not Hermitian (max |H - H^dagger| = {defect:.3e})")
    return 0.5 * (H + H.conj().T)


def _off_norm_sq(A: list) -> float:
    n = len(A)
    return sum(abs(A[i][j]) ** 2 for i in range(n) for j in range(n) if i != j)


def herm_eigen(H, max_sweeps: int = MAX_SWEEPS) -> EigenResult:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each (p, q) rotation first strips the phase of ``H[p, q]`` and then
    applies the classical real symmetric Jacobi rotation, so the iteration
    never leaves the Hermitian manifold. The loops run on plain Python
    complex numbers, which beats array calls at these sizes.

    Args:
        H: square Hermitian matrix (real symmetric input is fine).
        max_sweeps: budget of full cyclic sweeps.

    Returns:
        EigenResult with ascending real eigenvalues and orthonormal
        eigenvectors stored column-wise, ``H = V diag(w) V^dagger``.

    Raises:
        NonHermitianInput: symmetry check fails.
        NoConvergence: off-diagonal mass did not vanish within budget.
    """
    Hc = as_hermitian(H)
    n = Hc.shape[0]
    A = [[complex(x) for x in row] for row in Hc.tolist()]
    V = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    scale = math.sqrt(sum(abs(x) ** 2 for row in A for x in row))
    converged = False
    for sweep in range(max_sweeps):
        if _off_norm_sq(A) == 0.0:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p][q]
                r = abs(apq)
                if r == 0.0:
                    continue
                a, b = A[p][p].real, A[q][q].real
                g = 100.0 * r
                # off-diagonal entry below the diagonal's rounding level: drop it
                if (sweep > 3 and abs(a) + g == abs(a) and abs(b) + g == abs(b)) or scale + g == scale:
                    A[p][q] = A[q][p] = 0j
                    continue
                cph = apq.conjugate() / r
                diff = b - a
                if abs(diff) + g == abs(diff):
                    t = r / diff
                else:
                    theta = diff / (2.0 * r)
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                sc, cc = s * cph, c * cph
                # columns p, q of A U with U = [[c, s], [-s cph, c cph]];
                # Hermiticity lets rows p, q mirror them
                for k in range(n):
                    Ak = A[k]
                    x, y = Ak[p], Ak[q]
                    Ak[p] = c * x - sc * y
                    Ak[q] = s * x + cc * y
                Ap, Aq = A[p], A[q]
                for k in range(n):
                    Ap[k] = A[k][p].conjugate()
                    Aq[k] = A[k][q].conjugate()
                Ap[q] = Aq[p] = 0j
                Ap[p] = complex(a - t * r)
                Aq[q] = complex(b + t * r)
                for k in range(n):
                    Vk = V[k]
                    x, y = Vk[p], Vk[q]
                    Vk[p] = c * x - sc * y
                    Vk[q] = s * x + cc * y
    if not converged:
        raise NoConvergence(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    w = np.array([A[i][i].real for i in range(n)])
    order = np.argsort(w, kind="stable")
    return EigenResult(w[order], np.array(V, dtype=complex)[:, order])


def is_psd(H, tol: float = 0.0) -> PSDResult:
    """Tolerance-aware positive-semidefiniteness test.

    ``flag`` is true iff the smallest eigenvalue is at least
    ``-tol * (1 + max|H_ij|)``. The witness is a unit eigenvector for the
    smallest eigenvalue; when the test fails it is a direction along which
    ``v^dagger H v < 0``.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    res = herm_eigen(H)
    lam = float(res.eigenvalues[0])
    flag = lam >= -tol * (1.0 + max_abs(H))
    return PSDResult(bool(flag), lam, res.eigenvectors[:, 0].copy())


def sqrtm_psd(A) -> np.ndarray:
    """Principal square root of a real symmetric PSD matrix."""
    w, V = herm_eigen(np.asarray(A, dtype=float))
    w = np.clip(w, 0.0, None)
    return np.real((V * np.sqrt(w)) @ V.conj().T)


def inv_sqrtm_pd(A) -> np.ndarray:
    """Inverse principal square root of a real symmetric positive-definite matrix."""
    w, V = herm_eigen(np.asarray(A, dtype=float))
    return np.real((V / np.sqrt(w)) @ V.conj().T)
