"""Independent reference computations used by the tests.

Nothing here touches the package's eigensolver or jet arithmetic.
"""

from itertools import combinations

import mpmath
import numpy as np
from scipy.linalg import expm

mpmath.mp.dps = 40


def charpoly_roots(H):
    """Eigenvalues of a Hermitian matrix from its characteristic polynomial.

    Coefficients by Faddeev-LeVerrier in 40-digit arithmetic, roots by
    mpmath's polynomial solver.
    """
    n = H.shape[0]
    A = mpmath.matrix([[mpmath.mpc(complex(x)) for x in row] for row in H])
    I = mpmath.eye(n)
    M = mpmath.zeros(n, n)
    coeffs = [mpmath.mpf(1)]
    for k in range(1, n + 1):
        M = A * M + coeffs[-1] * I
        AM = A * M
        c = -sum(AM[i, i] for i in range(n)) / k
        coeffs.append(c)
    roots = mpmath.polyroots(coeffs, maxsteps=400, extraprec=200)
    return np.sort(np.array([float(mpmath.re(r)) for r in roots]))


def all_principal_minors_nonneg(H, slack=1e-12):
    """Sylvester-type PSD test over every principal minor (determinants via LU)."""
    n = H.shape[0]
    for k in range(1, n + 1):
        for idx in combinations(range(n), k):
            sub = H[np.ix_(idx, idx)]
            if np.real(np.linalg.det(sub)) < -slack:
                return False
    return True


def leading_minors_nonneg(H, slack=1e-12):
    n = H.shape[0]
    return all(np.real(np.linalg.det(H[:k, :k])) >= -slack for k in range(1, n + 1))


def omega(theta, eta, hbar):
    E = np.array([[0.0, 1.0], [-1.0, 0.0]])
    I = np.eye(2)
    return np.block([[theta * E, hbar * I], [-hbar * I, eta * E]])


def omega8(theta, eta, hbar):
    W = np.zeros((8, 8))
    W[:4, :4] = omega(theta, eta, hbar)
    W[4:, 4:] = omega(theta, eta, hbar)
    return W


def propagate(stages, theta, eta, hbar):
    """Row propagator from scipy's expm; stages are (B, duration) pairs."""
    W = omega8(theta, eta, hbar)
    M = np.eye(8)
    for B, duration in stages:
        M = M @ expm(duration * W @ B / hbar)
    return M


def first_order(stages, hbar, h=1e-5):
    """Central finite differences of the exact propagator in theta and eta."""
    M0 = propagate(stages, 0.0, 0.0, hbar)
    d_theta = (propagate(stages, h, 0.0, hbar) - propagate(stages, -h, 0.0, hbar)) / (2 * h)
    d_eta = (propagate(stages, 0.0, h, hbar) - propagate(stages, 0.0, -h, hbar)) / (2 * h)
    return M0, d_theta, d_eta


def random_spd(rng, n, eps=0.05):
    M = rng.normal(size=(n, n))
    return M @ M.T + eps * np.eye(n)


def random_skew(rng, n):
    X = rng.normal(size=(n, n))
    return X - X.T
