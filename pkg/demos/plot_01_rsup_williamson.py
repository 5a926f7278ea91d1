"""
Symplectic eigenvalues and the Robertson-Schroedinger test
==========================================================

A covariance matrix is a physical state exactly when its smallest
symplectic eigenvalue is at least one. Here both routes are compared on a
squeezed vacuum and on a noisier correlated state.
"""

import numpy as np

from ncoup import check_form, rsup, standard_J, symplectic_spectrum, williamson_diag

J = standard_J(2)

# squeezed vacuum in the first mode, vacuum in the second
r = 0.6
squeezed = 0.5 * np.diag([np.exp(-2 * r), 1.0, np.exp(2 * r), 1.0])
print("squeezed vacuum:", rsup(squeezed).to_line())

# lowering one variance below the squeezing bound breaks the test
too_small = squeezed.copy()
too_small[0, 0] *= 0.8
print("over-squeezed:  ", rsup(too_small).to_line())

###############################################################################
# Williamson normal form of a correlated state: ``A = S D S^T`` with ``D``
# carrying each symplectic value (halved) twice.

rng = np.random.default_rng(0)
M = rng.normal(size=(4, 4))
A = M @ M.T + 0.5 * np.eye(4)
S, D = williamson_diag(A, J)
Sinv = np.linalg.inv(S)
print("symplectic values:", symplectic_spectrum(A, J).values)
print("diag(D):          ", np.diag(D))
print("|S J S^T - J|     =", np.max(np.abs(S @ J @ S.T - J)))
print("|S^-1 A S^-T - D| =", np.max(np.abs(Sinv @ A @ Sinv.T - D)))
print("check_form:", check_form(A, J).to_line())
