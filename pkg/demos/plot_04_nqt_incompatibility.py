"""
The noiseless quadrature transducer
===================================

Its noise matrix has a vanishing position block next to off-diagonal
blocks proportional to ``theta``. Such a matrix cannot be positive
semidefinite unless ``theta = 0`` or the probe momenta are noiseless.
"""

import numpy as np

from ncoup import NCParams, nqt_feasibility, nqt_model

Z = np.diag([1.0, 1.0, 0.6, 0.6])
W = np.diag([2.0, 2.0, 0.5, 0.5])

for theta in (0.0, 1e-3, 0.1):
    r = nqt_feasibility(Z, W, NCParams(theta, 0.1))
    print(f"theta={theta:<6g}", r.to_line())

###############################################################################
# At ``theta = 0`` the remaining test is ``c >= 3 eta / 2`` when the summed
# momentum covariances equal ``c I``.

eta = 0.4
for c in (0.5, 0.6, 0.7):
    Zc = np.diag([1.0, 1.0, c - 0.25, c - 0.25])
    Wc = np.diag([1.0, 1.0, 0.25, 0.25])
    r = nqt_feasibility(Zc, Wc, NCParams(0.0, eta))
    print(f"c={c}: holds={r.holds}  lambda_min={r.lambda_min_herm:+.3f}  (c - 3 eta/2 = {c - 1.5 * eta:+.3f})")

print("effective form:\n", nqt_model(NCParams(0.0, eta)).Xi_eff)
