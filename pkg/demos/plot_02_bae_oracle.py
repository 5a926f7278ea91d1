"""
Backaction-evading amplifier from the Heisenberg equations
==========================================================

The linear measurement model ``V_out = (I + Lambda) Z + Pi W`` is read off
from a first-order evolution in the deformation parameters, then compared
with the closed forms the models module builds directly.
"""

import numpy as np

from ncoup import NCParams, bae_model
from ncoup.algebra import BASIS, bae_oracle

G = 2.0
oracle = bae_oracle(G)

# coefficients of each output in the theta and eta directions
for name, out in zip(("X_b/G", "Y_b/G", "P_Xa", "P_Ya"), oracle.outputs):
    c = out.coeffs
    terms = [f"{b}:{x:+g}" for b, x in zip(BASIS, c.c_theta) if x] + [
        f"{b}:{x:+g}eta" for b, x in zip(BASIS, c.c_eta) if x
    ]
    print(f"{name:6s} first order ->", " ".join(terms) or "0")

###############################################################################
# The oracle and the closed-form model agree, and so do their output
# commutator matrices.

p = NCParams(0.01, 0.02)
model = bae_model(p, G)
Lam, Pi = oracle.model
print("Lambda agrees:", np.allclose(Lam.value(p.theta, p.eta), model.Lambda, atol=1e-12))
print("Pi agrees:    ", np.allclose(Pi.value(p.theta, p.eta), model.Pi, atol=1e-12))
print("T agrees:     ", np.allclose(oracle.T.value(p.theta, p.eta), model.Tmat, atol=1e-12))
print("Xi_eff =\n", model.Xi_eff)
print("det Xi_eff =", np.linalg.det(model.Xi_eff), " expected", (1 - p.xi) ** 2)
