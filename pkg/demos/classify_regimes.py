"""Which waves does a Riemann problem produce?

For a barotropic gas the answer depends only on the velocity jump
``du = u1_R - u1_L`` measured against three thresholds built from the two
densities. This script walks ``du`` across all four regimes for a fixed
density jump and prints where the boundaries fall.

Run with ``python demos/classify_regimes.py``.
"""
import numpy as np

from eulerfan import GammaLaw, RiemannData, classify
from eulerfan.riemann import Regime, solve_middle_state, thresholds

law = GammaLaw(kappa=1.0, gamma=1.4)
rho_L, rho_R = 2.0, 1.0

th = thresholds(RiemannData(rho_L, 0.0, rho_R, 0.0), law)
print(f"gamma = {law.gamma}, rho_L = {rho_L}, rho_R = {rho_R}")
print(f"  two shocks below du = -S    = {-th.S:+.6f}")
print(f"  rarefactions from du = I_LR = {th.I_LR:+.6f}")
print(f"  vacuum from du = V          = {th.V:+.6f}")
print()

# Sweep the velocity jump and report the regime. In the rarefaction-only
# window the middle density shrinks towards zero as du approaches V.
for du in np.linspace(-2.0, th.V + 0.5, 16):
    d = RiemannData(rho_L, -0.5 * du, rho_R, 0.5 * du)
    regime = classify(d, law)
    line = f"du = {du:+8.4f}  {regime.value:<22}"
    if regime is Regime.RAREFACTIONS_ONLY:
        rho_C, u1_C = solve_middle_state(d, law)
        line += f" rho_C = {rho_C:.6f}  u1_C = {u1_C:+.6f}"
    print(line)
