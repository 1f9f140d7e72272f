"""How fast does the finite-volume solution approach the exact fan?

We run the Rusanov scheme on the symmetric double rarefaction at four
resolutions and measure two distances to the exact solution at t = 1: the
L1 error in density and the integrated relative entropy. The scheme is
first order, and the relative entropy, being quadratic in the error,
shrinks by more than a factor of two per refinement.

Run with ``python demos/convergence_study.py`` (a few seconds).
"""
import numpy as np

from eulerfan import GammaLaw, Grid, RiemannData, SimConfig, build_fan, run
from eulerfan.entropy import total_relative_entropy
from eulerfan.riemann import evaluate_field

law = GammaLaw(1.0, 2.0)
data = RiemannData(1.0, -1.0, 1.0, 1.0)
fan = build_fan(data, law)

rows = []
for nx1 in (100, 200, 400, 800):
    traj = run(SimConfig(Grid(5.0, nx1), law, data, cfl=0.45, t_end=1.0, snapshot_every=1.0))
    final = traj[-1]
    exact = evaluate_field(fan, 1.0, final.grid)
    l1 = np.abs(final.rho - exact.rho).sum() * final.grid.cell_area
    rows.append((nx1, l1, total_relative_entropy(final, fan, 1.0), len(traj.dt_history)))

print("  nx1   L1(rho)     ratio   int E       ratio   steps")
prev = None
for nx1, l1, E, steps in rows:
    r1 = f"{prev[0] / l1:6.2f}" if prev else "     -"
    r2 = f"{prev[1] / E:6.2f}" if prev else "     -"
    print(f"{nx1:5d}  {l1:.4e}  {r1}   {E:.4e}  {r2}   {steps}")
    prev = (l1, E)
