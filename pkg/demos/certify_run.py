"""Certify a simulation against the exact fan, then break it on purpose.

The certificate checks three things along the stored snapshots: the total
relative entropy never climbs above an earlier value by more than
c (h + dt), the discrete energy never exceeds what entered through the
boundary, and the rarefaction-form right-hand side stays nonpositive.

A faithful run passes. Scaling the velocity by 10% halfway through injects
energy from nowhere, and the certificate must then fail.

Run with ``python demos/certify_run.py``.
"""
from eulerfan import GammaLaw, Grid, RiemannData, SimConfig, build_fan, certify, run

law = GammaLaw(1.0, 2.0)
data = RiemannData(1.0, -1.0, 1.0, 1.0)
fan = build_fan(data, law)
traj = run(SimConfig(Grid(5.0, 400), law, data))

report = certify(traj, fan, dt=max(traj.dt_history))
print("honest run   :", report.verdicts, "->", report.certified)
print("  tol_rei = %.4e, max int E = %.4e" % (report.tolerances["tol_rei"],
                                              report.total_relative_entropy.max()))

fields = list(traj)
half = len(fields) // 2
tampered = fields[:half] + [f.replace(m1=1.1 * f.m1) for f in fields[half:]]
report = certify(tampered, fan, dt=max(traj.dt_history))
print("tampered run :", report.verdicts, "->", report.certified)
print("  max int E = %.4e, max energy slack = %.4e" % (report.total_relative_entropy.max(),
                                                        report.energy_budget.max()))
