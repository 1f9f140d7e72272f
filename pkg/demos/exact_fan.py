"""The exact double rarefaction for p = rho^2.

Two gas columns at unit density move apart with speed 1. The solution is
self-similar: it depends on x1 and t only through xi = x1 / t, with two fans
separated by a slower, thinner middle state. For gamma = 2 the 1-fan has
the closed form u1 = (u1_L + 2 (xi + c_L)) / 3, which we use as a check.

Run with ``python demos/exact_fan.py``.
"""
import math

import numpy as np

from eulerfan import GammaLaw, RiemannData, build_fan, evaluate

law = GammaLaw(1.0, 2.0)
fan = build_fan(RiemannData(1.0, -1.0, 1.0, 1.0), law)

print("middle state  rho_C = %.12f  u1_C = %.3g" % (fan.rho_C, fan.u1_C))
print("closed form   rho_C = %.12f" % (1 - 1 / (2 * math.sqrt(2))) ** 2)
print("edge speeds  ", ", ".join(f"{s:+.6f}" for s in fan.speeds))
print()

xi = np.linspace(-3.0, 3.0, 13)
rho, u1 = evaluate(fan, xi)
print("    xi       rho        u1     u1 - c")
for x, r, u in zip(xi, rho, u1):
    print(f"{x:+6.2f}  {r:9.6f}  {u:+9.6f}  {u - law.sound_speed(r):+9.6f}")

# inside the 1-fan the characteristic relation u1 - c = xi must hold
inner = (xi > fan.xi_1L) & (xi < fan.xi_1C)
closed = (-1.0 + 2.0 * (xi[inner] + math.sqrt(2.0))) / 3.0
print()
print("max deviation from the closed-form 1-fan: %.2e" % np.max(np.abs(u1[inner] - closed)))
