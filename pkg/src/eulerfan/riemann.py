"""Riemann data, regime classification and the exact rarefaction fan.

The one-dimensional Riemann problem with data ``(rho_L, u1_L)`` for
``x1 <= 0`` and ``(rho_R, u1_R)`` for ``x1 > 0`` (zero transverse velocity)
is classified from three thresholds built on the invariant integral

    F(a, b) = int_a^b sqrt(p'(tau)) / tau dtau.

In the rarefaction-only regime the self-similar solution is a 1-fan, a
constant middle state and a 2-fan. Inside the 1-fan the left Riemann
invariant ``u - F(0, rho)`` is constant and ``u - c(rho) = xi``; inside the
2-fan ``u + F(0, rho)`` is constant and ``u + c(rho) = xi``. Both relations
are solved for the density by bracketed bisection with Newton polish.
"""
import enum
import math
from dataclasses import dataclass

import numpy as np

from .eos import PressureLaw
from .errors import RootFindingFailure, WrongRegime
from .field import FieldState
from .numerics import TOL_ROOT, bisect_newton, bisect_newton_array

RHO_FLOOR = 1e-30


class Regime(enum.Enum):
    RAREFACTIONS_ONLY = "RarefactionsOnly"
    VACUUM_PRESENT = "VacuumPresent"
    TWO_SHOCKS = "TwoShocks"
    MIXED_SHOCK_RAREFACTION = "MixedShockRarefaction"


@dataclass(frozen=True)
class RiemannData:
    """Left/right constant states of a planar Riemann problem.

    Transverse velocities are zero on both sides.
    """

    rho_L: float
    u1_L: float
    rho_R: float
    u1_R: float

    def __post_init__(self):
        for name in ("rho_L", "u1_L", "rho_R", "u1_R"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if not (self.rho_L > 0 and self.rho_R > 0):
            raise ValueError("Riemann data need rho_L > 0 and rho_R > 0")

    @property
    def du(self):
        return self.u1_R - self.u1_L

    def to_dict(self):
        return {"rho_L": self.rho_L, "u1_L": self.u1_L,
                "rho_R": self.rho_R, "u1_R": self.u1_R}


@dataclass(frozen=True)
class Thresholds:
    """The quantities compared by :func:`classify`.

    du
        Velocity jump ``u1_R - u1_L``.
    I_LR
        ``|F(rho_L, rho_R)|``, the smallest jump reachable by rarefactions.
    V
        ``F(0, rho_L) + F(0, rho_R)``, the jump at which vacuum forms.
    S
        ``sqrt((rho_L - rho_R)(p_L - p_R) / (rho_L rho_R))``; jumps below
        ``-S`` produce two shocks.
    """

    du: float
    I_LR: float
    V: float
    S: float

    def to_dict(self):
        return {"du": self.du, "I_LR": self.I_LR, "V": self.V, "S": self.S}


def thresholds(data, law):
    I_LR = abs(float(law.invariant_integral(data.rho_L, data.rho_R)))
    V = float(law.invariant_integral(0.0, data.rho_L) + law.invariant_integral(0.0, data.rho_R))
    dp = float(law.pressure(data.rho_L) - law.pressure(data.rho_R))
    S = math.sqrt(max((data.rho_L - data.rho_R) * dp, 0.0) / (data.rho_L * data.rho_R))
    return Thresholds(data.du, I_LR, V, S)


def classify(data, law):
    """Regime of the self-similar solution for ``data``.

    Ties follow the inequalities literally: ``du == I_LR`` is still
    rarefaction-only, ``du == V`` already contains vacuum and ``du == -S``
    counts as shock/rarefaction.
    """
    th = thresholds(data, law)
    if th.du >= th.V:
        return Regime.VACUUM_PRESENT
    if th.du >= th.I_LR:
        return Regime.RAREFACTIONS_ONLY
    if th.du < -th.S:
        return Regime.TWO_SHOCKS
    return Regime.MIXED_SHOCK_RAREFACTION


def _middle_density(data, law):
    du = data.du

    def g(rho):
        return (law.invariant_integral(rho, data.rho_L)
                + law.invariant_integral(rho, data.rho_R) - du)

    def dg(rho):
        return -2.0 * law.sound_speed(rho) / rho

    return bisect_newton(g, RHO_FLOOR, max(data.rho_L, data.rho_R), dg)


def solve_middle_state(data, law):
    """Middle state ``(rho_C, u1_C)`` joining the two rarefaction fans.

    ``rho_C`` is the root of ``F(rho, rho_L) + F(rho, rho_R) = du``, a
    decreasing function of ``rho``, bracketed by ``[1e-30, max(rho_L, rho_R)]``.

    Raises
    ------
    WrongRegime
        Unless ``classify(data, law)`` is rarefaction-only.
    RootFindingFailure
        If the bracket has no sign change or the residuals exceed tolerance.
    """
    regime = classify(data, law)
    if regime is not Regime.RAREFACTIONS_ONLY:
        raise WrongRegime(regime)
    rho_C = _middle_density(data, law)
    # Averaging the two wave-curve predictions splits the residual evenly.
    from_left = data.u1_L + law.invariant_integral(rho_C, data.rho_L)
    from_right = data.u1_R - law.invariant_integral(rho_C, data.rho_R)
    u1_C = 0.5 * (from_left + from_right)
    r1, r2 = middle_state_residuals(data, law, rho_C, u1_C)
    scale = max(1.0, abs(data.u1_L), abs(data.u1_R))
    if max(abs(r1), abs(r2)) > TOL_ROOT * scale:
        raise RootFindingFailure(
            f"middle state residuals {r1:.3e}, {r2:.3e} exceed tolerance")
    return rho_C, u1_C


def middle_state_residuals(data, law, rho_C, u1_C):
    """Defects of both wave-curve equations at a candidate middle state."""
    r1 = (u1_C - data.u1_L) - law.invariant_integral(rho_C, data.rho_L)
    r2 = (data.u1_R - u1_C) - law.invariant_integral(rho_C, data.rho_R)
    return float(r1), float(r2)


@dataclass(frozen=True, eq=False)
class WaveFan:
    """Exact rarefaction-fan solution of a Riemann problem.

    The speeds satisfy ``xi_1L <= xi_1C <= xi_2C <= xi_2R``. An empty wave has
    coincident edge speeds.
    """

    data: RiemannData
    law: PressureLaw
    rho_C: float
    u1_C: float
    xi_1L: float
    xi_1C: float
    xi_2C: float
    xi_2R: float

    @property
    def speeds(self):
        return (self.xi_1L, self.xi_1C, self.xi_2C, self.xi_2R)

    @property
    def min_density(self):
        return min(self.data.rho_L, self.rho_C, self.data.rho_R)

    @property
    def max_speed(self):
        """Largest characteristic speed magnitude over the fan."""
        d = self.data
        c = self.law.sound_speed
        return max(abs(d.u1_L) + c(d.rho_L), abs(d.u1_R) + c(d.rho_R),
                   abs(self.u1_C) + c(self.rho_C))


def build_fan(data, law):
    """Classify, solve the middle state and assemble the :class:`WaveFan`."""
    rho_C, u1_C = solve_middle_state(data, law)
    c = law.sound_speed
    xi_1L = data.u1_L - c(data.rho_L)
    xi_1C = u1_C - c(rho_C)
    xi_2C = u1_C + c(rho_C)
    xi_2R = data.u1_R + c(data.rho_R)
    # Roundoff can reorder the speeds of an empty wave by an ulp.
    if rho_C == data.rho_L:
        xi_1C = xi_1L
    if rho_C == data.rho_R:
        xi_2C = xi_2R
    xi_1C = max(xi_1C, xi_1L)
    xi_2R = max(xi_2R, xi_2C)
    return WaveFan(data, law, float(rho_C), float(u1_C),
                   float(xi_1L), float(xi_1C), float(xi_2C), float(xi_2R))


def fan_speeds(fan):
    return fan.speeds


def _regions(fan, xi):
    left = xi < fan.xi_1L
    fan1 = (xi >= fan.xi_1L) & (xi <= fan.xi_1C)
    fan2 = (xi >= fan.xi_2C) & (xi <= fan.xi_2R) & ~fan1
    right = xi > fan.xi_2R
    middle = ~(left | fan1 | fan2 | right)
    return left, fan1, fan2, middle, right


def _fan1_density(fan, xi):
    law, d = fan.law, fan.data

    def h(rho):
        return d.u1_L + law.invariant_integral(rho, d.rho_L) - law.sound_speed(rho) - xi

    def dh(rho):
        return -law.sound_speed(rho) / rho - law.dsound_speed(rho)

    return bisect_newton_array(h, np.full_like(xi, fan.rho_C), np.full_like(xi, d.rho_L), dh)


def _fan2_density(fan, xi):
    law, d = fan.law, fan.data

    def h(rho):
        return d.u1_R - law.invariant_integral(rho, d.rho_R) + law.sound_speed(rho) - xi

    def dh(rho):
        return law.sound_speed(rho) / rho + law.dsound_speed(rho)

    return bisect_newton_array(h, np.full_like(xi, fan.rho_C), np.full_like(xi, d.rho_R), dh)


def evaluate(fan, xi):
    """Density and velocity ``(rho, u1)`` of the fan at ``xi = x1 / t``.

    Accepts a scalar or an array of self-similar coordinates.
    """
    scalar = np.ndim(xi) == 0
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    d, law = fan.data, fan.law
    rho = np.empty_like(xi)
    u1 = np.empty_like(xi)
    left, fan1, fan2, middle, right = _regions(fan, xi)
    rho[left], u1[left] = d.rho_L, d.u1_L
    rho[right], u1[right] = d.rho_R, d.u1_R
    rho[middle], u1[middle] = fan.rho_C, fan.u1_C
    if np.any(fan1):
        r = _fan1_density(fan, xi[fan1])
        rho[fan1] = r
        u1[fan1] = d.u1_L + law.invariant_integral(r, d.rho_L)
    if np.any(fan2):
        r = _fan2_density(fan, xi[fan2])
        rho[fan2] = r
        u1[fan2] = d.u1_R - law.invariant_integral(r, d.rho_R)
    if scalar:
        return float(rho[0]), float(u1[0])
    return rho, u1


def self_similar_slopes(fan, xi):
    """``(drho/dxi, du1/dxi)`` of the fan profile, zero outside the fans.

    Obtained by differentiating the implicit fan relations: with
    ``k = c/rho + c'``, the 1-fan has ``drho/dxi = -1/k`` and the 2-fan
    ``drho/dxi = 1/k``; in both ``du1/dxi = (c/rho)/k``.
    """
    scalar = np.ndim(xi) == 0
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    rho, _ = evaluate(fan, xi)
    _, fan1, fan2, _, _ = _regions(fan, xi)
    inside = fan1 | fan2
    drho = np.zeros_like(xi)
    du = np.zeros_like(xi)
    if np.any(inside):
        r = rho[inside]
        cr = fan.law.sound_speed(r) / r
        k = cr + fan.law.dsound_speed(r)
        du[inside] = cr / k
        drho[inside] = np.where(fan1[inside], -1.0, 1.0) / k
    if scalar:
        return float(drho[0]), float(du[0])
    return drho, du


def sample(fan, t, x1):
    """``(rho, u1)`` at positions ``x1`` and time ``t >= 0``.

    At ``t = 0`` this is the Riemann datum itself (left state for ``x1 <= 0``).
    """
    x1 = np.asarray(x1, dtype=float)
    if t < 0:
        raise ValueError("time must be nonnegative")
    if t == 0:
        d = fan.data
        left = x1 <= 0
        return np.where(left, d.rho_L, d.rho_R), np.where(left, d.u1_L, d.u1_R)
    rho, u1 = evaluate(fan, x1 / t)
    return np.reshape(rho, x1.shape), np.reshape(u1, x1.shape)


def evaluate_field(fan, t, grid):
    """Exact solution at time ``t`` sampled at the cell centres of ``grid``.

    The field is constant in ``x2`` with ``m2 = 0``.
    """
    rho1, u1 = sample(fan, t, grid.x1)
    rho = np.repeat(rho1[:, None], grid.nx2, axis=1)
    u = np.repeat(u1[:, None], grid.nx2, axis=1)
    return FieldState(float(t), rho, rho * u, np.zeros(grid.shape), grid)


def fan_support(fan, t):
    """Interval of ``x1`` touched by non-constant parts of the fan at ``t``."""
    return fan.xi_1L * t, fan.xi_2R * t

