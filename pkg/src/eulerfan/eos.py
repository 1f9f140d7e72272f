r"""Barotropic pressure laws and the thermodynamic functions built on them.

For a pressure law :math:`p(\rho)` the pressure potential is

.. math::

    H(\rho) = \rho \int_1^\rho \frac{p(z)}{z^2}\,dz ,

normalised so that :math:`H(1) = 0`. It satisfies
:math:`\rho H'(\rho) - H(\rho) = p(\rho)` and :math:`H'' = p'/\rho`. The
Riemann-invariant integral is :math:`\int_a^b \sqrt{p'(\tau)}/\tau\,d\tau`.

Two laws are provided: the closed-form :class:`GammaLaw`
(:math:`p = \kappa\rho^\gamma`) and :class:`TabulatedLaw`, a monotone
piecewise-cubic interpolant of sampled data whose derived quantities are
evaluated by adaptive quadrature.
"""
import abc
import math
from dataclasses import dataclass, field
from numbers import Real

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, VacuumIntegralUndefined
from .numerics import TOL_QUAD, integrate_pieces

TOL_CONVEXITY = 1e-12
VALIDATION_POINTS = 512


def _require_positive(rho, what):
    if isinstance(rho, Real):
        if not rho > 0:
            raise DomainError(f"{what} requires rho > 0, got {rho!r}")
    elif not np.all(np.asarray(rho) > 0):
        raise DomainError(f"{what} requires rho > 0 everywhere")


def _require_nonnegative(rho, what):
    if isinstance(rho, Real):
        if not rho >= 0:
            raise DomainError(f"{what} requires rho >= 0, got {rho!r}")
    elif not np.all(np.asarray(rho) >= 0):
        raise DomainError(f"{what} requires rho >= 0 everywhere")


class PressureLaw(abc.ABC):
    """Convex barotropic pressure law ``p(rho)`` with derived quantities.

    Subclasses supply ``pressure`` and its first two derivatives together
    with the potential and invariant integral. Every method accepts a float
    or an array of densities.
    """

    @abc.abstractmethod
    def pressure(self, rho):
        """p(rho)."""

    @abc.abstractmethod
    def dpressure(self, rho):
        """p'(rho)."""

    @abc.abstractmethod
    def d2pressure(self, rho):
        """p''(rho)."""

    @abc.abstractmethod
    def pressure_potential(self, rho):
        """H(rho) for rho >= 0."""

    @abc.abstractmethod
    def invariant_integral(self, a, b):
        """Signed integral of sqrt(p'(tau))/tau from a to b."""

    @property
    @abc.abstractmethod
    def vacuum_integrals_finite(self):
        """Whether invariant integrals with a zero end point are defined."""

    @abc.abstractmethod
    def validation_densities(self):
        """Positive densities on which :func:`validate` samples the law."""

    def dpressure_potential(self, rho):
        """H'(rho) = (H(rho) + p(rho)) / rho."""
        _require_positive(rho, "dpressure_potential")
        return (self.pressure_potential(rho) + self.pressure(rho)) / rho

    def sound_speed(self, rho):
        """c(rho) = sqrt(p'(rho))."""
        _require_positive(rho, "sound_speed")
        return self.dpressure(rho) ** 0.5

    def dsound_speed(self, rho):
        """dc/drho = p''/(2c)."""
        return self.d2pressure(rho) / (2.0 * self.sound_speed(rho))


@dataclass(frozen=True)
class GammaLaw(PressureLaw):
    """Polytropic law ``p = kappa * rho**gamma`` with ``gamma > 1``."""

    kappa: float = 1.0
    gamma: float = 2.0

    def __post_init__(self):
        if not (self.kappa > 0 and math.isfinite(self.kappa)):
            raise ValueError(f"kappa must be positive and finite, got {self.kappa!r}")
        if not (self.gamma > 1 and math.isfinite(self.gamma)):
            raise ValueError(f"gamma must exceed 1, got {self.gamma!r}")

    # Plain ``**`` keeps scalar calls on Python floats, which matters inside
    # the scalar root finders.
    def pressure(self, rho):
        return self.kappa * rho ** self.gamma

    def dpressure(self, rho):
        return self.kappa * self.gamma * rho ** (self.gamma - 1.0)

    def d2pressure(self, rho):
        g = self.gamma
        return self.kappa * g * (g - 1.0) * rho ** (g - 2.0)

    def pressure_potential(self, rho):
        _require_nonnegative(rho, "pressure_potential")
        return self.kappa * (rho ** self.gamma - rho) / (self.gamma - 1.0)

    def dpressure_potential(self, rho):
        _require_positive(rho, "dpressure_potential")
        g = self.gamma
        return self.kappa * (g * rho ** (g - 1.0) - 1.0) / (g - 1.0)

    def sound_speed(self, rho):
        _require_positive(rho, "sound_speed")
        return (self.kappa * self.gamma) ** 0.5 * rho ** (0.5 * (self.gamma - 1.0))

    def dsound_speed(self, rho):
        return 0.5 * (self.gamma - 1.0) * self.sound_speed(rho) / rho

    def invariant_integral(self, a, b):
        _require_nonnegative(a, "invariant_integral")
        _require_nonnegative(b, "invariant_integral")
        e = 0.5 * (self.gamma - 1.0)
        k = 2.0 * (self.kappa * self.gamma) ** 0.5 / (self.gamma - 1.0)
        return k * (b ** e - a ** e)

    @property
    def vacuum_integrals_finite(self):
        return True

    def validation_densities(self):
        return np.geomspace(1e-3, 1e3, VALIDATION_POINTS)


@dataclass(frozen=True, eq=False)
class TabulatedLaw(PressureLaw):
    """Pressure law interpolated from samples ``(rho_i, p_i)``.

    The samples are joined by a monotone piecewise-cubic (PCHIP) interpolant.
    If the first sample lies above vacuum the point ``(0, 0)`` is prepended,
    since every admissible law vanishes there. Beyond the last sample the
    law continues linearly with the end slope, which keeps it convex and
    monotone.

    Derived quantities use adaptive Simpson quadrature in ``log(rho)``, split
    at the knots.
    """

    rho: tuple
    p: tuple
    tol_quad: float = TOL_QUAD
    _spline: PchipInterpolator = field(init=False, repr=False)
    _knots: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=float)
        p = np.asarray(self.p, dtype=float)
        if rho.ndim != 1 or rho.shape != p.shape:
            raise ValueError("rho and p samples must be 1-D and of equal length")
        if rho.size < 3:
            raise ValueError("a tabulated law needs at least 3 samples")
        if not np.all(np.isfinite(rho)) or not np.all(np.isfinite(p)):
            raise ValueError("tabulated samples must be finite")
        if rho[0] < 0 or np.any(np.diff(rho) <= 0):
            raise ValueError("tabulated densities must be nonnegative and strictly increasing")
        object.__setattr__(self, "rho", tuple(rho.tolist()))
        object.__setattr__(self, "p", tuple(p.tolist()))
        if rho[0] > 0:
            rho = np.concatenate(([0.0], rho))
            p = np.concatenate(([0.0], p))
        object.__setattr__(self, "_knots", rho)
        object.__setattr__(self, "_spline", PchipInterpolator(rho, p, extrapolate=False))

    @classmethod
    def from_csv(cls, path):
        """Read a two-column ``rho,p`` CSV file with one header row."""
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        if data.shape[1] != 2:
            raise ValueError(f"{path}: expected two columns (rho, p), got {data.shape[1]}")
        return cls(tuple(data[:, 0]), tuple(data[:, 1]))

    @property
    def knots(self):
        return self._knots.copy()

    def _evaluate(self, rho, nu):
        scalar = isinstance(rho, Real)
        r = np.asarray(rho, dtype=float)
        if np.any(r < 0):
            raise DomainError("tabulated law evaluated at negative density")
        top = self._knots[-1]
        inside = np.minimum(r, top)
        out = np.asarray(self._spline(inside, nu), dtype=float)
        above = r > top
        if np.any(above):
            slope = float(self._spline(top, 1))
            if nu == 0:
                out = np.where(above, float(self._spline(top)) + slope * (r - top), out)
            elif nu == 1:
                out = np.where(above, slope, out)
            else:
                out = np.where(above, 0.0, out)
        return float(out) if scalar else out

    def pressure(self, rho):
        return self._evaluate(rho, 0)

    def dpressure(self, rho):
        return self._evaluate(rho, 1)

    def d2pressure(self, rho):
        return self._evaluate(rho, 2)

    def _breaks(self):
        return np.log(self._knots[1:]).tolist()

    def _potential_scalar(self, rho):
        if rho == 0.0:
            return 0.0
        # int_1^rho p(z)/z^2 dz with z = exp(s)
        integral = integrate_pieces(
            lambda s: self.pressure(math.exp(s)) * math.exp(-s),
            0.0, math.log(rho), self._breaks(), self.tol_quad)
        return rho * integral

    def pressure_potential(self, rho):
        _require_nonnegative(rho, "pressure_potential")
        if isinstance(rho, Real):
            return self._potential_scalar(float(rho))
        return np.vectorize(self._potential_scalar, otypes=[float])(rho)

    def _invariant_scalar(self, a, b):
        if a == 0.0 or b == 0.0:
            raise VacuumIntegralUndefined(
                "invariant integrals with a vacuum end point are undefined "
                "for tabulated laws")
        # sqrt(p'(tau))/tau dtau with tau = exp(s)
        return integrate_pieces(
            lambda s: max(self.dpressure(math.exp(s)), 0.0) ** 0.5,
            math.log(a), math.log(b), self._breaks(), self.tol_quad)

    def invariant_integral(self, a, b):
        _require_nonnegative(a, "invariant_integral")
        _require_nonnegative(b, "invariant_integral")
        if isinstance(a, Real) and isinstance(b, Real):
            return self._invariant_scalar(float(a), float(b))
        return np.vectorize(self._invariant_scalar, otypes=[float])(a, b)

    @property
    def vacuum_integrals_finite(self):
        return False

    def validation_densities(self):
        lo = self._knots[1] * 1e-3
        grid = np.geomspace(lo, self._knots[-1], VALIDATION_POINTS)
        return np.union1d(grid, self._knots[1:])


@dataclass(frozen=True)
class ValidationResult:
    """Outcome of :func:`validate`.

    ``error`` is ``None`` when the law satisfies every admissibility clause;
    otherwise it holds the first violation found.
    """

    error: Exception | None = None
    vacuum_integrals_finite: bool = True

    @property
    def ok(self):
        return self.error is None

    def raise_if_invalid(self):
        if self.error is not None:
            raise self.error

    def to_dict(self):
        if self.error is None:
            return {"ok": True, "vacuum_integrals_finite": self.vacuum_integrals_finite}
        return {"ok": False, "violation": type(self.error).__name__,
                "rho": getattr(self.error, "rho", None), "message": str(self.error),
                "vacuum_integrals_finite": self.vacuum_integrals_finite}


class LawViolation(DomainError):
    """Base class for admissibility violations reported by :func:`validate`."""

    clause = ""

    def __init__(self, rho=None):
        self.rho = rho
        where = "" if rho is None else f" at rho={rho!r}"
        super().__init__(f"pressure law violates '{self.clause}'{where}")


class NonzeroAtVacuum(LawViolation):
    clause = "p(0) = 0"


class NonMonotone(LawViolation):
    clause = "p'(rho) > 0 for all rho > 0"


class NonConvex(LawViolation):
    clause = "p convex in [0, inf)"


def _first_slope_drop(x, y, tol):
    """Index of the first point where the secant slope decreases, or None."""
    slopes = np.diff(y) / np.diff(x)
    drop = slopes[1:] - slopes[:-1]
    scale = np.maximum(np.abs(slopes[1:]), np.abs(slopes[:-1]))
    bad = np.flatnonzero(drop < -tol * scale)
    return None if bad.size == 0 else int(bad[0]) + 2


def validate(law, tol_convexity=TOL_CONVEXITY):
    """Check a pressure law against the admissibility conditions.

    The law must vanish at vacuum, be strictly increasing and convex. The
    check runs on the raw samples of a tabulated law first and then on a
    log-spaced grid of the interpolant. Convexity is tested through
    secant-slope increments, with a relative tolerance ``tol_convexity``;
    the offending density reported is the right end of the first failing
    three-point stencil.
    """
    finite = law.vacuum_integrals_finite

    def fail(err):
        return ValidationResult(err, finite)

    p0 = law.pressure(0.0)
    if p0 != 0.0:
        return fail(NonzeroAtVacuum(0.0))

    if isinstance(law, TabulatedLaw):
        x = np.asarray(law.rho)
        y = np.asarray(law.p)
        if x[0] == 0.0 and y[0] != 0.0:
            return fail(NonzeroAtVacuum(0.0))
        if x[0] > 0.0:
            x = np.concatenate(([0.0], x))
            y = np.concatenate(([0.0], y))
        rises = np.diff(y)
        bad = np.flatnonzero(rises <= 0)
        if bad.size:
            return fail(NonMonotone(float(x[bad[0] + 1])))
        i = _first_slope_drop(x, y, tol_convexity)
        if i is not None:
            return fail(NonConvex(float(x[i])))

    grid = law.validation_densities()
    dp = np.asarray(law.dpressure(grid))
    bad = np.flatnonzero(~(dp > 0))
    if bad.size:
        return fail(NonMonotone(float(grid[bad[0]])))
    x = np.concatenate(([0.0], grid))
    y = np.concatenate(([0.0], np.asarray(law.pressure(grid))))
    i = _first_slope_drop(x, y, tol_convexity)
    if i is not None:
        return fail(NonConvex(float(x[i])))
    return ValidationResult(None, finite)
