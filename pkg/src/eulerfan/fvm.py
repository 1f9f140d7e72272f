"""First-order Rusanov finite-volume solver for the barotropic Euler system.

The domain is ``(-a, a) x T^1``. In ``x2`` the grid is periodic; in ``x1``
one ghost cell on each side is frozen at the exterior Riemann state, so the
boundary fluxes equal the prescribed far-field fluxes as long as no wave
reaches ``x1 = +-a``. That is checked when the run is configured and
asserted after every step.
"""
import math
import shutil
import tempfile
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .eos import PressureLaw
from .errors import CflViolation, ConfigError, NegativeDensity
from .field import FieldState, Grid
from .io import read_field_csv, write_field_csv
from .riemann import Regime, RiemannData, build_fan, classify

DEFAULT_CFL = 0.45
DEFAULT_MAX_SNAPSHOTS = 64
_BOUNDARY_TOL = 1e-8
_COMPONENTS = ("rho", "m1", "m2")


@dataclass(frozen=True)
class Perturbation:
    """``amplitude * sin(2 pi mode x2 + phase)`` added to one conserved field."""

    amplitude: float
    mode: int = 1
    component: str = "m2"
    phase: float = 0.0

    def __post_init__(self):
        if self.component not in _COMPONENTS:
            raise ConfigError(f"perturbation component must be one of {_COMPONENTS}")
        if int(self.mode) != self.mode or self.mode < 0:
            raise ConfigError(f"perturbation mode must be a nonnegative integer, got {self.mode!r}")

    def profile(self, x2):
        return self.amplitude * np.sin(2.0 * math.pi * self.mode * x2 + self.phase)


@dataclass(frozen=True)
class SimConfig:
    grid: Grid
    law: PressureLaw
    data: RiemannData
    cfl: float = DEFAULT_CFL
    t_end: float = 1.0
    snapshot_every: float = 0.1
    perturbation: Perturbation | None = None
    max_snapshots: int = DEFAULT_MAX_SNAPSHOTS

    def __post_init__(self):
        if not 0 < self.cfl < 1:
            raise ConfigError(f"cfl must lie in (0, 1), got {self.cfl!r}")
        if not self.t_end > 0:
            raise ConfigError(f"t_end must be positive, got {self.t_end!r}")
        if not self.snapshot_every > 0:
            raise ConfigError(f"snapshot_every must be positive, got {self.snapshot_every!r}")
        reach = self.t_end * self.max_wave_speed()
        margin = 2.0 * self.grid.h1
        if reach >= self.grid.a - margin:
            raise ConfigError(
                f"waves travel {reach:.4g} by t_end but the boundary sits at "
                f"{self.grid.a:.4g} (two-cell margin {margin:.3g}); enlarge a or "
                "shorten t_end")

    def max_wave_speed(self):
        """Largest signal speed of the exact solution, when it is known.

        Rarefaction-only data use the fan edge speeds; other regimes fall back
        to the characteristic speeds of the two constant states.
        """
        d, law = self.data, self.law
        if classify(d, law) is Regime.RAREFACTIONS_ONLY:
            fan = build_fan(d, law)
            return max(abs(fan.xi_1L), abs(fan.xi_2R))
        c = law.sound_speed
        return max(abs(d.u1_L) + c(d.rho_L), abs(d.u1_R) + c(d.rho_R))

    def snapshot_times(self):
        n = int(math.floor(self.t_end / self.snapshot_every + 1e-9))
        times = [k * self.snapshot_every for k in range(n + 1)]
        if self.t_end - times[-1] > 1e-12 * self.t_end:
            times.append(self.t_end)
        else:
            times[-1] = self.t_end
        return times

    @property
    def exterior_left(self):
        d = self.data
        return (d.rho_L, d.rho_L * d.u1_L, 0.0)

    @property
    def exterior_right(self):
        d = self.data
        return (d.rho_R, d.rho_R * d.u1_R, 0.0)


def init(config):
    """Cell averages of the Riemann datum plus the optional perturbation."""
    grid = config.grid
    left = (grid.x1 < 0)[:, None] & np.ones(grid.shape, dtype=bool)
    q = {}
    for name, a, b in zip(_COMPONENTS, config.exterior_left, config.exterior_right):
        q[name] = np.where(left, a, b)
    pert = config.perturbation
    if pert is not None and pert.amplitude != 0.0:
        q[pert.component] = q[pert.component] + pert.profile(grid.x2)[None, :]
        if np.any(q["rho"] <= 0):
            raise ConfigError("density perturbation produces nonpositive density")
    return FieldState(0.0, q["rho"], q["m1"], q["m2"], grid)


def _primitive(rho, m1, m2):
    vac = rho <= 0
    safe = np.where(vac, 1.0, rho)
    return np.where(vac, 0.0, m1 / safe), np.where(vac, 0.0, m2 / safe)


def _signal_speed(law, rho, un):
    return np.abs(un) + np.sqrt(np.maximum(law.dpressure(np.maximum(rho, 0.0)), 0.0))


def physical_flux(U, law, axis):
    """Exact Euler flux of conserved ``U = (rho, m1, m2)`` along ``axis`` (1 or 2)."""
    rho, m1, m2 = (np.asarray(q, dtype=float) for q in U)
    u1, u2 = _primitive(rho, m1, m2)
    p = law.pressure(np.maximum(rho, 0.0))
    if axis == 1:
        return m1, m1 * u1 + p, m2 * u1
    if axis == 2:
        return m2, m1 * u2, m2 * u2 + p
    raise ValueError(f"axis must be 1 or 2, got {axis!r}")


def numerical_flux(left, right, law, axis):
    """Rusanov (local Lax-Friedrichs) flux between conserved states.

    ``F = (f(L) + f(R))/2 - s (U_R - U_L)/2`` with ``s`` the larger of
    ``|u_n| + c`` over the two states. Works elementwise on arrays.
    """
    fl = physical_flux(left, law, axis)
    fr = physical_flux(right, law, axis)
    ul = _primitive(*(np.asarray(q, dtype=float) for q in left))[axis - 1]
    ur = _primitive(*(np.asarray(q, dtype=float) for q in right))[axis - 1]
    s = np.maximum(_signal_speed(law, np.asarray(left[0], float), ul),
                   _signal_speed(law, np.asarray(right[0], float), ur))
    return tuple(0.5 * (a + b) - 0.5 * s * (np.asarray(r, float) - np.asarray(l, float))
                 for a, b, l, r in zip(fl, fr, left, right))


def stable_dt(field, config):
    """Explicit time step ``cfl * min(h1, h2) / max(|u| + c)``."""
    grid = field.grid
    u1, u2 = _primitive(field.rho, field.m1, field.m2)
    speed = np.maximum(np.abs(u1), np.abs(u2)) + np.sqrt(
        np.maximum(config.law.dpressure(np.maximum(field.rho, 0.0)), 0.0))
    smax = float(np.max(speed))
    if smax == 0.0:
        return math.inf
    return config.cfl * min(grid.h1, grid.h2) / smax


def step(field, config, dt=None):
    """Advance ``field`` by one explicit Euler step.

    ``dt`` defaults to :func:`stable_dt`; a larger value raises
    :class:`CflViolation`.
    """
    grid = config.grid
    if field.grid != grid:
        raise ConfigError("field grid does not match the configuration")
    limit = stable_dt(field, config)
    if dt is None:
        dt = limit
    elif dt > limit * (1.0 + 1e-12):
        raise CflViolation(f"dt={dt:.6g} exceeds the CFL bound {limit:.6g}")
    law = config.law
    U = (field.rho, field.m1, field.m2)

    # x1 faces: ghost cells frozen at the exterior states
    ghost_l = tuple(np.full((1, grid.nx2), v) for v in config.exterior_left)
    ghost_r = tuple(np.full((1, grid.nx2), v) for v in config.exterior_right)
    ext = tuple(np.concatenate((gl, q, gr), axis=0) for gl, q, gr in zip(ghost_l, U, ghost_r))
    F1 = numerical_flux(tuple(q[:-1] for q in ext), tuple(q[1:] for q in ext), law, 1)

    # x2 faces: periodic wrap, face j+1/2 between cells j and j+1
    right2 = tuple(np.roll(q, -1, axis=1) for q in U)
    F2 = numerical_flux(U, right2, law, 2)

    lam1 = dt / grid.h1
    lam2 = dt / grid.h2
    new = []
    for q, f1, f2 in zip(U, F1, F2):
        new.append(q - lam1 * (f1[1:] - f1[:-1]) - lam2 * (f2 - np.roll(f2, 1, axis=1)))
    if np.any(new[0] < 0):
        raise NegativeDensity(f"negative density after step at t={field.t:.6g}; "
                              "check the CFL number")
    return FieldState(field.t + dt, new[0], new[1], new[2], grid)


def boundary_flux_totals(config):
    """Net inflow rates of ``(rho, m1, m2)`` through ``x1 = -a`` and ``x1 = a``.

    These are the exact fluxes of the exterior states, integrated over the
    torus.
    """
    fl = physical_flux(config.exterior_left, config.law, 1)
    fr = physical_flux(config.exterior_right, config.law, 1)
    return tuple((float(a) - float(b)) * config.grid.nx2 * config.grid.h2 for a, b in zip(fl, fr))


def check_boundary_inactive(field, config):
    """Raise if the outermost cell columns have left their exterior states."""
    pert = config.perturbation
    amp = 0.0 if pert is None else abs(pert.amplitude)
    for col, ext in ((0, config.exterior_left), (-1, config.exterior_right)):
        for name, value in zip(_COMPONENTS, ext):
            cells = getattr(field, name)[col]
            scale = max(1.0, abs(value))
            if amp:
                dev = abs(float(np.mean(cells)) - value)
                tol = _BOUNDARY_TOL * scale + amp
            else:
                dev = float(np.max(np.abs(cells - value)))
                tol = _BOUNDARY_TOL * scale
            if dev > tol:
                raise ConfigError(
                    f"wave reached the x1 boundary at t={field.t:.6g} "
                    f"({name} deviates by {dev:.3e})")


class Trajectory(Sequence):
    """Snapshots of a run, kept in memory up to ``max_in_memory``.

    Further snapshots are written to CSV under ``spill_dir`` and reloaded on
    access.
    """

    def __init__(self, grid, max_in_memory=DEFAULT_MAX_SNAPSHOTS, spill_dir=None):
        self.grid = grid
        self.max_in_memory = max_in_memory
        self._items = []
        self._times = []
        self._spill_dir = Path(spill_dir) if spill_dir is not None else None
        self._owns_spill = False
        self.dt_history = []

    def append(self, field):
        if self._times and field.t <= self._times[-1]:
            raise ValueError("snapshot times must increase")
        index = len(self._items)
        if index < self.max_in_memory:
            self._items.append(field)
        else:
            if self._spill_dir is None:
                self._spill_dir = Path(tempfile.mkdtemp(prefix="eulerfan-"))
                self._owns_spill = True
            self._spill_dir.mkdir(parents=True, exist_ok=True)
            path = self._spill_dir / f"t_{index:04d}.csv"
            write_field_csv(path, field)
            self._items.append(path)
        self._times.append(field.t)

    @property
    def times(self):
        return list(self._times)

    def __len__(self):
        return len(self._items)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        item = self._items[i]
        if isinstance(item, Path):
            return read_field_csv(item, self.grid, self._times[i])
        return item

    def __del__(self):
        if getattr(self, "_owns_spill", False) and self._spill_dir is not None:
            shutil.rmtree(self._spill_dir, ignore_errors=True)


def run(config, spill_dir=None, callback=None):
    """Advance from the initial datum to ``t_end``.

    Snapshots are stored at multiples of ``snapshot_every`` and at ``t_end``;
    the final step before each snapshot is shortened to land on it exactly.
    ``callback(field, dt)`` is invoked after every step.
    """
    field = init(config)
    traj = Trajectory(config.grid, config.max_snapshots, spill_dir)
    traj.append(field)
    for target in config.snapshot_times()[1:]:
        while field.t < target:
            dt = stable_dt(field, config)
            remaining = target - field.t
            if dt >= remaining or remaining - dt <= 1e-12 * target:
                dt = remaining
            field = step(field, config, dt)
            if field.t != target and abs(field.t - target) <= 1e-12 * target:
                field = field.replace(t=target)
            traj.dt_history.append(dt)
            check_boundary_inactive(field, config)
            if callback is not None:
                callback(field, dt)
        traj.append(field)
    return traj
