"""Uniform grid on ``(-a, a) x T^1`` and cell-averaged conserved fields."""
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, GridMismatch

TORUS_LENGTH = 1.0


@dataclass(frozen=True)
class Grid:
    """Uniform cell-centred grid, periodic in ``x2``.

    ``nx1`` must be even so that ``x1 = 0`` is a cell face. ``nx2 = 1`` is
    the degenerate one-dimensional case.
    """

    a: float
    nx1: int
    nx2: int = 1

    def __post_init__(self):
        if not self.a > 0:
            raise ConfigError(f"grid half-width a must be positive, got {self.a!r}")
        if int(self.nx1) != self.nx1 or self.nx1 < 4:
            raise ConfigError(f"nx1 must be an integer >= 4, got {self.nx1!r}")
        if self.nx1 % 2:
            raise ConfigError("nx1 must be even so that x1 = 0 falls on a cell face")
        if int(self.nx2) != self.nx2 or self.nx2 < 1:
            raise ConfigError(f"nx2 must be a positive integer, got {self.nx2!r}")
        object.__setattr__(self, "nx1", int(self.nx1))
        object.__setattr__(self, "nx2", int(self.nx2))

    periodic_x2 = True

    @property
    def h1(self):
        return 2.0 * self.a / self.nx1

    @property
    def h2(self):
        return TORUS_LENGTH / self.nx2

    @property
    def cell_area(self):
        return self.h1 * self.h2

    @property
    def shape(self):
        return (self.nx1, self.nx2)

    @property
    def x1(self):
        """Cell-centre coordinates in x1."""
        return -self.a + (np.arange(self.nx1) + 0.5) * self.h1

    @property
    def x2(self):
        """Cell-centre coordinates in x2 on ``[0, 1)``."""
        return (np.arange(self.nx2) + 0.5) * self.h2

    def mesh(self):
        """``(X1, X2)`` arrays of shape ``(nx1, nx2)``."""
        return np.meshgrid(self.x1, self.x2, indexing="ij")

    def to_dict(self):
        return {"a": self.a, "nx1": self.nx1, "nx2": self.nx2}


@dataclass(frozen=True, eq=False)
class FieldState:
    """Conserved variables ``(rho, m1, m2)`` per cell at time ``t``.

    Arrays have shape ``grid.shape`` and are treated as read-only.
    """

    t: float
    rho: np.ndarray
    m1: np.ndarray
    m2: np.ndarray
    grid: Grid

    def __post_init__(self):
        for name in ("rho", "m1", "m2"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != self.grid.shape:
                raise GridMismatch(
                    f"{name} has shape {arr.shape}, grid expects {self.grid.shape}")
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def velocity(self, floor=1e-12):
        """``(u1, u2, vacuum_mask)``; velocity is zero in cells below ``floor``."""
        vac = self.rho < floor
        safe = np.where(vac, 1.0, self.rho)
        u1 = np.where(vac, 0.0, self.m1 / safe)
        u2 = np.where(vac, 0.0, self.m2 / safe)
        return u1, u2, vac

    def totals(self):
        """Cell-area weighted totals of ``(rho, m1, m2)``."""
        area = self.grid.cell_area
        return tuple(float(np.sum(q)) * area for q in (self.rho, self.m1, self.m2))

    def replace(self, **changes):
        values = {"t": self.t, "rho": self.rho, "m1": self.m1, "m2": self.m2,
                  "grid": self.grid}
        values.update(changes)
        return FieldState(**values)


def check_same_grid(field, grid):
    if field.grid != grid:
        raise GridMismatch(f"field grid {field.grid} differs from {grid}")
