"""CSV and JSON formats shared by the solver and the command line.

Numbers are written with 17 significant digits so that a write/read round
trip is exact.
"""
import json
from pathlib import Path

import numpy as np

from .field import FieldState, Grid

FLOAT_FMT = "%.17g"
FIELD_HEADER = "x1,x2,rho,m1,m2"
EXACT_HEADER = "x1,rho,u1,u2"


def _write_columns(path, header, columns):
    """``path`` may also be an open text stream."""
    data = np.column_stack([np.ravel(c) for c in columns])
    if hasattr(path, "write"):
        path.write(header + "\n")
        np.savetxt(path, data, fmt=FLOAT_FMT, delimiter=",")
        return
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        np.savetxt(fh, data, fmt=FLOAT_FMT, delimiter=",")


def _read_columns(path, header):
    path = Path(path)
    with open(path) as fh:
        first = fh.readline().strip()
    if first != header:
        raise ValueError(f"{path}: expected header {header!r}, found {first!r}")
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def write_field_csv(path, field):
    """One row per cell in row-major (x1 outer, x2 inner) order."""
    X1, X2 = field.grid.mesh()
    _write_columns(path, FIELD_HEADER, (X1, X2, field.rho, field.m1, field.m2))


def read_field_csv(path, grid, t):
    data = _read_columns(path, FIELD_HEADER)
    if data.shape[0] != grid.nx1 * grid.nx2:
        raise ValueError(f"{path}: {data.shape[0]} rows, grid has {grid.nx1 * grid.nx2} cells")
    shape = grid.shape
    return FieldState(t, data[:, 2].reshape(shape), data[:, 3].reshape(shape),
                      data[:, 4].reshape(shape), grid)


def write_exact_csv(path, x1, rho, u1):
    _write_columns(path, EXACT_HEADER, (x1, rho, u1, np.zeros_like(np.asarray(x1, float))))


def read_exact_csv(path):
    """Return ``(x1, rho, u1, u2)`` columns."""
    data = _read_columns(path, EXACT_HEADER)
    return tuple(data[:, i].copy() for i in range(4))


def write_json(path, obj):
    with open(path, "w", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def grid_from_dict(d):
    return Grid(float(d["a"]), int(d["nx1"]), int(d.get("nx2", 1)))
