"""TOML run configuration (``schema = 1``).

Example::

    schema = 1

    [law]
    kind = "gamma"        # or kind = "table", path = "p.csv"
    kappa = 1.0
    gamma = 2.0

    [data]
    rho_L = 1.0
    u1_L = -1.0
    rho_R = 1.0
    u1_R = 1.0

    [grid]
    a = 5.0
    nx1 = 400
    nx2 = 1

    [sim]
    cfl = 0.45
    t_end = 1.0
    snapshot_every = 0.1

    [sim.perturbation]    # optional
    amplitude = 1e-3
    mode = 2
    component = "m2"
    random_phase = false  # draw the phase from --seed when true

    [exact]
    t = 1.0
    samples = 11

    [certify]
    c_rei = 0.5
    energy_rtol = 1e-10
"""
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .entropy import C_REI, ENERGY_RTOL
from .eos import GammaLaw, TabulatedLaw
from .errors import ConfigError
from .field import Grid
from .fvm import DEFAULT_CFL, DEFAULT_MAX_SNAPSHOTS, Perturbation, SimConfig
from .riemann import RiemannData

SCHEMA_VERSION = 1


def law_from_dict(entry, base_dir=None):
    kind = entry.get("kind")
    if kind == "gamma":
        try:
            return GammaLaw(float(entry.get("kappa", 1.0)), float(entry["gamma"]))
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad gamma law {entry!r}: {exc}") from exc
    if kind == "table":
        try:
            if "path" in entry:
                path = Path(entry["path"])
                if base_dir is not None and not path.is_absolute():
                    path = Path(base_dir) / path
                return TabulatedLaw.from_csv(path)
            return TabulatedLaw(tuple(entry["rho"]), tuple(entry["p"]))
        except (KeyError, OSError, ValueError) as exc:
            raise ConfigError(f"bad tabulated law {entry!r}: {exc}") from exc
    raise ConfigError(f"law kind must be 'gamma' or 'table', got {kind!r}")


def law_to_dict(law):
    if isinstance(law, GammaLaw):
        return {"kind": "gamma", "kappa": law.kappa, "gamma": law.gamma}
    if isinstance(law, TabulatedLaw):
        return {"kind": "table", "rho": list(law.rho), "p": list(law.p)}
    raise TypeError(f"cannot serialise {type(law).__name__}")


@dataclass
class RunConfig:
    law: object
    data: RiemannData
    grid: Grid
    cfl: float = DEFAULT_CFL
    t_end: float = 1.0
    snapshot_every: float = 0.1
    perturbation: Perturbation | None = None
    max_snapshots: int = DEFAULT_MAX_SNAPSHOTS
    exact_t: float | None = None
    exact_samples: int = 201
    c_rei: float = C_REI
    energy_rtol: float = ENERGY_RTOL
    seed: int = 0
    source: Path | None = None
    raw: dict = field(default_factory=dict, repr=False)

    def sim_config(self):
        return SimConfig(self.grid, self.law, self.data, self.cfl, self.t_end,
                         self.snapshot_every, self.perturbation, self.max_snapshots)


def _section(doc, name, required=True):
    sec = doc.get(name)
    if sec is None:
        if required:
            raise ConfigError(f"missing [{name}] section")
        return {}
    if not isinstance(sec, dict):
        raise ConfigError(f"[{name}] must be a table")
    return sec


def parse_config(doc, base_dir=None, seed=0):
    """Build a :class:`RunConfig` from a parsed TOML document."""
    if doc.get("schema") != SCHEMA_VERSION:
        raise ConfigError(f"config schema must be {SCHEMA_VERSION}, got {doc.get('schema')!r}")
    law = law_from_dict(_section(doc, "law"), base_dir)
    try:
        d = _section(doc, "data")
        data = RiemannData(d["rho_L"], d["u1_L"], d["rho_R"], d["u1_R"])
        g = _section(doc, "grid")
        grid = Grid(float(g["a"]), g["nx1"], g.get("nx2", 1))
    except KeyError as exc:
        raise ConfigError(f"missing config key {exc}") from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    sim = _section(doc, "sim", required=False)
    pert = None
    if "perturbation" in sim:
        p = sim["perturbation"]
        phase = float(p.get("phase", 0.0))
        if p.get("random_phase", False):
            phase = float(np.random.default_rng(seed).uniform(0.0, 2.0 * math.pi))
        pert = Perturbation(float(p.get("amplitude", 0.0)), int(p.get("mode", 1)),
                            str(p.get("component", "m2")), phase)
    exact = _section(doc, "exact", required=False)
    cert = _section(doc, "certify", required=False)
    cfg = RunConfig(
        law=law, data=data, grid=grid,
        cfl=float(sim.get("cfl", DEFAULT_CFL)),
        t_end=float(sim.get("t_end", 1.0)),
        snapshot_every=float(sim.get("snapshot_every", 0.1)),
        perturbation=pert,
        max_snapshots=int(sim.get("max_snapshots", DEFAULT_MAX_SNAPSHOTS)),
        exact_t=float(exact["t"]) if "t" in exact else None,
        exact_samples=int(exact.get("samples", 201)),
        c_rei=float(cert.get("c_rei", C_REI)),
        energy_rtol=float(cert.get("energy_rtol", ENERGY_RTOL)),
        seed=seed, raw=doc)
    if cfg.c_rei <= 0 or cfg.energy_rtol <= 0:
        raise ConfigError("certify tolerances must be positive")
    if cfg.exact_samples < 2:
        raise ConfigError("exact.samples must be at least 2")
    return cfg


def load_config(path, seed=0):
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    cfg = parse_config(doc, path.parent, seed)
    cfg.source = path
    return cfg
