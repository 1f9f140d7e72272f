"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 runtime failure, 4 data not
in the rarefaction-only regime, 5 missing snapshots, 6 certificate verdict
false.
"""
import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import law_from_dict, law_to_dict, load_config
from .entropy import certify
from .eos import LawViolation, validate
from .errors import ConfigError, EulerFanError, MissingSnapshots, WrongRegime
from .fvm import run
from .io import (grid_from_dict, read_field_csv, read_json, write_exact_csv,
                 write_field_csv, write_json)
from .riemann import (Regime, RiemannData, build_fan, classify, evaluate_field,
                      fan_speeds, sample, thresholds)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_WRONG_REGIME = 4
EXIT_MISSING = 5
EXIT_VERDICT_FALSE = 6

log = logging.getLogger("eulerfan")


def _emit(obj):
    print(json.dumps(obj, sort_keys=True))


def _need_config(args):
    if getattr(args, "config", None) is None:
        raise ConfigError("--config is required for this subcommand")
    return load_config(args.config, getattr(args, "seed", 0))


def _need_out(args):
    out = getattr(args, "out", None)
    if out is None:
        raise ConfigError("--out is required for this subcommand")
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_validate_eos(args):
    cfg = _need_config(args)
    result = validate(cfg.law)
    _emit(result.to_dict())
    return EXIT_OK if result.ok else EXIT_CONFIG


def cmd_classify(args):
    cfg = _need_config(args)
    validate(cfg.law).raise_if_invalid()
    regime = classify(cfg.data, cfg.law)
    verdict = {"regime": regime.value, "deltas": thresholds(cfg.data, cfg.law).to_dict()}
    if regime is Regime.RAREFACTIONS_ONLY:
        fan = build_fan(cfg.data, cfg.law)
        verdict["middle_state"] = {"rho_C": fan.rho_C, "u1_C": fan.u1_C}
        verdict["fan_speeds"] = list(fan_speeds(fan))
    _emit(verdict)
    return EXIT_OK


def cmd_exact(args):
    cfg = _need_config(args)
    validate(cfg.law).raise_if_invalid()
    fan = build_fan(cfg.data, cfg.law)
    t = args.t if args.t is not None else (cfg.exact_t if cfg.exact_t is not None else cfg.t_end)
    n = args.samples if args.samples is not None else cfg.exact_samples
    if t < 0 or n < 2:
        raise ConfigError("exact needs t >= 0 and at least 2 samples")
    x1 = np.linspace(-cfg.grid.a, cfg.grid.a, n)
    rho, u1 = sample(fan, t, x1)
    out = getattr(args, "out", None)
    if out is None:
        write_exact_csv(sys.stdout, x1, rho, u1)
    else:
        out = _need_out(args)
        write_exact_csv(out / "exact.csv", x1, rho, u1)
    return EXIT_OK


def cmd_simulate(args):
    cfg = _need_config(args)
    validate(cfg.law).raise_if_invalid()
    out = _need_out(args)
    snap_dir = out / "snapshots"
    snap_dir.mkdir(exist_ok=True)
    sim = cfg.sim_config()
    traj = run(sim, spill_dir=snap_dir)
    for i in range(min(len(traj), traj.max_in_memory)):
        write_field_csv(snap_dir / f"t_{i:04d}.csv", traj[i])
    meta = {
        "schema": 1,
        "grid": cfg.grid.to_dict(),
        "law": law_to_dict(cfg.law),
        "data": cfg.data.to_dict(),
        "cfl": cfg.cfl,
        "t_end": cfg.t_end,
        "snapshot_times": traj.times,
        "dt_history": traj.dt_history,
        "perturbation": None if cfg.perturbation is None else vars(cfg.perturbation),
        "certify": {"c_rei": cfg.c_rei, "energy_rtol": cfg.energy_rtol},
        "seed": getattr(args, "seed", 0),
        "threads": getattr(args, "threads", 1),
        "version": __version__,
    }
    write_json(out / "meta.json", meta)
    log.info("wrote %d snapshots to %s", len(traj), snap_dir)
    return EXIT_OK


def load_simulation(out_dir):
    """Read ``meta.json`` and every snapshot of a ``simulate`` output."""
    out = Path(out_dir)
    meta_path = out / "meta.json"
    if not meta_path.exists():
        raise MissingSnapshots(f"{meta_path} not found")
    meta = read_json(meta_path)
    grid = grid_from_dict(meta["grid"])
    law = law_from_dict(meta["law"])
    d = meta["data"]
    data = RiemannData(d["rho_L"], d["u1_L"], d["rho_R"], d["u1_R"])
    fields = []
    for i, t in enumerate(meta["snapshot_times"]):
        path = out / "snapshots" / f"t_{i:04d}.csv"
        if not path.exists():
            raise MissingSnapshots(f"{path} not found")
        fields.append(read_field_csv(path, grid, float(t)))
    return meta, grid, law, data, fields


def cmd_certify(args):
    out = _need_out(args)
    if args.exact:
        cfg = _need_config(args)
        fan = build_fan(cfg.data, cfg.law)
        times = cfg.sim_config().snapshot_times()
        fields = [evaluate_field(fan, t, cfg.grid) for t in times]
        dt = max(np.diff(times)) if len(times) > 1 else 0.0
        c_rei, energy_rtol = cfg.c_rei, cfg.energy_rtol
        exact = True
    else:
        exact = False
        meta, grid, law, data, fields = load_simulation(out)
        fan = build_fan(data, law)
        dts = meta.get("dt_history") or [0.0]
        dt = max(dts)
        tol = meta.get("certify", {})
        c_rei = tol.get("c_rei")
        energy_rtol = tol.get("energy_rtol")
        if getattr(args, "config", None) is not None:
            cfg = load_config(args.config, getattr(args, "seed", 0))
            c_rei, energy_rtol = cfg.c_rei, cfg.energy_rtol
    kwargs = {}
    if c_rei is not None:
        kwargs["c_rei"] = c_rei
    if energy_rtol is not None:
        kwargs["energy_rtol"] = energy_rtol
    report = certify(fields, fan, dt=dt, exact_energy_check=exact, **kwargs)
    report.write(out)
    _emit(report.verdict_dict())
    return EXIT_OK if report.certified else EXIT_VERDICT_FALSE


COMMANDS = {
    "validate-eos": cmd_validate_eos,
    "classify": cmd_classify,
    "exact": cmd_exact,
    "simulate": cmd_simulate,
    "certify": cmd_certify,
}


def _common_options(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", type=Path, default=default, help="TOML run configuration")
    parser.add_argument("--out", type=Path, default=default, help="output directory")
    parser.add_argument("--seed", type=int, default=argparse.SUPPRESS if suppress else 0,
                        help="seed for randomised perturbation phases")
    parser.add_argument("--threads", type=int, default=argparse.SUPPRESS if suppress else 1,
                        help="accepted for compatibility; results do not depend on it")
    parser.add_argument("--sweep", type=Path, default=default,
                        help="manifest listing one config path per line")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="eulerfan",
        description="Exact rarefaction fans, finite-volume runs and relative-entropy certificates.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    _common_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        _common_options(p, suppress=True)
        if name == "exact":
            p.add_argument("--t", type=float, default=None, help="sampling time")
            p.add_argument("--samples", type=int, default=None, help="number of points")
        if name == "certify":
            p.add_argument("--exact", action="store_true",
                           help="certify the exact fan sampled on the configured grid")
    return parser


def _dispatch(args):
    try:
        return COMMANDS[args.command](args)
    except WrongRegime as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_WRONG_REGIME
    except MissingSnapshots as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (ConfigError, LawViolation) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EulerFanError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def _sweep(args):
    manifest = args.sweep
    try:
        lines = manifest.read_text().splitlines()
    except OSError as exc:
        print(f"config error: cannot read sweep manifest: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    paths = [ln.strip() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
    worst = EXIT_OK
    base_out = args.out
    for entry in paths:
        path = Path(entry)
        if not path.is_absolute():
            path = manifest.parent / path
        args.config = path
        if base_out is not None:
            args.out = Path(base_out) / path.stem
        worst = max(worst, _dispatch(args))
    return worst


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.sweep is not None:
            return _sweep(args)
        return _dispatch(args)
    except Exception as exc:  # noqa: BLE001 - map crashes to the runtime exit code
        log.debug("unhandled failure", exc_info=True)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
