import math

import numpy as np
import pytest

from eulerfan.eos import GammaLaw
from eulerfan.errors import CflViolation, ConfigError
from eulerfan.field import FieldState, Grid
from eulerfan.fvm import (Perturbation, SimConfig, Trajectory, boundary_flux_totals, init,
                          numerical_flux, physical_flux, run, stable_dt, step)
from eulerfan.riemann import RiemannData, build_fan, evaluate_field

LAW = GammaLaw(1.0, 2.0)
SYM = RiemannData(1.0, -1.0, 1.0, 1.0)


def config(nx1=100, nx2=1, data=SYM, **kw):
    return SimConfig(Grid(5.0, nx1, nx2), LAW, data, **kw)


# -- flux -------------------------------------------------------------------

def test_flux_consistency():
    F = numerical_flux((1.0, 0.0, 0.0), (1.0, 0.0, 0.0), LAW, 1)
    assert F == (0.0, 1.0, 0.0)
    U = (2.0, 3.0, -1.0)
    for axis in (1, 2):
        np.testing.assert_allclose(numerical_flux(U, U, LAW, axis), physical_flux(U, LAW, axis))


def test_flux_hand_example():
    F = numerical_flux((2.0, 2.0, 0.0), (1.0, 0.0, 0.0), LAW, 1)
    # s = max(1 + 2, 0 + sqrt 2) = 3
    assert F[0] == pytest.approx(0.5 * (2 + 0) - 0.5 * 3 * (1 - 2))
    assert F[1] == pytest.approx(0.5 * (6 + 1) - 0.5 * 3 * (0 - 2))
    assert F == pytest.approx((2.5, 6.5, 0.0))


def test_flux_dissipation_is_linear():
    d = 1e-3
    F0 = numerical_flux((1.0, 0.0, 0.0), (1.0, 0.0, 0.0), LAW, 1)
    F1 = numerical_flux((1.0, 0.0, 0.0), (1.0, 0.0, d), LAW, 1)
    s = math.sqrt(2.0)
    np.testing.assert_allclose(np.subtract(F1, F0), (0.0, 0.0, -0.5 * s * d), atol=1e-15)


def test_flux_vacuum_side():
    F = numerical_flux((1.0, 0.5, 0.0), (0.0, 0.0, 0.0), LAW, 1)
    assert all(math.isfinite(v) for v in F)


# -- init and configuration --------------------------------------------------

def test_init_piecewise_constant():
    cfg = SimConfig(Grid(1.0, 8), LAW, SYM, t_end=0.1)
    f = init(cfg)
    np.testing.assert_array_equal(f.rho[:, 0], 1.0)
    np.testing.assert_array_equal(f.m1[:, 0], [-1] * 4 + [1] * 4)
    np.testing.assert_array_equal(f.m2, 0.0)


def test_init_perturbation():
    cfg = config(40, 16, perturbation=Perturbation(1e-3, 2, "m2"))
    f = init(cfg)
    expected = 1e-3 * np.sin(4 * math.pi * cfg.grid.x2)
    np.testing.assert_allclose(f.m2, np.broadcast_to(expected, f.m2.shape), atol=1e-18)


def test_config_errors():
    with pytest.raises(ConfigError):
        config(cfl=1.2)
    with pytest.raises(ConfigError):
        config(t_end=3.0)  # waves at speed 2.41 reach x1 = 5
    with pytest.raises(ConfigError):
        Grid(5.0, 101)
    with pytest.raises(ConfigError):
        Perturbation(1e-3, 2, "energy")


def test_snapshot_times():
    assert config(t_end=1.0, snapshot_every=0.25).snapshot_times() == [0, 0.25, 0.5, 0.75, 1.0]
    assert config(t_end=1.0, snapshot_every=0.3).snapshot_times()[-2:] == [
        pytest.approx(0.9), 1.0]


# -- step -------------------------------------------------------------------

def test_constant_field_is_steady():
    cfg = config(data=RiemannData(2.0, 0.3, 2.0, 0.3), nx2=4)
    f = init(cfg)
    g = step(f, cfg)
    np.testing.assert_array_equal(g.rho, f.rho)
    np.testing.assert_allclose(g.m1, f.m1, rtol=1e-15)


def test_single_step_touches_interface_cells_only():
    cfg = config(40)
    f = init(cfg)
    g = step(f, cfg)
    changed = np.flatnonzero(np.any((g.rho != f.rho) | (g.m1 != f.m1), axis=1))
    assert changed.tolist() == [19, 20]


def test_mass_changes_by_boundary_flux():
    cfg = config(40)
    f = init(cfg)
    dt = stable_dt(f, cfg)
    g = step(f, cfg, dt)
    area = cfg.grid.cell_area
    before = f.rho.sum() * area
    after = g.rho.sum() * area
    assert after - before == pytest.approx(-2.0 * dt, abs=1e-14)
    assert boundary_flux_totals(cfg)[0] == pytest.approx(-2.0)


def test_cfl_violation():
    cfg = config(40)
    f = init(cfg)
    with pytest.raises(CflViolation):
        step(f, cfg, 2.0 * stable_dt(f, cfg))


def test_stable_dt_formula():
    cfg = config(40)
    f = init(cfg)
    assert stable_dt(f, cfg) == pytest.approx(0.45 * 0.25 / (1.0 + math.sqrt(2.0)))


# -- run --------------------------------------------------------------------

@pytest.fixture(scope="module")
def run100():
    return run(config(100))


def test_run_snapshot_times(run100):
    assert run100.times[0] == 0.0 and run100.times[-1] == 1.0
    assert len(run100) == 11


def test_run_conservation(run100):
    cfg = config(100)
    flux = boundary_flux_totals(cfg)
    area = cfg.grid.cell_area
    f0 = run100[0]
    for f in run100:
        for name, rate in zip(("rho", "m1", "m2"), flux):
            total = math.fsum((getattr(f, name) * area).ravel())
            start = math.fsum((getattr(f0, name) * area).ravel())
            assert total - start == pytest.approx(rate * f.t, abs=1e-12 * 10)


def test_reflection_symmetry(run100):
    f = run100[-1]
    np.testing.assert_allclose(f.rho, f.rho[::-1], rtol=0, atol=1e-14)
    np.testing.assert_allclose(f.m1, -f.m1[::-1], rtol=0, atol=1e-14)


def test_density_positive(run100):
    assert min(f.rho.min() for f in run100) > 0.0


def test_x2_constancy_without_perturbation():
    traj = run(config(60, 8, t_end=0.5))
    for f in traj:
        assert np.ptp(f.rho, axis=1).max() <= 1e-13
        assert np.ptp(f.m1, axis=1).max() <= 1e-13
        assert np.abs(f.m2).max() == 0.0


def test_constant_data_snapshots_identical():
    traj = run(config(40, data=RiemannData(1.0, 0.2, 1.0, 0.2), t_end=0.3))
    for f in traj:
        np.testing.assert_allclose(f.m1, traj[0].m1, rtol=1e-14)
        np.testing.assert_allclose(f.rho, traj[0].rho, rtol=1e-14)


def test_l1_convergence():
    fan = build_fan(SYM, LAW)
    errs = []
    for n in (200, 400):
        f = run(config(n, snapshot_every=1.0))[-1]
        exact = evaluate_field(fan, 1.0, f.grid)
        errs.append(np.abs(f.rho - exact.rho).sum() * f.grid.cell_area)
    assert errs[0] / errs[1] >= 1.4


def test_callback_sees_every_step():
    seen = []
    traj = run(config(40, t_end=0.2, snapshot_every=0.1), callback=lambda f, dt: seen.append(dt))
    assert seen == traj.dt_history
    assert math.fsum(seen) == pytest.approx(0.2, abs=1e-14)


def test_trajectory_spills_to_disk(tmp_path):
    full = run(config(40, t_end=0.5, snapshot_every=0.05))
    capped = run(SimConfig(Grid(5.0, 40), LAW, SYM, t_end=0.5, snapshot_every=0.05,
                           max_snapshots=3), spill_dir=tmp_path)
    assert len(capped) == len(full) == 11
    assert (tmp_path / "t_0003.csv").exists()
    assert not (tmp_path / "t_0002.csv").exists()
    for a, b in zip(full, capped):
        assert a.t == b.t
        np.testing.assert_array_equal(a.rho, b.rho)
        np.testing.assert_array_equal(a.m1, b.m1)


def test_trajectory_rejects_time_going_back():
    grid = Grid(1.0, 4)
    traj = Trajectory(grid)
    z = np.ones(grid.shape)
    traj.append(FieldState(0.1, z, z, z, grid))
    with pytest.raises(ValueError):
        traj.append(FieldState(0.1, z, z, z, grid))
