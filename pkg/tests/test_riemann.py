import math

import numpy as np
import pytest
from scipy import integrate

from eulerfan.eos import GammaLaw, TabulatedLaw
from eulerfan.errors import VacuumIntegralUndefined, WrongRegime
from eulerfan.field import Grid
from eulerfan.riemann import (Regime, RiemannData, build_fan, classify, evaluate,
                              evaluate_field, fan_speeds, middle_state_residuals, sample,
                              self_similar_slopes, solve_middle_state, thresholds)

from conftest import GAMMAS, RHO_C_SYMMETRIC

SQ2 = math.sqrt(2.0)


def bisection_oracle(g, lo, hi, iters=200):
    glo = g(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


# -- classify ---------------------------------------------------------------

@pytest.mark.parametrize("data, regime", [
    ((1.0, -1.0, 1.0, 1.0), Regime.RAREFACTIONS_ONLY),
    ((1.0, 3.0, 1.0, -3.0), Regime.TWO_SHOCKS),
    ((2.0, 0.0, 1.0, 0.0), Regime.MIXED_SHOCK_RAREFACTION),
    ((1.0, -3.0, 1.0, 3.0), Regime.VACUUM_PRESENT),
])
def test_classify_examples(law2, data, regime):
    assert classify(RiemannData(*data), law2) is regime


def test_thresholds_examples(law2):
    th = thresholds(RiemannData(2.0, 0.0, 1.0, 0.0), law2)
    assert th.S == pytest.approx(math.sqrt(1.5), rel=1e-15)
    assert th.I_LR == pytest.approx(4.0 - 2.0 * SQ2, rel=1e-14)
    th = thresholds(RiemannData(1.0, -1.0, 1.0, 1.0), law2)
    assert (th.du, th.I_LR, th.S) == (2.0, 0.0, 0.0)
    assert th.V == pytest.approx(4.0 * SQ2, rel=1e-15)


def test_classify_ties(law2):
    # du == I_LR stays rarefaction-only
    I = thresholds(RiemannData(2.0, 0.0, 1.0, 0.0), law2).I_LR
    d = RiemannData(2.0, 0.0, 1.0, I)
    assert thresholds(d, law2).du == thresholds(d, law2).I_LR
    assert classify(d, law2) is Regime.RAREFACTIONS_ONLY
    # du == V is vacuum
    V = thresholds(RiemannData(1.0, 0.0, 1.0, 0.0), law2).V
    assert classify(RiemannData(1.0, 0.0, 1.0, V), law2) is Regime.VACUUM_PRESENT
    # du == -S with S = 0 is the shock/rarefaction branch
    assert classify(RiemannData(1.0, 0.0, 1.0, 0.0), law2) is Regime.RAREFACTIONS_ONLY
    S = math.sqrt(1.5)
    assert classify(RiemannData(2.0, S, 1.0, 0.0), law2) is Regime.MIXED_SHOCK_RAREFACTION


def test_thresholds_match_quadrature():
    law = GammaLaw(1.0, 1.4)
    d = RiemannData(0.7, 0.1, 2.3, 0.4)
    F = lambda a, b: integrate.quad(lambda t: math.sqrt(law.dpressure(t)) / t, a, b,
                                    epsabs=1e-13, limit=200)[0]
    th = thresholds(d, law)
    assert th.I_LR == pytest.approx(abs(F(0.7, 2.3)), rel=1e-10)
    assert th.V == pytest.approx(F(1e-18, 0.7) + F(1e-18, 2.3), rel=1e-6)


def test_tabulated_law_cannot_be_classified():
    rho = np.linspace(0.0, 3.0, 31)
    law = TabulatedLaw(tuple(rho), tuple(rho ** 2))
    with pytest.raises(VacuumIntegralUndefined):
        classify(RiemannData(1.0, -1.0, 1.0, 1.0), law)


# -- middle state -----------------------------------------------------------

def test_symmetric_middle_state(law2, symmetric_data):
    rho_C, u1_C = solve_middle_state(symmetric_data, law2)
    assert u1_C == 0.0
    assert rho_C == pytest.approx(RHO_C_SYMMETRIC, rel=1e-13)
    oracle = bisection_oracle(lambda r: 2 * SQ2 * (1 - math.sqrt(r)) - 1.0, 1e-12, 1.0)
    assert rho_C == pytest.approx(oracle, abs=1e-12)


@pytest.mark.parametrize("rho, v", [(1.0, 0.0), (0.3, 2.5), (7.0, -1.0)])
def test_constant_data_middle_state(law2, rho, v):
    rho_C, u1_C = solve_middle_state(RiemannData(rho, v, rho, v), law2)
    assert rho_C == pytest.approx(rho, rel=1e-13)
    assert u1_C == pytest.approx(v, abs=1e-13)


def test_wrong_regime_refused(law2):
    with pytest.raises(WrongRegime) as exc:
        solve_middle_state(RiemannData(1.0, 3.0, 1.0, -3.0), law2)
    assert exc.value.regime is Regime.TWO_SHOCKS
    with pytest.raises(WrongRegime):
        build_fan(RiemannData(1.0, -3.0, 1.0, 3.0), law2)


@pytest.mark.parametrize("gamma", GAMMAS)
def test_middle_state_against_oracle(gamma, rng):
    law = GammaLaw(1.0, gamma)
    e = 0.5 * (gamma - 1.0)
    k = 2.0 * math.sqrt(gamma) / (gamma - 1.0)
    done = 0
    while done < 25:
        rL, rR = rng.uniform(0.1, 5.0, 2)
        uL, uR = rng.uniform(-2.0, 2.0, 2)
        d = RiemannData(rL, uL, rR, uR)
        if classify(d, law) is not Regime.RAREFACTIONS_ONLY:
            continue
        g = lambda r: k * (rL ** e - r ** e) + k * (rR ** e - r ** e) - (uR - uL)
        oracle = bisection_oracle(g, 0.0, max(rL, rR))
        rho_C, u1_C = solve_middle_state(d, law)
        assert rho_C == pytest.approx(oracle, rel=1e-11, abs=1e-14)
        r1, r2 = middle_state_residuals(d, law, rho_C, u1_C)
        assert max(abs(r1), abs(r2)) <= 1e-12 * max(1.0, abs(uL), abs(uR))
        done += 1


def test_vacuum_boundary_rho_C_to_zero(law2):
    V = thresholds(RiemannData(1.0, 0.0, 2.0, 0.0), law2).V
    rhos = [solve_middle_state(RiemannData(1.0, 0.0, 2.0, V - eps), law2)[0]
            for eps in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5)]
    assert all(b < a for a, b in zip(rhos, rhos[1:]))
    assert 0.0 < rhos[-1] < 1e-9


# -- fan speeds -------------------------------------------------------------

def test_symmetric_fan_speeds(symmetric_fan):
    s = math.sqrt(2.0 * RHO_C_SYMMETRIC)
    np.testing.assert_allclose(fan_speeds(symmetric_fan), (-1 - SQ2, -s, s, 1 + SQ2), rtol=1e-13)
    np.testing.assert_allclose(fan_speeds(symmetric_fan),
                               (-2.414214, -0.914214, 0.914214, 2.414214), atol=1e-6)


def test_constant_fan_speeds(law2):
    fan = build_fan(RiemannData(1.0, 0.0, 1.0, 0.0), law2)
    np.testing.assert_allclose(fan_speeds(fan), (-SQ2, -SQ2, SQ2, SQ2), rtol=1e-13)


def test_one_sided_fans(law2):
    # Only a 1-wave: right state sits on the left state's 1-rarefaction curve.
    du = 2 * SQ2 * (1 - math.sqrt(0.25))
    fan = build_fan(RiemannData(1.0, 0.0, 0.25, du), law2)
    assert fan.rho_C == pytest.approx(0.25, rel=1e-12)
    assert fan.xi_2C == fan.xi_2R
    assert fan.xi_1L < fan.xi_1C
    # Mirror: only a 2-wave.
    fan = build_fan(RiemannData(0.25, -du, 1.0, 0.0), law2)
    assert fan.rho_C == pytest.approx(0.25, rel=1e-12)
    assert fan.xi_1L == fan.xi_1C
    assert fan.xi_2C < fan.xi_2R


# -- evaluate ---------------------------------------------------------------

def test_evaluate_examples(symmetric_fan):
    assert evaluate(symmetric_fan, -3.0) == (1.0, -1.0)
    rho, u = evaluate(symmetric_fan, 0.0)
    assert rho == pytest.approx(RHO_C_SYMMETRIC, rel=1e-13) and u == 0.0
    # inside the 1-fan: u - c = xi with u = -1 + 2 sqrt2 (1 - sqrt rho)
    rho, u = evaluate(symmetric_fan, -2.0)
    s = (1.0 + 2.0 * SQ2) / (3.0 * SQ2)
    assert rho == pytest.approx(s * s, rel=1e-13)
    assert rho == pytest.approx(0.8142696805, abs=1e-9)
    assert u == pytest.approx(-0.7238576251, abs=1e-9)
    assert u - math.sqrt(2.0 * rho) == pytest.approx(-2.0, abs=1e-10)
    oracle = bisection_oracle(lambda r: -1 + 2 * SQ2 * (1 - math.sqrt(r)) - math.sqrt(2 * r) + 2.0,
                              RHO_C_SYMMETRIC, 1.0)
    assert rho == pytest.approx(oracle, abs=1e-12)


def test_evaluate_on_characteristics(rng):
    law = GammaLaw(1.0, 1.4)
    fan = build_fan(RiemannData(1.3, -0.4, 0.6, 0.9), law)
    xi = np.linspace(fan.xi_1L, fan.xi_1C, 50)
    rho, u = evaluate(fan, xi)
    np.testing.assert_allclose(u - law.sound_speed(rho), xi, atol=1e-10)
    xi = np.linspace(fan.xi_2C, fan.xi_2R, 50)
    rho, u = evaluate(fan, xi)
    np.testing.assert_allclose(u + law.sound_speed(rho), xi, atol=1e-10)


def test_evaluate_scalar_and_array_agree(symmetric_fan):
    xi = np.linspace(-3, 3, 13)
    rho, u = evaluate(symmetric_fan, xi)
    for i, x in enumerate(xi):
        assert evaluate(symmetric_fan, x) == (pytest.approx(rho[i]), pytest.approx(u[i]))


@pytest.mark.parametrize("gamma", GAMMAS)
def test_fan_monotone_continuous_positive(gamma, rng):
    law = GammaLaw(1.0, gamma)
    n = 0
    while n < 10:
        rL, rR = rng.uniform(0.1, 4.0, 2)
        uL, uR = rng.uniform(-2.0, 2.0, 2)
        d = RiemannData(rL, uL, rR, uR)
        if classify(d, law) is not Regime.RAREFACTIONS_ONLY:
            continue
        fan = build_fan(d, law)
        xi = np.linspace(fan.xi_1L - 1, fan.xi_2R + 1, 4001)
        rho, u = evaluate(fan, xi)
        assert np.all(np.diff(u) >= -1e-12)
        assert rho.min() >= fan.min_density - 1e-10
        # continuity: no jump bigger than the local slope allows
        assert np.max(np.abs(np.diff(u))) < 50 * (xi[1] - xi[0])
        assert np.max(np.abs(np.diff(rho))) < 50 * (xi[1] - xi[0]) * max(rL, rR)
        n += 1


def test_slopes_match_finite_differences(symmetric_fan):
    xi = np.array([-2.2, -1.5, -1.0, 1.2, 2.0])
    h = 1e-6
    drho, du = self_similar_slopes(symmetric_fan, xi)
    rp, up = evaluate(symmetric_fan, xi + h)
    rm, um = evaluate(symmetric_fan, xi - h)
    np.testing.assert_allclose(drho, (rp - rm) / (2 * h), atol=1e-7)
    np.testing.assert_allclose(du, (up - um) / (2 * h), atol=1e-7)
    assert self_similar_slopes(symmetric_fan, 0.0) == (0.0, 0.0)
    # gamma = 2: u = (u_L + 2 (xi + c_L)) / 3 in the 1-fan
    assert du[0] == pytest.approx(2.0 / 3.0, rel=1e-12)


# -- sampling on grids ------------------------------------------------------

def test_sample_at_zero_is_datum(symmetric_fan):
    rho, u = sample(symmetric_fan, 0.0, np.array([-1.0, -1e-9, 0.0, 1e-9, 2.0]))
    np.testing.assert_array_equal(u, [-1, -1, -1, 1, 1])
    np.testing.assert_array_equal(rho, 1.0)


def test_evaluate_field_symmetry(symmetric_fan):
    grid = Grid(5.0, 400, 3)
    f = evaluate_field(symmetric_fan, 1.0, grid)
    u1, u2, _ = f.velocity()
    np.testing.assert_allclose(f.rho, f.rho[::-1], atol=1e-14)
    np.testing.assert_allclose(u1, -u1[::-1], atol=1e-14)
    assert np.all(np.diff(u1[:, 0]) >= 0)
    assert np.all(u2 == 0)
    assert np.all(f.rho == f.rho[:, :1])


def test_evaluate_field_small_time_is_datum(symmetric_fan):
    grid = Grid(5.0, 100)
    f = evaluate_field(symmetric_fan, 1e-9, grid)
    left = grid.x1 < 0
    np.testing.assert_allclose(f.rho[left, 0], 1.0)
    np.testing.assert_allclose(f.m1[left, 0], -1.0)
    np.testing.assert_allclose(f.m1[~left, 0], 1.0)
