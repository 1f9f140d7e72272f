import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from eulerfan.eos import (GammaLaw, NonConvex, NonMonotone, NonzeroAtVacuum, TabulatedLaw,
                          validate)
from eulerfan.errors import DomainError, VacuumIntegralUndefined

from conftest import GAMMAS

densities = st.floats(1e-3, 1e3)
gammas = st.sampled_from(GAMMAS)


def H_oracle(law, rho, points=None):
    # rho * int_1^rho p(z)/z^2 dz by scipy quadrature
    val, _ = integrate.quad(lambda z: law.pressure(z) / z ** 2, 1.0, rho, epsabs=1e-13,
                            epsrel=1e-13, limit=1000, points=points)
    return rho * val


def F_oracle(law, a, b):
    val, _ = integrate.quad(lambda t: math.sqrt(law.dpressure(t)) / t, a, b,
                            epsabs=1e-12, epsrel=1e-12, limit=200)
    return val


# -- validate ---------------------------------------------------------------

@pytest.mark.parametrize("gamma", [2.0, 1.4])
def test_gamma_laws_validate(gamma):
    res = validate(GammaLaw(1.0, gamma))
    assert res.ok and res.vacuum_integrals_finite


def test_nonconvex_table_reports_offending_density():
    res = validate(TabulatedLaw((0.0, 1.0, 2.0), (0.0, 1.0, 1.5)))
    assert isinstance(res.error, NonConvex)
    assert res.error.rho == 2.0
    assert res.to_dict()["violation"] == "NonConvex"


def test_table_violations():
    assert isinstance(validate(TabulatedLaw((0.0, 1.0, 2.0), (0.5, 1.0, 3.0))).error,
                      NonzeroAtVacuum)
    assert isinstance(validate(TabulatedLaw((0.0, 1.0, 2.0), (0.0, 1.0, 1.0))).error,
                      NonMonotone)
    with pytest.raises(NonConvex):
        validate(TabulatedLaw((0.0, 1.0, 2.0), (0.0, 1.0, 1.5))).raise_if_invalid()


def test_convex_table_validates():
    rho = np.linspace(0.0, 4.0, 41)
    res = validate(TabulatedLaw(tuple(rho), tuple(rho ** 2)))
    assert res.ok
    assert not res.vacuum_integrals_finite


def test_bad_parameters():
    with pytest.raises(ValueError):
        GammaLaw(1.0, 1.0)
    with pytest.raises(ValueError):
        GammaLaw(-1.0, 2.0)
    with pytest.raises(ValueError):
        TabulatedLaw((0.0, 2.0, 1.0), (0.0, 1.0, 2.0))


# -- closed forms and examples ----------------------------------------------

def test_potential_examples(law2):
    assert law2.pressure_potential(1.0) == 0.0
    assert law2.pressure_potential(2.0) == pytest.approx(2.0, abs=1e-14)
    assert law2.pressure_potential(0.5) == pytest.approx(-0.25, abs=1e-14)
    for rho in (2.0, 0.5):
        assert law2.pressure_potential(rho) == pytest.approx(H_oracle(law2, rho), abs=1e-12)


def test_dpotential_examples(law2):
    assert law2.dpressure_potential(1.0) == pytest.approx(1.0)
    assert law2.dpressure_potential(2.0) == pytest.approx(3.0)
    h = 1e-5
    for rho in (1.0, 2.0):
        fd = (law2.pressure_potential(rho + h) - law2.pressure_potential(rho - h)) / (2 * h)
        assert law2.dpressure_potential(rho) == pytest.approx(fd, abs=1e-8)
    assert 1.0 * law2.dpressure_potential(1.0) - law2.pressure_potential(1.0) == law2.pressure(1.0)


def test_sound_speed_examples(law2):
    assert law2.sound_speed(2.0) == pytest.approx(2.0)
    assert law2.sound_speed(0.5) == pytest.approx(1.0)
    assert GammaLaw(1.0, 1.4).sound_speed(1.0) == pytest.approx(math.sqrt(1.4), rel=1e-15)
    with pytest.raises(DomainError):
        law2.sound_speed(0.0)


def test_invariant_integral_examples(law2):
    assert law2.invariant_integral(1.0, 4.0) == pytest.approx(2 * math.sqrt(2), rel=1e-14)
    assert law2.invariant_integral(1.0, 1.0) == 0.0
    assert law2.invariant_integral(0.0, 1.0) == pytest.approx(2 * math.sqrt(2), rel=1e-14)
    assert law2.invariant_integral(1.0, 4.0) == pytest.approx(F_oracle(law2, 1.0, 4.0), rel=1e-10)
    # vacuum end point as a limit of the quadrature oracle
    assert law2.invariant_integral(0.0, 1.0) == pytest.approx(F_oracle(law2, 1e-16, 1.0), rel=1e-7)
    with pytest.raises(DomainError):
        law2.invariant_integral(-1.0, 1.0)


# -- properties -------------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(gammas, densities)
def test_potential_identity(gamma, rho):
    law = GammaLaw(1.0, gamma)
    lhs = rho * law.dpressure_potential(rho) - law.pressure_potential(rho)
    assert lhs == pytest.approx(law.pressure(rho), rel=1e-10, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(gammas, st.floats(1e-2, 1e2))
def test_potential_matches_quadrature(gamma, rho):
    law = GammaLaw(1.3, gamma)
    assert law.pressure_potential(rho) == pytest.approx(H_oracle(law, rho), rel=1e-9, abs=1e-11)


@settings(max_examples=100, deadline=None)
@given(gammas, st.floats(1e-2, 1e2))
def test_second_difference_of_potential(gamma, rho):
    law = GammaLaw(1.0, gamma)
    h = 1e-3 * rho
    fd = (law.pressure_potential(rho + h) - 2 * law.pressure_potential(rho)
          + law.pressure_potential(rho - h)) / h ** 2
    assert fd == pytest.approx(law.dpressure(rho) / rho, rel=1e-5)


@settings(max_examples=100, deadline=None)
@given(gammas, densities, densities, densities)
def test_invariant_integral_additive(gamma, a, b, c):
    law = GammaLaw(1.0, gamma)
    total = law.invariant_integral(a, b) + law.invariant_integral(b, c)
    assert total == pytest.approx(law.invariant_integral(a, c), abs=1e-10 * (1 + abs(total)))
    assert law.invariant_integral(a, b) == pytest.approx(-law.invariant_integral(b, a))


@settings(max_examples=50, deadline=None)
@given(gammas, st.floats(1e-2, 1e2), st.floats(1e-2, 1e2))
def test_invariant_integral_matches_quadrature(gamma, a, b):
    law = GammaLaw(0.7, gamma)
    assert law.invariant_integral(a, b) == pytest.approx(F_oracle(law, a, b), rel=1e-9, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(gammas, densities, densities)
def test_potential_convex(gamma, a, b):
    law = GammaLaw(1.0, gamma)
    m = 0.5 * (a + b)
    chord = 0.5 * (law.pressure_potential(a) + law.pressure_potential(b))
    assert law.pressure_potential(m) <= chord + 1e-12 * (1 + abs(chord))


# -- tabulated path ---------------------------------------------------------

@pytest.fixture(scope="module")
def table_law():
    rho = np.linspace(0.0, 4.0, 401)
    return TabulatedLaw(tuple(rho), tuple(rho ** 2))


def test_table_reproduces_gamma_law(table_law):
    law = GammaLaw(1.0, 2.0)
    for rho in (0.3, 1.0, 2.5):
        assert table_law.pressure(rho) == pytest.approx(law.pressure(rho), rel=1e-5)
        assert table_law.pressure_potential(rho) == pytest.approx(law.pressure_potential(rho),
                                                                   abs=1e-5)
        assert table_law.invariant_integral(0.5, rho) == pytest.approx(
            law.invariant_integral(0.5, rho), abs=1e-4)


def test_table_potential_identity(table_law):
    rho = np.array([0.2, 0.9, 1.7, 3.3])
    lhs = rho * table_law.dpressure_potential(rho) - table_law.pressure_potential(rho)
    np.testing.assert_allclose(lhs, table_law.pressure(rho), rtol=1e-9)


def test_table_quadrature_against_scipy(table_law):
    rho = 2.7
    k = table_law.knots
    inner = k[(k > 1.0) & (k < rho)]
    assert table_law.pressure_potential(rho) == pytest.approx(
        H_oracle(table_law, rho, points=inner), abs=1e-9)


def test_table_vacuum_integral_undefined(table_law):
    with pytest.raises(VacuumIntegralUndefined):
        table_law.invariant_integral(0.0, 1.0)


def test_table_extrapolates_linearly(table_law):
    top = table_law.knots[-1]
    slope = table_law.dpressure(top)
    assert table_law.pressure(top + 1.0) == pytest.approx(table_law.pressure(top) + slope)
    assert table_law.d2pressure(top + 1.0) == 0.0


def test_table_from_csv(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("rho,p\n1,1\n2,4\n3,9\n")
    law = TabulatedLaw.from_csv(path)
    assert law.knots[0] == 0.0
    assert law.pressure(2.0) == pytest.approx(4.0)
