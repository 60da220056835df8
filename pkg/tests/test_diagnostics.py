import math

import numpy as np
import pytest

from gelfand_morse import exponential, solve_point
from gelfand_morse.diagnostics import (
    critical_blowup_ladder,
    critical_family,
    critical_point,
    diagnose,
    dirichlet_energy,
    energy_residual,
    fit_decay_exponent,
    fmass_vs_L1,
    fprime_mass_scaling,
    grad_mass,
    pohozaev_residual,
    verify_critical_family,
)
from gelfand_morse.nonlinearity import constant
from gelfand_morse.radial_solver import point_from_closed_form, zero_point


@pytest.fixture
def paraboloid():
    # u = 1 - r^2 solves -Delta u = 6 in B_1 of R^3
    f = constant(6.0)
    point = point_from_closed_form(f, 3, 1.0, lambda r: 1 - r**2, lambda r: -2 * r, 257)
    return point, f


def test_grad_mass_exact(paraboloid):
    point, _ = paraboloid
    # int_{B_rho} 4 r^2 = 16 pi rho^5 / 5
    for rho, val in grad_mass(point, (0.25, 0.5, 1.0)).items():
        assert val == pytest.approx(16 * math.pi * rho**5 / 5, rel=1e-12)


def test_decay_fit_exact(paraboloid):
    point, _ = paraboloid
    assert fit_decay_exponent(point) == pytest.approx(5.0, rel=1e-10)


def test_decay_fit_needs_four_radii(paraboloid):
    with pytest.raises(ValueError):
        fit_decay_exponent(paraboloid[0], (0.1, 0.2, 0.3))


def test_decay_fit_degenerate_on_zero():
    assert fit_decay_exponent(zero_point(3, 33)) is None


def test_fmass_vs_L1_exact(paraboloid):
    point, f = paraboloid
    r = 0.8
    fmass = 6 * 4 * math.pi / 3 * (r / 2) ** 3
    l1 = 4 * math.pi * (r**3 / 3 - r**5 / 5)
    assert fmass_vs_L1(point, f, r) == pytest.approx(fmass * r * r / l1, rel=1e-12)
    assert fmass_vs_L1(zero_point(3, 33), f, r) is None


def test_fprime_mass_zero_for_constant(paraboloid):
    point, f = paraboloid
    assert all(v == 0 for v in fprime_mass_scaling(point, f).values())


def test_identities_for_paraboloid(paraboloid):
    point, f = paraboloid
    assert pohozaev_residual(point, f).relative < 1e-13
    assert energy_residual(point, f).relative < 1e-13


@pytest.mark.parametrize("mu", [0.25, 1.0, 4.0])
def test_liouville_identities(mu):
    point = solve_point(exponential(), 2, 2 * math.log1p(mu))
    f = exponential()
    assert pohozaev_residual(point, f).relative < 1e-9
    assert energy_residual(point, f).relative < 1e-9
    # Dirichlet energy of 2 ln((1+mu)/(1+mu r^2)) is 16 pi (ln(1+mu) - mu/(1+mu))
    exact = 16 * math.pi * (math.log1p(mu) - mu / (1 + mu))
    assert dirichlet_energy(point) == pytest.approx(exact, rel=1e-9)


@pytest.mark.parametrize("a", [0.5, 5.0, 40.0])
def test_identities_on_gelfand_n3(a):
    f = exponential()
    point = solve_point(f, 3, a)
    assert pohozaev_residual(point, f).relative < 1e-7
    assert energy_residual(point, f).relative < 1e-7


def test_diagnose_record_keys():
    f = exponential()
    point = solve_point(f, 3, 2.0)
    rec = diagnose(point, f)
    d = point.diagnostics
    assert set(d["grad_mass"]) == {"0.05", "0.1", "0.15", "0.25"}
    assert set(d["fprime_mass_ratio"]) == {"0.4", "0.2", "0.1", "0.05"}
    assert d["decay_exponent_fit"] == rec.decay_exponent_fit > 0


def test_critical_family_values():
    alpha, sup, u, du = critical_family(3, 1.0)
    assert alpha == pytest.approx((math.sqrt(3) / 2) ** 0.5)
    assert u(1.0) == pytest.approx(0.0, abs=1e-15)
    assert du(0.0) == 0.0
    with pytest.raises(ValueError):
        critical_family(10, 1.0)
    with pytest.raises(ValueError):
        critical_family(3, 0.0)


def test_critical_identities():
    point, f = critical_point(5, 0.4)
    assert pohozaev_residual(point, f).relative < 1e-9
    assert energy_residual(point, f).relative < 1e-9


@pytest.mark.parametrize("n", [3, 6, 9])
def test_verify_critical_family_passes_below_mu_one(n):
    rep = verify_critical_family(n, 0.5)
    assert rep.passed, rep.checks


def test_verify_critical_family_index_zero_above_mu_one():
    rep = verify_critical_family(3, 2.0)
    assert rep.morse_index == 0
    assert not rep.checks["morse_index"]
    assert rep.checks["residual"] and rep.checks["boundary"]


def test_blowup_ladder():
    sups, inc = critical_blowup_ladder(4, [0.125, 1, 0.5, 0.25])
    assert inc and sups == sorted(sups)
    assert np.all(np.isfinite(sups))
