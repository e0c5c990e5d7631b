import math

import pytest
import sympy as sp

from moyal_lab.effective_action.assembly import (
    GAMMA_SIGN,
    assemble_gamma_check,
    expansions,
    gamma_coefficients,
    invariant_weights,
)
from moyal_lab.effective_action.coefficients import CONTRIBUTIONS, TAGS, divergent_coefficients, exact
from moyal_lab.effective_action.regularization import (
    bubble_hu,
    bubble_leading_weight,
    bubble_z_gaussian,
    regularization_scale,
    schwinger_divergence_check,
    schwinger_integral,
    schwinger_leading_divergences,
)
from moyal_lab.effective_action.tadpole import expected_coefficients, profile_integrals, tadpole_numeric
from moyal_lab.errors import AssemblyError, DomainError


# -- coefficient table ------------------------------------------------------

def test_exact_reads_float_repr():
    assert exact(0.1) == sp.Rational(1, 10)
    assert exact("0.25") == sp.Rational(1, 4)


def test_table_domain():
    for omega in (0, 1.5, -0.5):
        with pytest.raises(DomainError):
            divergent_coefficients(omega)
    with pytest.raises(DomainError):
        divergent_coefficients(0.5, theta_value=0)


def test_table_covers_every_contribution():
    table = divergent_coefficients(0.5)
    assert set(table.entries) == set(CONTRIBUTIONS)
    inv, log = table.value("T1", "ũA")
    w = 0.25
    assert inv == pytest.approx(-w / (4 * math.pi**2 * (1 + w) ** 3))
    assert log == 0.0
    report = table.to_report()
    assert report.entries["T4ppp"]["(AA)²-sym"].log_eps == pytest.approx(-1 / (32 * math.pi**2))
    assert "pi" in report.entries["T4ppp"]["(AA)²-sym"].exact_log_eps


def test_pure_quartic_sector_at_omega_one():
    weights = invariant_weights(1)
    assert weights["F⋆F"] == 0
    gamma = gamma_coefficients(1)
    assert gamma["(AA)²-sym"][1] == sp.Rational(1, 32) / sp.pi**2
    assert set(gamma) == set(TAGS)
    assert set(expansions(1)["mass"]) == {"ũA", "A²"}


# -- assembly ---------------------------------------------------------------

@pytest.mark.parametrize("omega", ["0.2", "0.4", "0.6", "0.8", "1.0"])
def test_assembly_is_exact(omega):
    report = assemble_gamma_check(divergent_coefficients(omega))
    assert report.passed
    assert report.sign == GAMMA_SIGN
    assert report.max_defect <= 1e-12
    assert len(report.sectors) == len(TAGS)


def test_assembly_with_mass_and_theta():
    report = assemble_gamma_check(divergent_coefficients("0.5", m2_value="0.7", theta_value=2))
    assert report.max_defect <= 1e-12
    mass = next(s for s in report.sectors if s.tag == "A²")
    assert mass.gamma_log_eps == pytest.approx(0.7 * mass.gamma_inv_eps)


def test_assembly_reports_failing_sectors():
    with pytest.raises(AssemblyError) as info:
        assemble_gamma_check(divergent_coefficients("0.5"), sign=1)
    assert "ũA" in info.value.tags
    assert info.value.exit_code == 2


# -- Schwinger cut-offs -----------------------------------------------------

def test_leading_divergences():
    assert schwinger_leading_divergences(1) == (1.0, -1.0)
    assert schwinger_leading_divergences(2) == (0.25, -1.0)
    assert regularization_scale(3) == pytest.approx(1 / 9)
    with pytest.raises(DomainError):
        schwinger_leading_divergences(0)


def test_single_line_integral_is_elementary():
    eps = 1e-3
    assert schwinger_integral(1, eps, 2) == pytest.approx(1 / eps - 1, rel=1e-10)
    assert schwinger_integral(1, eps, 1) == pytest.approx(-math.log(eps), rel=1e-10)
    with pytest.raises(DomainError):
        schwinger_integral(1, 1.5, 1)


@pytest.mark.parametrize("lines", [1, 2])
def test_fitted_divergences_match(lines):
    check = schwinger_divergence_check(lines)
    assert check.fitted_inv_eps == pytest.approx(check.expected_inv_eps, rel=1e-3)
    assert check.fitted_log_eps == pytest.approx(check.expected_log_eps, rel=1e-3)


def test_schwinger_fit_needs_enough_cutoffs():
    with pytest.raises(DomainError):
        schwinger_divergence_check(2, eps_list=[1e-4, 1e-3, 1e-2])


# -- bubble -----------------------------------------------------------------

def test_bubble_gaussian_step():
    numeric, closed = bubble_z_gaussian(0.3, 0.5, [0.1, 0.2, -0.3, 0.4], 0.5, 1.0)
    assert numeric == pytest.approx(closed, rel=1e-7)
    _, at_zero = bubble_z_gaussian(0.3, 0.5, [0, 0, 0, 0], 0.5, 1.0)
    assert bubble_leading_weight(0.3, 0.5, 0.5, 1.0) == pytest.approx(at_zero / bubble_hu(0.3, 0.5) ** 2)
    with pytest.raises(DomainError):
        bubble_z_gaussian(0.3, 0.5, [0.1, 0.2], 0.5, 1.0)


# -- tadpole ----------------------------------------------------------------

def test_profile_integrals():
    assert profile_integrals(1.0, 1.0) == pytest.approx((8 * math.pi**2, 24 * math.pi**2))
    inv, log = expected_coefficients(1.0, 0.0, 1.0, 1.0)
    assert inv == pytest.approx(-1 / (32 * math.pi**2) * 8 * math.pi**2)
    assert log == pytest.approx(-1 / (16 * math.pi**2) * 24 * math.pi**2)


def test_tadpole_fit_recovers_inverse_cutoff():
    fit = tadpole_numeric(0.5)
    assert fit.relative_error_inv_eps <= 0.01
    assert fit.relative_error_log_eps <= 0.01
    assert fit.coefficients["inv_eps"] < 0
    assert len(fit.values) == len(fit.eps)


@pytest.mark.parametrize("omega", [1.0, 0.2])
def test_tadpole_integrand_stays_finite_at_large_schwinger_time(omega):
    fit = tadpole_numeric(omega)
    assert all(math.isfinite(v) for v in fit.values)
    assert fit.relative_error_inv_eps <= 0.01
    assert fit.relative_error_log_eps <= 0.01


def test_tadpole_log_coefficient_without_mass_is_the_u2_term():
    omega, theta, width = 0.5, 1.0, 1.0
    w = omega * omega
    _, second = profile_integrals(width, theta)
    u2_term = -w * w * second / (math.pi**2 * theta**2 * (1 + w) ** 4)
    reduced = ("inv_eps", "log_eps", "const")
    massless = tadpole_numeric(omega, m2=0.0, basis=reduced)
    assert massless.coefficients["log_eps"] == pytest.approx(u2_term, rel=1e-2)
    assert massless.expected_log_eps == pytest.approx(u2_term)

    first, _ = profile_integrals(width, theta)
    massive = tadpole_numeric(omega, m2=0.3, basis=reduced)
    shift = massive.coefficients["log_eps"] - massless.coefficients["log_eps"]
    assert shift == pytest.approx(-0.3 * w * first / (4 * math.pi**2 * (1 + w) ** 3), rel=2e-2)


def test_tadpole_inverse_coefficient_converges_as_grid_refines():
    steps = [1, 2, 5, 10, 20, 50, 100, 200]
    reduced = ("inv_eps", "log_eps", "const")
    errors = []
    for scale in (2e-6, 4e-5):
        fit = tadpole_numeric(0.5, eps_list=[s * scale for s in steps], basis=reduced)
        errors.append(abs(fit.coefficients["inv_eps"] - fit.expected_inv_eps))
    fine, coarse = errors
    assert fine < coarse
    assert math.log(coarse / fine) / math.log(20) >= 1.0


def test_tadpole_inverse_coefficient_vanishes_like_omega_squared():
    small, smaller = tadpole_numeric(0.1), tadpole_numeric(0.05)
    assert small.relative_error_inv_eps <= 0.01
    assert smaller.relative_error_inv_eps <= 0.01
    ratio = small.coefficients["inv_eps"] / smaller.coefficients["inv_eps"]
    assert ratio == pytest.approx(4 * (1.0025 / 1.01) ** 3, rel=1e-2)
    first, _ = profile_integrals(1.0, 1.0)
    limit = -first / (4 * math.pi**2)
    assert abs(smaller.coefficients["inv_eps"] / 0.05**2 - limit) < abs(small.coefficients["inv_eps"] / 0.1**2 - limit)


@pytest.mark.parametrize("kwargs", [
    {"omega": 0.0},
    {"omega": 0.5, "eps_list": [1e-7, 1e-5, 1e-4, 1e-3, 2e-3, 5e-3]},
    {"omega": 0.5, "eps_list": [1e-4, 2e-4, 3e-4, 5e-4, 8e-4, 1e-3]},
    {"omega": 0.5, "basis": ("inv_eps", "sqrt_eps")},
    {"omega": 0.5, "eps_list": [1e-5, 1e-4, 1e-3, 5e-3]},
])
def test_tadpole_rejects_bad_fits(kwargs):
    with pytest.raises(DomainError):
        tadpole_numeric(**kwargs)
