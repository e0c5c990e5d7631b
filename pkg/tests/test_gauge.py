import math
from fractions import Fraction

import numpy as np
import pytest

from moyal_lab.errors import DimensionError, DomainError
from moyal_lab.gauge.limits import commutative_limit_check, limit_kappa
from moyal_lab.gauge.model import (
    CovariantField2D,
    GaugeModel,
    bidiagonal_field,
    bidiagonal_fields_4d,
    covariant_coordinates,
    gauge_action_2d,
    gauge_action_forms,
    gauge_eom_residual_2d,
    hessian_probe,
)
from moyal_lab.gauge.profile import (
    profile_coefficients_quadrature,
    profile_coefficients_series,
    profile_series_xspace,
    vacuum_profile_xspace,
)
from moyal_lab.gauge.sequences import (
    Branch,
    as_fraction,
    characteristic_root,
    classify_branch,
    closed_form_4d,
    hyp2f1_terminating,
    recurrence_4d,
    recurrence_residual_2d,
    vacuum_sequence_2d,
    vacuum_sequence_4d,
)
from moyal_lab.moyal.algebra import interior_defect
from moyal_lab.moyal.params import Field, MoyalParams


@pytest.fixture
def space() -> MoyalParams:
    return MoyalParams(theta=1.0, dim=4)


def _random_z(params, trunc, rng):
    return CovariantField2D(Field(params, trunc, rng.normal(size=(trunc, trunc)) + 1j * rng.normal(size=(trunc, trunc))))


# -- action -----------------------------------------------------------------

def test_model_bounds(plane):
    with pytest.raises(DomainError):
        GaugeModel(plane, omega2=1.5, kappa=0.0)
    with pytest.raises(DomainError):
        GaugeModel(plane, omega2=0.5, kappa=math.inf)


def test_covariant_coordinates_round_trip(plane, rng):
    z = _random_z(plane, 5, rng)
    a1, a2 = covariant_coordinates(z)
    assert (CovariantField2D.from_coordinates(a1, a2).Z - z.Z).norm() < 1e-14
    assert (a1 - a1.dagger).norm() < 1e-14


@pytest.mark.parametrize("omega2,kappa", [(0.0, 0.0), (0.2, -1.0), (1.0, 0.5)])
def test_three_forms_of_the_action_agree(plane, rng, omega2, kappa):
    forms = gauge_action_forms(_random_z(plane, 6, rng), GaugeModel(plane, omega2=omega2, kappa=kappa))
    assert forms.max_defect < 1e-10


def test_eom_is_the_gradient_of_the_action(plane, rng):
    model = GaugeModel(plane, omega2=0.3, kappa=-0.7)
    z = _random_z(plane, 5, rng)
    d = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    h = 1e-5
    plus = gauge_action_2d(CovariantField2D(z.Z.with_coeffs(z.Z.coeffs + h * d)), model)
    minus = gauge_action_2d(CovariantField2D(z.Z.with_coeffs(z.Z.coeffs - h * d)), model)
    numeric = (plus - minus) / (2 * h)
    # dS = 2π·2 Re tr(E dZ†) with E the residual
    residual = gauge_eom_residual_2d(z, model).coeffs
    analytic = 2 * np.pi * 2 * np.real(np.trace(residual @ d.conj().T))
    assert numeric == pytest.approx(analytic, rel=1e-6)


# -- 2D sequences -----------------------------------------------------------

@pytest.mark.parametrize("omega2,branch", [
    (0.0, Branch.OMEGA0), (0.1, Branch.LOW_OMEGA), (1 / 3, Branch.ONE_THIRD),
    (0.5, Branch.MID_OMEGA), (1.0, Branch.OMEGA_ONE),
])
def test_branch_classification(omega2, branch):
    assert classify_branch(omega2) is branch


def test_characteristic_root_solves_quadratic():
    for w in (0.1, 0.2, 0.5, 0.8):
        r = characteristic_root(w)
        for root in (r, 1 / r):
            assert (3 * w - 1) * (1 + root**2) + 2 * (1 + w) * root == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(DomainError):
        characteristic_root(1 / 3)


def test_closed_forms_on_special_branches(plane):
    one_third = vacuum_sequence_2d(GaugeModel(plane, omega2=1 / 3, kappa=-1.0), m_max=6)
    assert one_third.u == pytest.approx((0.0, 0.75, 0.75, 0.75, 0.75, 0.75, 0.75))
    one = vacuum_sequence_2d(GaugeModel(plane, omega2=1.0, kappa=-1.0), m_max=5)
    assert one.u == pytest.approx((0.0, 0.5, 0.0, 0.5, 0.0, 0.5))
    free = vacuum_sequence_2d(GaugeModel(plane, omega2=0.0, kappa=0.0), alpha=2.0, m_max=4)
    assert free.u == pytest.approx((0.0, 2.0, 4.0, 6.0, 8.0))


def test_decaying_branches_saturate(plane):
    for w in (0.15, 0.6):
        seq = vacuum_sequence_2d(GaugeModel(plane, omega2=w, kappa=-1.0), m_max=80)
        assert seq.u[0] == 0.0
        assert seq.u[-1] == pytest.approx(1.0 / (4 * w), rel=1e-6)
        assert np.abs(recurrence_residual_2d(seq.u, seq.model)).max() < 1e-12


@pytest.mark.parametrize("omega2,kappa,alpha", [
    (0.0, -1.0, 0.0),
    (0.5, 1.0, 0.0),
    (1.0, 0.5, 0.0),
    (1 / 3, 0.5, 0.0),
    (0.5, -1.0, 1.0),
    (0.1, -1.0, 1.0),
])
def test_rejected_parameter_combinations(plane, omega2, kappa, alpha):
    with pytest.raises(DomainError):
        vacuum_sequence_2d(GaugeModel(plane, omega2=omega2, kappa=kappa), alpha=alpha)


def test_growing_mode_needs_opt_in(plane):
    seq = vacuum_sequence_2d(GaugeModel(plane, omega2=0.1, kappa=-1.0), alpha=0.5, m_max=10, allow_growing=True)
    assert seq.alpha == 0.5
    assert seq.u[-1] > seq.u[5] > 0


def test_bidiagonal_vacuum_solves_equation_of_motion(plane):
    model = GaugeModel(plane, omega2=0.6, kappa=-1.0)
    seq = vacuum_sequence_2d(model, m_max=30)
    z = bidiagonal_field(seq.u, 12, plane, phases=np.linspace(0, 1, 11))
    residual = gauge_eom_residual_2d(z, model)
    assert interior_defect(residual, Field.zeros(plane, 12), 2) < 1e-12
    assert z.Z.entry(0, 1) == pytest.approx(-1j * np.sqrt(seq.u[1]))


def test_bidiagonal_field_checks_inputs(plane):
    with pytest.raises(DimensionError):
        bidiagonal_field([0.0, 1.0], 4, plane)
    with pytest.raises(DomainError):
        bidiagonal_field([0.0, -1.0, 1.0, 1.0], 4, plane)


def test_hessian_probe_is_flagged_heuristic(plane, caplog):
    model = GaugeModel(plane, omega2=1 / 3, kappa=-1.0)
    z = bidiagonal_field(vacuum_sequence_2d(model, m_max=10).u, 8, plane)
    probe = hessian_probe(z, model, directions=4, seed=3)
    assert probe.heuristic
    assert len(probe.curvatures) == 4
    assert probe.min_curvature == min(probe.curvatures)
    assert "heuristic" in caplog.text


# -- 4D sequences -----------------------------------------------------------

def test_as_fraction_reads_decimals():
    assert as_fraction("0.15") == Fraction(3, 20)
    assert as_fraction(0.1) == Fraction(1, 10)
    with pytest.raises(DomainError):
        as_fraction(math.nan)


def test_terminating_hypergeometric_series():
    assert hyp2f1_terminating(Fraction(-1), Fraction(2), Fraction(3), Fraction(1, 2)) == Fraction(2, 3)
    assert hyp2f1_terminating(Fraction(1, 2), Fraction(0), Fraction(1), Fraction(5)) == 1
    with pytest.raises(DomainError):
        hyp2f1_terminating(Fraction(1, 2), Fraction(1, 2), Fraction(1), Fraction(1, 3))


@pytest.mark.parametrize("omega2", ["0.05", "0.15", "0.25"])
def test_closed_form_matches_recurrence(omega2):
    w = as_fraction(omega2)
    closed = closed_form_4d(w, 1, 20)
    iterated = recurrence_4d(w, 0, 1, 20)
    assert closed[0] == 0 and closed[1] == 1
    for a, b in zip(closed, iterated):
        assert abs(a - b) <= Fraction(1, 10**10) * max(abs(a), abs(b), 1)
    assert closed[2] / closed[1] == (1 + w) / (1 - 3 * w)


def test_closed_form_singular_points():
    for w in (0, 1, Fraction(1, 3)):
        with pytest.raises(DomainError):
            closed_form_4d(w, 1, 5)


def test_four_dimensional_sequence(space):
    seq = vacuum_sequence_4d(GaugeModel(space, omega2=0.2, kappa=0.0), v1=1.0, m_max=12)
    assert seq.branch is Branch.FOUR_D
    assert seq.dim == 4
    assert seq.recurrence_defect <= 1e-10
    assert seq.exact[1] == 1
    edge = vacuum_sequence_4d(GaugeModel(space, omega2=1.0, kappa=0.0), v1=1.0, m_max=6)
    assert any("recurrence only" in f for f in edge.flags)
    flat = vacuum_sequence_4d(GaugeModel(space, omega2=1 / 3, kappa=0.0), v1=0.0, m_max=4)
    assert flat.u == (0.0,) * 5


def test_four_dimensional_preconditions(space):
    with pytest.raises(DomainError):
        vacuum_sequence_4d(GaugeModel(space, omega2=0.2, kappa=-1.0), v1=1.0)
    with pytest.raises(DomainError):
        vacuum_sequence_4d(GaugeModel(space, omega2=1 / 3, kappa=0.0), v1=1.0)


def test_four_dimensional_fields(space):
    seq = vacuum_sequence_4d(GaugeModel(space, omega2=0.2, kappa=0.0), v1=1.0, m_max=12)
    z1, z2 = bidiagonal_fields_4d(seq.u, 3, space)
    assert z1.entry((0, 0), (1, 0)) == pytest.approx(-1j)
    assert z2.entry((1, 0), (1, 1)) == pytest.approx(-1j * np.sqrt(seq.u[2]))
    assert z1.entry((0, 0), (0, 1)) == 0
    with pytest.raises(DimensionError):
        bidiagonal_fields_4d(seq.u[:5], 3, space)


# -- commutative limit ------------------------------------------------------

def test_commutative_limit_is_linear_in_omega():
    assert limit_kappa(0.01, 1.0) == pytest.approx(-0.01 * math.sqrt(2))
    rows = commutative_limit_check([1e-2, 1e-3, 1e-4], m_max=10)
    assert [r.omega for r in rows] == [1e-2, 1e-3, 1e-4]
    scaled = [r.scaled_defect for r in rows]
    assert max(scaled) <= 2 * 10**2
    assert max(scaled) <= 1.5 * min(scaled)


def test_commutative_limit_range():
    with pytest.raises(DomainError):
        commutative_limit_check([0.5])


# -- profile ----------------------------------------------------------------

def test_profile_quadrature_matches_laguerre_sum(plane):
    seq = vacuum_sequence_2d(GaugeModel(plane, omega2=1 / 3, kappa=-1.0), m_max=12,
                             phases=np.linspace(0.0, 0.5, 12))
    for z in (0.0, 0.5, 2.0):
        series = profile_coefficients_series(seq, z, levels=10)
        quad = profile_coefficients_quadrature(seq, z, levels=10)
        assert quad == pytest.approx(series, abs=1e-7)
    x = np.array([0.4, -0.3])
    np.testing.assert_allclose(vacuum_profile_xspace(seq, x, levels=10), profile_series_xspace(seq, x, levels=10),
                               atol=1e-7)


def test_profile_of_real_vacuum_points_along_x_tilde(plane):
    seq = vacuum_sequence_2d(GaugeModel(plane, omega2=1.0, kappa=-1.0), m_max=8)
    x = np.array([0.3, 0.2])
    a, b = profile_coefficients_series(seq, 2.0 * float(x @ x), levels=6)
    assert b == 0.0
    np.testing.assert_allclose(profile_series_xspace(seq, x, levels=6), a * np.array([-0.4, 0.6]))


def test_profile_point_shape(plane, space):
    seq = vacuum_sequence_2d(GaugeModel(plane, omega2=1.0, kappa=-1.0), m_max=8)
    with pytest.raises(DimensionError):
        vacuum_profile_xspace(seq, np.zeros(4))
    seq4 = vacuum_sequence_4d(GaugeModel(space, omega2=0.2, kappa=0.0), v1=1.0, m_max=6)
    value = profile_series_xspace(seq4, np.array([0.1, 0.2, -0.1, 0.3]), levels=4)
    assert value.shape == (4,)
