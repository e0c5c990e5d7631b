import math

import numpy as np
import pytest

from moyal_lab.errors import DomainError, UnsupportedConfigurationError
from moyal_lab.moyal.algebra import special_field
from moyal_lab.moyal.params import Field, MoyalParams
from moyal_lab.scalar.duality import duality_parameters, grid_action, ls_duality_check
from moyal_lab.scalar.model import ScalarModel, apply_kinetic, gw_action, kinetic_matrix
from moyal_lab.scalar.propagator import (
    kinetic_identity_check,
    mehler_kernel,
    propagator_entry,
    propagator_matrix,
    propagator_resummation,
)
from moyal_lab.scalar.vacuum import (
    check_vacuum,
    floor_index,
    scalar_vacuum,
    sigma_quadratic_spectrum,
    vacuum_action,
    vacuum_field,
    vacuum_stability,
    zero_field_instabilities,
)


@pytest.fixture
def broken(plane) -> ScalarModel:
    return ScalarModel(plane, omega=1.0, mu2=24.0, lam=1.0, broken_phase=True)


# -- model ------------------------------------------------------------------

def test_model_rejects_bad_coupling(plane):
    with pytest.raises(DomainError):
        ScalarModel(plane, omega=1.0, mu2=1.0, lam=0.0)
    with pytest.raises(DomainError):
        ScalarModel(plane, omega=-1.0, mu2=1.0, lam=1.0)


def test_kinetic_matrix_is_symmetric_and_matches_operator(plane, rng):
    model = ScalarModel(plane, omega=0.4, mu2=0.7, lam=1.0)
    trunc = 4
    k = kinetic_matrix(model, trunc)
    np.testing.assert_allclose(k, k.T, atol=1e-14)
    phi = rng.normal(size=(trunc, trunc))
    image = apply_kinetic(Field(plane, trunc, phi), model).coeffs.real
    np.testing.assert_allclose((k @ phi.reshape(-1)).reshape(trunc, trunc), image.T, atol=1e-12)


def test_action_needs_hermitian_field(plane):
    model = ScalarModel(plane, omega=1.0, mu2=1.0, lam=1.0)
    with pytest.raises(DomainError):
        gw_action(Field.basis(0, 1, plane, 3), model)


def test_action_of_ground_state(plane):
    model = ScalarModel(plane, omega=1.0, mu2=2.0, lam=0.5)
    f = Field.basis(0, 0, plane, 3)
    # ½·2π·(μ² + 4/θ) + λ·2π
    assert gw_action(f, model) == pytest.approx(math.pi * (2.0 + 4.0) + 0.5 * 2 * math.pi, rel=1e-13)


# -- vacuum -----------------------------------------------------------------

def test_broken_phase_vacuum_amplitudes(broken):
    v = scalar_vacuum(broken)
    assert v.p == 2
    np.testing.assert_allclose([a * a for a in v.a], [5.0, 3.0, 1.0], atol=1e-12)
    assert vacuum_action(v) == pytest.approx(-70 * math.pi, abs=1e-9)
    checks = check_vacuum(v, 12)
    assert checks["eom_residual"] < 1e-12
    assert checks["action_defect"] < 1e-8


def test_vacuum_with_flipped_signs_still_solves(broken):
    v = scalar_vacuum(broken, signs=(1, -1, 1))
    assert v.a[1] < 0
    assert check_vacuum(v, 10)["eom_residual"] < 1e-12
    with pytest.raises(DomainError):
        scalar_vacuum(broken, signs=(1, 1))


def test_small_mass_leaves_zero_vacuum(plane):
    model = ScalarModel(plane, omega=1.0, mu2=2.0, lam=1.0, broken_phase=True)
    assert floor_index(model) == -1
    v = scalar_vacuum(model)
    assert v.a == ()
    assert vacuum_field(v, 4).norm() == 0.0
    assert not zero_field_instabilities(model, 6).unstable


def test_four_dimensional_vacuum_counts_multiplicity():
    model = ScalarModel(MoyalParams(1.0, dim=4), omega=1.0, mu2=24.0, lam=1.0, broken_phase=True)
    v = scalar_vacuum(model)
    assert v.p == 2
    np.testing.assert_allclose([a * a for a in v.a], [4.0, 2.0, 0.0], atol=1e-12)
    assert vacuum_action(v) == pytest.approx(-(2 * math.pi) ** 2 * (16 + 2 * 4), rel=1e-12)
    assert check_vacuum(v, 5)["eom_residual"] < 1e-12


def test_vacuum_needs_self_dual_point(plane):
    model = ScalarModel(plane, omega=0.5, mu2=24.0, lam=1.0, broken_phase=True)
    with pytest.raises(UnsupportedConfigurationError):
        scalar_vacuum(model)


def test_vacuum_is_stable_and_zero_field_is_not(broken):
    v = scalar_vacuum(broken)
    report = vacuum_stability(v, 10)
    assert report.all_positive
    assert not report.heuristic
    assert report.action == pytest.approx(vacuum_action(v))
    assert zero_field_instabilities(broken, 10).unstable


def test_four_dimensional_stability_is_heuristic(caplog):
    model = ScalarModel(MoyalParams(1.0, dim=4), omega=1.0, mu2=24.0, lam=1.0, broken_phase=True)
    report = vacuum_stability(scalar_vacuum(model), 4)
    assert report.heuristic
    assert "heuristic" in caplog.text


def test_sigma_spectrum_masks_occupied_levels(broken):
    v = scalar_vacuum(broken)
    spectrum = sigma_quadratic_spectrum(v, 5)
    assert spectrum.masked == [[0], [1], [2]]
    assert len(spectrum.entries) == 2 * 5
    first = spectrum.entries[0]
    assert (first.m, first.n) == ([3], [0])
    assert first.value == pytest.approx(2.0 * (3 + 0 + 1 - 6))


# -- propagator -------------------------------------------------------------

def test_closed_form_matches_alpha_integral(plane):
    model = ScalarModel(plane, omega=1.0, mu2=1.0, lam=1.0)
    for m, n in ((0, 0), (1, 2), (3, 1)):
        closed = propagator_entry(m, n, n, m, model, method="closed")
        assert closed == pytest.approx(0.25 / (m + n + 0.25 + 1))
        assert propagator_entry(m, n, n, m, model, method="quadrature") == pytest.approx(closed, rel=1e-8)


def test_propagator_conserves_index(plane):
    model = ScalarModel(plane, omega=0.5, mu2=1.0, lam=1.0)
    assert propagator_entry(1, 0, 0, 0, model) == 0.0
    with pytest.raises(UnsupportedConfigurationError):
        propagator_entry(0, 0, 0, 0, model, method="closed")
    with pytest.raises(DomainError):
        propagator_matrix(0, 4, 4, 0, model, trunc=4)


def test_propagator_inverts_kinetic_operator(plane):
    assert kinetic_identity_check(ScalarModel(plane, omega=1.0, mu2=1.0, lam=1.0)) < 1e-12
    assert kinetic_identity_check(ScalarModel(plane, omega=0.5, mu2=1.0, lam=1.0)) < 1e-6


def test_resummation_matches_mehler_kernel(plane):
    model = ScalarModel(plane, omega=1.0, mu2=1.0, lam=1.0)
    x, y = np.array([0.3, -0.2]), np.array([-0.5, 0.4])
    kernel = mehler_kernel(x, y, model, alpha_min=0.2)
    assert propagator_resummation(x, y, model, alpha_min=0.2) == pytest.approx(kernel, abs=1e-4 * max(1.0, abs(kernel)))


def test_mehler_kernel_needs_cutoff_at_coincident_points(plane):
    model = ScalarModel(plane, omega=1.0, mu2=1.0, lam=1.0)
    with pytest.raises(DomainError):
        mehler_kernel(np.zeros(2), np.zeros(2), model)
    with pytest.raises(UnsupportedConfigurationError):
        propagator_resummation(np.zeros(2), np.ones(2), ScalarModel(plane, omega=0.5, mu2=1.0, lam=1.0))


# -- duality ----------------------------------------------------------------

def test_duality_parameters(plane):
    dual = duality_parameters(ScalarModel(plane, omega=0.5, mu2=1.0, lam=1.0))
    assert (dual.omega, dual.mu2, dual.lam) == pytest.approx((2.0, 4.0, 4.0))
    with pytest.raises(DomainError):
        duality_parameters(ScalarModel(plane, omega=0.0, mu2=1.0, lam=1.0))


@pytest.mark.parametrize("omega", [0.5, 1.0])
def test_gaussian_satisfies_duality(plane, omega):
    model = ScalarModel(plane, omega=omega, mu2=1.0, lam=1.0)
    report = ls_duality_check(special_field("gaussian", 8, plane), model)
    assert report.defect < 1e-3
    assert report.dual_omega == pytest.approx(1.0 / omega)


def test_grid_action_agrees_with_matrix_action(plane):
    model = ScalarModel(plane, omega=0.5, mu2=1.0, lam=1.0)
    f = special_field("gaussian", 8, plane) + 0.3 * Field.basis(1, 1, plane, 8)
    assert grid_action(f, model) == pytest.approx(gw_action(f, model), rel=1e-3)
