import numpy as np
import pytest

from moyal_lab.config import LabContext, context_from_mapping, load_defaults
from moyal_lab.errors import AccuracyError, DimensionError, DomainError
from moyal_lab.moyal.algebra import (
    adjoint,
    anticommutator,
    approximate_unit,
    commutator,
    coordinate_field,
    eval_field,
    integral,
    interior_defect,
    special_field,
    star,
    support_below,
)
from moyal_lab.moyal.basis import basis_eval, basis_values
from moyal_lab.moyal.fourier import grid_inner_product, nyquist_ratio, symplectic_fourier
from moyal_lab.moyal.io import read_field_json, read_grid_csv, write_field_json, write_grid_csv
from moyal_lab.moyal.params import Field, MoyalParams
from moyal_lab.moyal.quadrature import (
    coeffs_from_function,
    coeffs_from_grid,
    grid_from_field,
    grid_from_function,
    project_function,
)


def _random_field(params, trunc, rng):
    size = trunc ** params.pairs
    return Field(params, trunc, rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size)))


def _gaussian(theta):
    return lambda pts: np.exp(-np.sum(pts**2, axis=1) / theta)


# -- parameters and fields --------------------------------------------------

def test_params_reject_odd_dimension():
    with pytest.raises(DomainError):
        MoyalParams(1.0, dim=3)
    with pytest.raises(DomainError):
        MoyalParams(0.0)


def test_theta_inverse_block():
    inv = MoyalParams(2.0).theta_inverse()
    np.testing.assert_allclose(inv, np.array([[0.0, -1.0], [1.0, 0.0]]) / 2.0)


def test_field_shape_is_checked(plane):
    with pytest.raises(DimensionError):
        Field(plane, 3, np.zeros((4, 4)))
    with pytest.raises(DimensionError):
        Field.basis(0, 3, plane, 3)


def test_mismatched_truncations_do_not_combine(plane):
    with pytest.raises(DimensionError):
        Field.zeros(plane, 3) + Field.zeros(plane, 4)


# -- star product -----------------------------------------------------------

def test_matrix_units_multiply_exactly(plane):
    b01 = Field.basis(0, 1, plane, 4)
    b12 = Field.basis(1, 2, plane, 4)
    b02 = Field.basis(0, 2, plane, 4)
    assert np.array_equal(star(b01, b12).coeffs, b02.coeffs)
    assert star(b12, b01).norm() == 0.0


def test_integral_of_ground_state():
    for theta in (0.5, 1.0, 3.0):
        params = MoyalParams(theta)
        assert integral(Field.basis(0, 0, params, 2)) == pytest.approx(2 * np.pi * theta, abs=1e-12)
    four = MoyalParams(1.0, dim=4)
    assert integral(Field.basis((0, 0), (0, 0), four, 2)) == pytest.approx((2 * np.pi) ** 2, abs=1e-10)


def test_star_is_associative_and_tracial(plane, rng):
    f, g, h = (_random_field(plane, 8, rng) for _ in range(3))
    lhs = star(star(f, g), h)
    rhs = star(f, star(g, h))
    assert (lhs - rhs).norm() <= 1e-12 * max(1.0, lhs.norm())
    assert abs(integral(star(f, g)) - integral(star(g, f))) <= 1e-10 * max(1.0, abs(integral(star(f, g))))


def test_adjoint_reverses_products(plane, rng):
    f, g = _random_field(plane, 5, rng), _random_field(plane, 5, rng)
    assert (adjoint(star(f, g)) - star(adjoint(g), adjoint(f))).norm() < 1e-12
    assert (anticommutator(f, g) - commutator(f, g) - 2 * star(g, f)).norm() < 1e-12


def test_coordinates_satisfy_canonical_relation():
    params = MoyalParams(2.0)
    trunc = 10
    x1 = coordinate_field("x", trunc, params, 1)
    x2 = coordinate_field("x", trunc, params, 2)
    unit = special_field("unit", trunc, params)
    assert interior_defect(commutator(x1, x2), 1j * params.theta * unit, 1) < 1e-12
    xsq = coordinate_field("x_squared", trunc, params)
    assert interior_defect(star(x1, x1) + star(x2, x2), xsq, 1) < 1e-12


def test_coordinate_index_is_validated(plane):
    with pytest.raises(DomainError):
        coordinate_field("x", 4, plane, 3)
    with pytest.raises(DomainError):
        coordinate_field("y", 4, plane, 1)


def test_x_tilde_generates_derivatives(plane):
    trunc = 8
    x1 = coordinate_field("x", trunc, plane, 1)
    x2 = coordinate_field("x", trunc, plane, 2)
    xt1 = coordinate_field("x_tilde", trunc, plane, 1)
    # x̃₁ = −2x₂/θ
    unit = special_field("unit", trunc, plane)
    assert interior_defect(commutator(xt1, x1), 2j * unit, 1) < 1e-12
    assert interior_defect(commutator(xt1, x2), Field.zeros(plane, trunc), 1) < 1e-12


def test_delta_evaluates_at_origin(plane, rng):
    f = _random_field(plane, 6, rng)
    delta = special_field("delta", 6, plane)
    assert integral(star(delta, f)) == pytest.approx(eval_field(f, np.zeros(2)), abs=1e-10)


def test_gaussian_field_samples_gaussian():
    params = MoyalParams(1.5)
    g = special_field("gaussian", 3, params)
    pts = np.array([[0.0, 0.0], [0.4, -1.1], [2.0, 0.3]])
    np.testing.assert_allclose(eval_field(g, pts), np.exp(-np.sum(pts**2, axis=1) / 1.5), atol=1e-14)


def test_approximate_unit_acts_on_low_block(plane):
    e2 = approximate_unit(2, 5, plane)
    b12 = Field.basis(1, 2, plane, 5)
    assert np.array_equal(star(e2, b12).coeffs, b12.coeffs)
    b34 = Field.basis(3, 4, plane, 5)
    assert star(e2, b34).norm() == 0.0
    assert support_below(b12, 3)
    assert not support_below(b34, 3)


def test_basis_values_match_single_evaluation(plane):
    pts = np.array([[0.3, -0.2], [1.0, 0.7]])
    table = basis_values(plane, 4, pts)
    assert table.shape == (4, 4, 2)
    assert table[1, 3, 1] == pytest.approx(basis_eval(1, 3, pts[1], plane), abs=1e-13)
    assert table[0, 0, 0] == pytest.approx(2 * np.exp(-np.sum(pts[0] ** 2)), abs=1e-14)


# -- analysis and synthesis -------------------------------------------------

def test_gaussian_projects_onto_ground_state(plane):
    f = coeffs_from_function(_gaussian(1.0), 6, plane)
    expected = np.zeros((6, 6))
    expected[0, 0] = 0.5
    np.testing.assert_allclose(f.coeffs, expected, atol=1e-10)


def test_projection_needs_enough_nodes(plane):
    with pytest.raises(DomainError):
        project_function(_gaussian(1.0), 20, plane, nodes=30)


def test_unresolved_function_raises_accuracy_error(plane):
    wide = lambda pts: np.exp(-np.sum(pts**2, axis=1) / 400.0)  # noqa: E731
    with pytest.raises(AccuracyError):
        coeffs_from_function(wide, 4, plane, nodes=12, tolerance=1e-12)


def test_grid_synthesis_and_analysis_agree(plane):
    f = Field.basis(0, 1, plane, 6) + 0.5 * Field.basis(2, 2, plane, 6)
    g = grid_from_field(f)
    back = coeffs_from_grid(g, 6)
    assert (back - f).norm() < 1e-8


def test_grid_must_contain_support(plane):
    g = grid_from_function(_gaussian(1.0), plane, extent=1.0, resolution=32)
    with pytest.raises(AccuracyError):
        coeffs_from_grid(g, 4)


def test_grid_sampling_is_two_dimensional_only():
    with pytest.raises(DomainError):
        grid_from_field(Field.zeros(MoyalParams(1.0, dim=4), 2))


# -- symplectic Fourier -----------------------------------------------------

def test_gaussian_is_self_dual(plane):
    g = grid_from_function(_gaussian(1.0), plane, extent=7.0, resolution=128)
    assert nyquist_ratio(g) < 1.0
    for sign in (1, -1):
        fg = symplectic_fourier(g, sign)
        np.testing.assert_allclose(fg.samples, g.samples, atol=1e-8)


def test_fourier_is_involutive_and_unitary(plane):
    shifted = lambda pts: (pts[:, 0] + 0.5j * pts[:, 1]) * np.exp(-np.sum((pts - 0.3) ** 2, axis=1))  # noqa: E731
    g = grid_from_function(shifted, plane, extent=7.0, resolution=128)
    fg = symplectic_fourier(g)
    np.testing.assert_allclose(symplectic_fourier(fg).samples, g.samples, atol=1e-8)
    assert grid_inner_product(fg, fg) == pytest.approx(grid_inner_product(g, g), rel=1e-8)


def test_fourier_rejects_coarse_grid(plane):
    g = grid_from_function(_gaussian(1.0), plane, extent=7.0, resolution=16)
    with pytest.raises(AccuracyError):
        symplectic_fourier(g)
    with pytest.raises(DomainError):
        symplectic_fourier(g, sign=2)


# -- files ------------------------------------------------------------------

def test_field_json_file(tmp_path, rng):
    f = _random_field(MoyalParams(0.5, dim=4), 2, rng)
    back = read_field_json(write_field_json(f, tmp_path / "f.json"))
    assert back.params == f.params
    assert np.array_equal(back.coeffs, f.coeffs)


def test_grid_csv_file(tmp_path, plane):
    g = grid_from_function(_gaussian(1.0), plane, extent=3.0, resolution=9)
    path = write_grid_csv(g, tmp_path / "g.csv")
    assert path.read_text().splitlines()[0] == "x1,x2,re,im"
    back = read_grid_csv(path, plane)
    assert back.extent == pytest.approx(3.0)
    assert np.array_equal(back.samples, g.samples)


def test_grid_csv_header_is_checked(tmp_path, plane):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c,d\n0,0,1,0\n")
    with pytest.raises(DomainError):
        read_grid_csv(path, plane)


# -- numerical context ------------------------------------------------------

def test_packaged_defaults_build_a_context():
    ctx = context_from_mapping(load_defaults())
    assert isinstance(ctx, LabContext)
    assert ctx.margin >= 1
    assert len(ctx.tadpole_eps) >= 5


def test_missing_defaults_fall_back(tmp_path):
    assert load_defaults([tmp_path / "missing.yaml"]) == {}
    assert context_from_mapping({}, seed=7) == LabContext(seed=7)
