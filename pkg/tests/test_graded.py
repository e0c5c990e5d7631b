"""Tests for grading groups, commutation factors, graded matrix algebras and the superalgebra."""

from fractions import Fraction

import numpy as np
import pytest

from moyal_lab.errors import DimensionError, DomainError, UnsupportedConfigurationError
from moyal_lab.graded.curvature import (
    curvature_action_check,
    gauge_covariance_check,
    graded_curvature,
    random_potentials,
    random_unitary,
)
from moyal_lab.graded.factors import (
    CommutationFactor,
    cf_validate,
    clifford_factor_set,
    crossed_product,
    factor_set_from_eps,
    factor_set_violations,
    multiplier_bridge,
    real_clifford_factor_set,
    super_factor,
    trivial_factor,
)
from moyal_lab.graded.groups import GradingGroup, Phase, parse_group
from moyal_lab.graded.matrix_algebra import (
    PAULI,
    center_basis,
    classify_fine_derivations,
    eps_bracket,
    eps_trace,
    inner_generator,
    pauli_algebra,
    super_matrix_algebra,
)
from moyal_lab.graded.superalgebra import (
    derivation_table_check,
    scalar_superaction_check,
    super_coordinates,
    superalgebra_parameters,
)
from moyal_lab.moyal.params import Field, MoyalParams

Z22 = GradingGroup((2, 2))


# ---------------------------------------------------------------------------
# Groups and phases
# ---------------------------------------------------------------------------

def test_phase_arithmetic():
    i = Phase(Fraction(1, 4))
    assert (i * i) == Phase.sign(-1)
    assert (i ** 4).is_one
    assert (i / i).is_one
    assert i.label() == "i"
    assert Phase.parse("-i") == i.inverse()
    assert Phase.parse(-1) == Phase.sign(-1)
    assert Phase.parse({"turn": "1/3"}).order == 3


def test_phase_rejects_non_roots():
    with pytest.raises(DomainError):
        Phase.sign(2)
    with pytest.raises(DomainError):
        Phase.parse(0.5)
    with pytest.raises(DomainError):
        Phase.parse("banana")


@pytest.mark.parametrize("text,orders", [("Z2xZ2", (2, 2)), ("Z3", (3,)), ("ZxZ2", (0, 2)), ("Z2×Z2", (2, 2))])
def test_parse_group(text, orders):
    assert parse_group(text).orders == orders


def test_parse_group_rejects_bad_factor():
    with pytest.raises(DomainError):
        parse_group("Q8")


def test_group_operations():
    g = parse_group("ZxZ2")
    assert g.label() == "ZxZ2"
    assert not g.is_finite
    assert g.add((3, 1), (-1, 1)) == (2, 0)
    with pytest.raises(UnsupportedConfigurationError):
        g.size
    with pytest.raises(DimensionError):
        g.reduce((1,))
    assert Z22.size == 4
    assert len(Z22.elements()) == 4


# ---------------------------------------------------------------------------
# Commutation factors and factor sets
# ---------------------------------------------------------------------------

def test_super_factor_is_valid_and_improper():
    report = cf_validate(super_factor())
    assert report.valid
    assert not report.proper
    assert report.exhaustive
    assert report.even == [[0]]
    assert report.odd == [[1]]


def test_trivial_factor_is_proper():
    report = cf_validate(trivial_factor(Z22))
    assert report.valid and report.proper
    assert len(report.even) == 4


@pytest.mark.parametrize("group,table", [
    (GradingGroup((3,)), [[-1]]),
    (Z22, [[1, -1], [1, 1]]),
])
def test_invalid_factors_are_reported(group, table):
    report = cf_validate(CommutationFactor.from_signs(group, table))
    assert not report.valid
    assert report.violations


def test_infinite_group_is_sampled():
    cf = CommutationFactor.from_signs(parse_group("ZxZ2"), [[1, -1], [-1, 1]])
    report = cf_validate(cf, samples=50, seed=3)
    assert report.valid
    assert not report.exhaustive
    assert report.sampled == 50


def test_generator_table_shape_checked():
    with pytest.raises(DimensionError):
        CommutationFactor.from_signs(Z22, [[1]])


def test_clifford_crossed_product():
    cp = crossed_product(clifford_factor_set(2))
    g1, g2, e0 = (1, 0), (0, 1), (0, 0)
    s12, k12 = cp.product(g1, g2)
    s21, k21 = cp.product(g2, g1)
    assert cp.product(g1, g1) == (Phase(), e0)
    assert k12 == k21 == (1, 1)
    assert s12 / s21 == Phase.sign(-1)
    assert not cp.is_commutative


def test_real_clifford_factor_sets():
    assert factor_set_violations(real_clifford_factor_set(1, 1)) == []
    with pytest.raises(DomainError):
        real_clifford_factor_set(0, 0)
    with pytest.raises(DomainError):
        real_clifford_factor_set(-1, 2)


def test_multiplier_bridge_round_trip():
    eps = CommutationFactor.from_signs(Z22, [[1, -1], [-1, 1]])
    back = multiplier_bridge(multiplier_bridge(eps))
    assert back.gen_table == eps.gen_table
    assert multiplier_bridge(clifford_factor_set(2)).gen_table == eps.gen_table


def test_improper_factor_has_no_factor_set():
    with pytest.raises(DomainError):
        factor_set_from_eps(super_factor())


# ---------------------------------------------------------------------------
# Graded matrix algebras
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("m,n", [(1, 1), (2, 1)])
def test_super_matrix_center_is_scalars(m, n):
    algebra = super_matrix_algebra(m, n)
    center = center_basis(algebra)
    assert len(center) == 1
    degree, matrix = center[0]
    assert degree == (0,)
    assert np.allclose(matrix, np.eye(m + n))


@pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (3, 1)])
def test_super_trace_of_unit(m, n):
    algebra = super_matrix_algebra(m, n)
    assert eps_trace(np.eye(m + n), algebra) == pytest.approx(m - n)


def test_super_matrix_algebra_bounds():
    with pytest.raises(DomainError):
        super_matrix_algebra(0, 1)


def test_pauli_algebra_is_eps_commutative():
    algebra = pauli_algebra()
    assert len(center_basis(algebra)) == 4
    assert all(c.dimension == 0 for c in classify_fine_derivations(algebra))


def test_pauli_algebra_with_swapped_factor():
    algebra = pauli_algebra(CommutationFactor.from_signs(Z22, [[-1, 1], [1, -1]]))
    assert sorted(d for d, _ in center_basis(algebra)) == [(0, 0), (1, 1)]
    classes = classify_fine_derivations(algebra)
    live = [c for c in classes if c.dimension > 0]
    assert sorted(tuple(c.degree) for c in live) == [(0, 1), (1, 0)]
    assert all(c.kind == "inner" for c in live)
    assert all(c.numeric_dimension == c.dimension for c in classes)



def _is_central(m):
    return np.allclose(m, m[0, 0] * np.eye(m.shape[0]))


def test_inner_generator_recovers_odd_matrix_unit():
    algebra = super_matrix_algebra(1, 1)
    e12 = np.array([[0, 1], [0, 0]], dtype=complex)
    generator = inner_generator(lambda b: eps_bracket(e12, b, algebra), algebra)
    assert _is_central(generator - e12)


def test_inner_generator_of_zero_is_central():
    algebra = super_matrix_algebra(2, 1)
    generator = inner_generator(lambda b: np.zeros_like(b), algebra)
    assert _is_central(generator)


def test_inner_generator_lstsq_path_on_swapped_pauli():
    eps = CommutationFactor.from_signs(Z22, [[-1, 1], [1, -1]])
    algebra = pauli_algebra(eps)
    tau1 = PAULI[(1, 0)]
    generator = inner_generator(lambda b: eps_bracket(tau1, b, algebra), algebra)
    assert np.allclose(generator, tau1)


def test_inner_generator_names_failing_pair():
    algebra = pauli_algebra()
    tau1 = PAULI[(1, 0)]
    with pytest.raises(DomainError, match="basis pair"):
        inner_generator(lambda b: tau1 @ b - b @ tau1, algebra)


# ---------------------------------------------------------------------------
# Superalgebra on the Moyal plane
# ---------------------------------------------------------------------------

def test_superalgebra_parameters():
    omega2, mu2, kappa = superalgebra_parameters(1.0, 1.0)
    assert omega2 == pytest.approx(1 / 3)
    assert mu2 == pytest.approx(4 / 3)
    assert kappa == pytest.approx(104 / 3)


def test_superalgebra_parameters_reject_half():
    with pytest.raises(DomainError):
        superalgebra_parameters(-0.5, 1.0)


def test_super_coordinates_need_room():
    with pytest.raises(DomainError):
        super_coordinates(4, 1.0, 1.0)


@pytest.mark.parametrize("alpha", [0.5, 1.0])
def test_derivation_table(alpha):
    report = derivation_table_check(12, 1.0, alpha)
    assert report.max_defect <= 1e-8
    assert report.passed


def test_curvature_closed_form_and_covariance():
    coords = super_coordinates(12, 1.0, 0.5)
    pots = random_potentials(coords, block=4, seed=7)
    assert graded_curvature(pots).report.max_defect <= 1e-8
    g = random_unitary(coords, block=4, scale=0.5, seed=8)
    report = gauge_covariance_check(pots, g)
    assert report.max_defect <= 1e-8
    assert report.unitarity <= 1e-10


def test_random_potentials_block_checked():
    coords = super_coordinates(8, 1.0, 1.0)
    with pytest.raises(DomainError):
        random_potentials(coords, block=0)


def test_scalar_superaction(rng):
    params = MoyalParams(1.0, 2)
    coeffs = np.zeros((16, 16), dtype=complex)
    r = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    coeffs[:4, :4] = 0.5 * (r + r.conj().T)
    report = scalar_superaction_check(Field(params, 16, coeffs), alpha=1.0, margin=4)
    assert report.omega2 == pytest.approx(1 / 3)
    assert report.defect <= 1e-8


def test_scalar_superaction_needs_room():
    params = MoyalParams(1.0, 2)
    coeffs = np.zeros((8, 8), dtype=complex)
    coeffs[7, 7] = 1.0
    with pytest.raises(DomainError):
        scalar_superaction_check(Field(params, 8, coeffs), alpha=1.0, margin=2)


def test_curvature_action_parameters():
    params = MoyalParams(1.0, 2)
    a = tuple(Field.basis(0, 0, params, 16) * 0.1 for _ in range(2))
    report = curvature_action_check(a, alpha=1.0, margin=2)
    omega2, _, kappa = superalgebra_parameters(1.0, 1.0)
    assert report.omega2 == pytest.approx(omega2)
    assert report.kappa == pytest.approx(kappa)


def test_curvature_action_support_checked():
    params = MoyalParams(1.0, 2)
    a = (Field.basis(12, 12, params, 16), Field.zeros(params, 16))
    with pytest.raises(DomainError):
        curvature_action_check(a, alpha=1.0, margin=2)
