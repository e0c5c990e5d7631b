"""
Acceptance suite — the closed-form and property checks behind ``moyal-lab verify``.

Each check returns (passed, detail) and is run in isolation: an exception
marks that check as failed and the suite carries on.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from moyal_lab.config import get_lab_context
from moyal_lab.effective_action.assembly import assemble_gamma_check
from moyal_lab.effective_action.coefficients import divergent_coefficients
from moyal_lab.effective_action.tadpole import tadpole_numeric
from moyal_lab.errors import DomainError
from moyal_lab.gauge.limits import commutative_limit_check
from moyal_lab.gauge.model import GaugeModel, bidiagonal_field, gauge_eom_residual_2d
from moyal_lab.gauge.sequences import (
    Branch,
    as_fraction,
    closed_form_4d,
    recurrence_4d,
    recurrence_residual_2d,
    vacuum_sequence_2d,
)
from moyal_lab.graded.curvature import gauge_covariance_check, graded_curvature, random_potentials, random_unitary
from moyal_lab.graded.factors import CommutationFactor, cf_validate, clifford_factor_set, crossed_product
from moyal_lab.graded.groups import GradingGroup, Phase
from moyal_lab.graded.matrix_algebra import (
    PAULI,
    center_basis,
    classify_fine_derivations,
    eps_bracket,
    inner_generator,
    pauli_algebra,
    super_matrix_algebra,
)
from moyal_lab.graded.superalgebra import derivation_table_check, super_coordinates
from moyal_lab.models import AcceptanceOutcome
from moyal_lab.moyal.algebra import integral, interior_defect, special_field
from moyal_lab.moyal.basis import basis_values
from moyal_lab.moyal.params import Field, MoyalParams
from moyal_lab.moyal.quadrature import project_function
from moyal_lab.ribbon.generate import random_phi4_graph
from moyal_lab.ribbon.graph import parse_ribbon_graph
from moyal_lab.ribbon.topology import degrees, topology
from moyal_lab.scalar.duality import ls_duality_check
from moyal_lab.scalar.model import ScalarModel
from moyal_lab.scalar.propagator import mehler_kernel, propagator_resummation
from moyal_lab.scalar.vacuum import check_vacuum, scalar_vacuum, vacuum_action, vacuum_stability, zero_field_instabilities

logger = logging.getLogger(__name__)

BUBBLE = """
v1: a+ b- c+ d-
v2: e+ f- g+ h-
e: c f
e: d e
"""

NONPLANAR_TADPOLE = """
v: a+ b- c+ d-
e: a c
"""

Outcome = tuple[bool, str]


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------

def check_matrix_basis() -> Outcome:
    ctx = get_lab_context()
    params = MoyalParams(1.0, 2)
    n = 16
    product = Field.basis(0, 1, params, n) @ Field.basis(1, 2, params, n)
    exact_product = bool(np.array_equal(product.coeffs, Field.basis(0, 2, params, n).coeffs))
    unit_integral = abs(integral(Field.basis(0, 0, params, n)) - 2.0 * math.pi)

    rng = np.random.default_rng(ctx.seed)

    def draw() -> Field:
        return Field(params, n, rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))

    assoc = trace = 0.0
    for _ in range(100):
        f, g, h = draw(), draw(), draw()
        scale = n * f.norm() * g.norm() * h.norm()
        assoc = max(assoc, ((f @ g) @ h - f @ (g @ h)).norm() / scale)
        trace = max(trace, abs(integral(f @ g) - integral(g @ f)) / (n * f.norm() * g.norm()))
    tol = ctx.tolerances.exact
    passed = exact_product and unit_integral <= tol and assoc <= tol and trace <= tol
    return passed, (f"b01*b12=b02 exact: {exact_product}; |int b00 - 2pi|={unit_integral:.1e}; "
                    f"associativity {assoc:.1e}; tracial {trace:.1e}")


def check_quadrature_orthogonality() -> Outcome:
    params = MoyalParams(1.0, 2)
    top = 5
    worst = 0.0
    for k in range(top):
        for l in range(top):
            field, _ = project_function(lambda pts, k=k, l=l: basis_values(params, top, pts)[k, l], top, params)
            unit = np.zeros((top, top))
            unit[k, l] = 1.0
            worst = max(worst, float(np.abs(field.coeffs - unit).max()))
    return worst <= 1e-6, f"max |(2 pi theta)^-1 int b_mn b_kl - delta| = {worst:.2e}"


def check_scalar_vacuum() -> Outcome:
    tol = get_lab_context().tolerances.exact
    model = ScalarModel(MoyalParams(1.0, 2), omega=1.0, mu2=24.0, lam=1.0, broken_phase=True)
    v = scalar_vacuum(model)
    squares = [a * a for a in v.a]
    checks = check_vacuum(v, 16)
    action_error = abs(vacuum_action(v) + 70.0 * math.pi)
    stable = vacuum_stability(v, 16).all_positive
    unstable_zero = zero_field_instabilities(model, 16).unstable
    passed = (
        v.p == 2
        and np.allclose(squares, [5.0, 3.0, 1.0], rtol=0.0, atol=tol)
        and checks["eom_residual"] < tol
        and action_error <= 1e-8
        and checks["action_defect"] <= 1e-8
        and stable
        and unstable_zero
    )
    return passed, (f"p={v.p}; a^2={[round(s, 12) for s in squares]}; eom {checks['eom_residual']:.1e}; "
                    f"|S[v]+70pi|={action_error:.1e}; C^-1>0: {stable}; zero field unstable: {unstable_zero}")


# (omega2, kappa, alpha) per branch
GAUGE_2D_POINTS: dict[Branch, list[tuple[float, float, float]]] = {
    Branch.OMEGA0: [(0.0, 0.0, 0.5), (0.0, 0.0, 1.0), (0.0, 0.0, 2.0)],
    Branch.LOW_OMEGA: [(0.05, -1.0, 0.0), (0.15, -1.0, 0.0), (0.3, -0.5, 0.0)],
    Branch.ONE_THIRD: [(1.0 / 3.0, -0.5, 0.0), (1.0 / 3.0, -1.0, 0.0), (1.0 / 3.0, -2.0, 0.0)],
    Branch.MID_OMEGA: [(0.4, -1.0, 0.0), (0.6, -1.0, 0.0), (0.8, -0.5, 0.0)],
    Branch.OMEGA_ONE: [(1.0, -0.5, 0.0), (1.0, -1.0, 0.0), (1.0, -2.0, 0.0)],
}


def check_gauge_2d() -> Outcome:
    ctx = get_lab_context()
    tol = ctx.tolerances.exact
    params = MoyalParams(1.0, 2)
    trunc = 20
    worst_recurrence = worst_field = 0.0
    branches_ok = True
    for branch, points in GAUGE_2D_POINTS.items():
        for omega2, kappa, alpha in points:
            model = GaugeModel(params, omega2=omega2, kappa=kappa)
            seq = vacuum_sequence_2d(model, alpha=alpha, m_max=50)
            branches_ok &= seq.branch is branch
            u = np.asarray(seq.u)
            scale = max(1.0, float(np.abs(u).max()), abs(kappa))
            worst_recurrence = max(worst_recurrence, float(np.abs(recurrence_residual_2d(u, model)).max()) / scale)
            z = bidiagonal_field(u, trunc, params)
            residual = gauge_eom_residual_2d(z, model)
            field_scale = max(1.0, float(np.abs(u[:trunc]).max())) ** 1.5
            worst_field = max(worst_field, interior_defect(residual, Field.zeros(params, trunc), ctx.margin) / field_scale)
    passed = branches_ok and worst_recurrence < tol and worst_field < tol
    return passed, (f"branches classified: {branches_ok}; recurrence {worst_recurrence:.1e}; "
                    f"bidiagonal residual {worst_field:.1e}")


def check_gauge_4d() -> Outcome:
    worst = 0.0
    ratios_ok = True
    for omega2 in (0.05, 0.15, 0.25):
        w = as_fraction(omega2)
        closed = closed_form_4d(w, 1, 30)
        iterated = recurrence_4d(w, 0, 1, 30)
        for a, b in zip(closed, iterated):
            scale = max(abs(a), abs(b))
            if scale:
                worst = max(worst, float(abs(a - b) / scale))
        ratios_ok &= closed[2] / closed[1] == (1 + w) / (1 - 3 * w)
    return worst <= 1e-10 and ratios_ok, f"closed form vs recurrence {worst:.1e}; v2/v1 exact: {ratios_ok}"


def check_commutative_limit() -> Outcome:
    m_max = 10
    rows = commutative_limit_check([1e-2, 1e-3, 1e-4], theta=1.0, m_max=m_max)
    scaled = [r.scaled_defect for r in rows]
    # the leading correction is √2·m²·Ω, so the ratio settles near √2·m_max²
    bound = 2.0 * m_max**2
    passed = all(math.isfinite(s) for s in scaled) and max(scaled) <= bound and max(scaled) <= 1.5 * min(scaled)
    return passed, "max_m |u_m - m/theta| / Omega = " + ", ".join(f"{s:.4g}" for s in scaled)


def check_effective_action() -> Outcome:
    worst = 0.0
    for omega in ("0.2", "0.4", "0.6", "0.8", "1.0"):
        report = assemble_gamma_check(divergent_coefficients(Fraction(omega)))
        worst = max(worst, report.max_defect)
    fit = tadpole_numeric(0.5)
    passed = (worst <= get_lab_context().tolerances.exact and fit.relative_error_inv_eps <= 0.01
              and fit.relative_error_log_eps <= 0.01)
    return passed, (f"max sector defect {worst:.1e}; tadpole 1/eps relative error {fit.relative_error_inv_eps:.2e}, "
                    f"ln eps relative error {fit.relative_error_log_eps:.2e}")


def check_ribbon() -> Outcome:
    found = []
    for text, expected in ((BUBBLE, (2, 1, 0, 0, 0)), (NONPLANAR_TADPOLE, (2, 2, 0, 2, -2))):
        graph = parse_ribbon_graph(text)
        topo = topology(graph)
        deg = degrees(graph, 4)
        found.append(((topo.faces, topo.broken_faces, topo.genus, deg.d_c, deg.d_nc), expected))
    rng = np.random.default_rng(get_lab_context().seed)
    consistent = 0
    for _ in range(200):
        graph = random_phi4_graph(int(rng.integers(1, 7)), rng)
        topo = topology(graph)
        covered = sorted(h for cycle in topo.face_cycles for h in cycle) == sorted(graph.half_edges)
        euler = topo.vertices - topo.internal_lines + topo.faces == 2 - 2 * topo.genus
        bounded = topo.broken_faces <= topo.faces and (topo.broken_faces >= 1) == (topo.external_legs > 0)
        consistent += covered and euler and bounded
    passed = all(got == want for got, want in found) and consistent == 200
    return passed, f"bubble {found[0][0]}; non-planar tadpole {found[1][0]}; Euler-consistent {consistent}/200"


def check_graded() -> Outcome:
    details = []
    z2, z22 = GradingGroup((2,)), GradingGroup((2, 2))
    tables = [[[s]] for s in (1, -1)]
    tables += [[[a, b], [b, c]] for a in (1, -1) for b in (1, -1) for c in (1, -1)]
    valid = all(
        cf_validate(CommutationFactor.from_signs(z2 if len(t) == 1 else z22, t)).valid for t in tables
    )
    details.append(f"{len(tables)} generated factors valid: {valid}")

    cp = crossed_product(clifford_factor_set(2))
    g1, g2, e0 = (1, 0), (0, 1), (0, 0)
    s12, k12 = cp.product(g1, g2)
    s21, k21 = cp.product(g2, g1)
    clifford = (cp.product(g1, g1) == (Phase(), e0) and cp.product(g2, g2) == (Phase(), e0)
                and k12 == k21 and s12 / s21 == Phase.sign(-1))
    details.append(f"Clifford relations: {clifford}")

    elementary = all(
        len(c) == 1 and c[0][0] == (0,) and np.allclose(c[0][1], np.eye(alg.size))
        for alg in (super_matrix_algebra(1, 1), super_matrix_algebra(2, 1))
        for c in [center_basis(alg)]
    )
    details.append(f"elementary center = C1: {elementary}")

    full = len(center_basis(pauli_algebra())) == 4
    swapped = pauli_algebra(CommutationFactor.from_signs(z22, [[-1, 1], [1, -1]]))
    center_degrees = sorted(d for d, _ in center_basis(swapped))
    ders = classify_fine_derivations(swapped)
    inner = sorted(tuple(c.degree) for c in ders if c.dimension > 0)
    pauli = full and center_degrees == [(0, 0), (1, 1)] and inner == [(0, 1), (1, 0)] and all(
        c.kind == "inner" for c in ders if c.dimension > 0
    )
    details.append(f"Pauli centers and derivations: {pauli}")

    alg = super_matrix_algebra(1, 1)
    e12 = np.array([[0, 1], [0, 0]], dtype=complex)
    generator = inner_generator(lambda b: eps_bracket(e12, b, alg), alg)
    recovered = np.allclose(generator - e12, (generator - e12)[0, 0] * np.eye(2))
    plain = pauli_algebra()
    try:
        inner_generator(lambda b: PAULI[(1, 0)] @ b - b @ PAULI[(1, 0)], plain)
        rejected = False
    except DomainError as exc:
        rejected = "basis pair" in str(exc)
    details.append(f"inner generator recovered: {recovered}, plain commutator rejected: {rejected}")
    return valid and clifford and elementary and pauli and recovered and rejected, "; ".join(details)


def check_superalgebra() -> Outcome:
    worst_table = worst_curvature = worst_covariance = 0.0
    for alpha in (0.5, 1.0):
        worst_table = max(worst_table, derivation_table_check(12, 1.0, alpha).max_defect)
        coords = super_coordinates(12, 1.0, alpha)
        pots = random_potentials(coords, block=4)
        worst_curvature = max(worst_curvature, graded_curvature(pots).report.max_defect)
        g = random_unitary(coords, block=4, scale=0.5)
        worst_covariance = max(worst_covariance, gauge_covariance_check(pots, g).max_defect)
    passed = max(worst_table, worst_curvature, worst_covariance) <= 1e-8
    return passed, (f"derivation table {worst_table:.1e}; curvature {worst_curvature:.1e}; "
                    f"gauge covariance {worst_covariance:.1e}")


def check_mehler() -> Outcome:
    ctx = get_lab_context()
    model = ScalarModel(MoyalParams(1.0, 2), omega=1.0, mu2=1.0, lam=1.0)
    worst = 0.0
    for k in range(10):
        t = 0.6 * k
        x = np.array([0.5 * math.cos(t), 0.5 * math.sin(t)])
        y = np.array([-0.9 * math.sin(t), 0.8 * math.cos(t) + 0.3])
        resummed = propagator_resummation(x, y, model)
        kernel = mehler_kernel(x, y, model, alpha_min=ctx.resummation_alpha_min)
        worst = max(worst, abs(resummed - kernel) / max(1.0, abs(kernel)))
    return worst <= ctx.tolerances.resummation, f"max |resummation - Mehler| = {worst:.2e} over 10 point pairs"


def check_ls_duality() -> Outcome:
    params = MoyalParams(1.0, 2)
    f = special_field("gaussian", 8, params)
    defects = [ls_duality_check(f, ScalarModel(params, omega=omega, mu2=1.0, lam=1.0)).defect for omega in (0.5, 1.0)]
    return max(defects) < get_lab_context().tolerances.duality, "defects " + ", ".join(f"{d:.2e}" for d in defects)


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AcceptanceCheck:
    number: int
    key: str
    title: str
    budget: float
    run: Callable[[], Outcome]


CHECKS: list[AcceptanceCheck] = [
    AcceptanceCheck(1, "matrix-basis", "Matrix-basis algebra", 1.0, check_matrix_basis),
    AcceptanceCheck(2, "orthogonality", "Quadrature orthogonality", 10.0, check_quadrature_orthogonality),
    AcceptanceCheck(3, "scalar-vacuum", "Scalar vacuum", 1.0, check_scalar_vacuum),
    AcceptanceCheck(4, "gauge-2d", "Gauge 2D branches", 1.0, check_gauge_2d),
    AcceptanceCheck(5, "gauge-4d", "Gauge 4D closed form", 1.0, check_gauge_4d),
    AcceptanceCheck(6, "commutative-limit", "Commutative limit", 1.0, check_commutative_limit),
    AcceptanceCheck(7, "effective-action", "Effective-action assembly", 30.0, check_effective_action),
    AcceptanceCheck(8, "ribbon", "Ribbon topology", 1.0, check_ribbon),
    AcceptanceCheck(9, "eps-graded", "Graded algebras", 5.0, check_graded),
    AcceptanceCheck(10, "superalgebra", "Superalgebra curvature", 30.0, check_superalgebra),
    AcceptanceCheck(11, "mehler", "Mehler oracle", 60.0, check_mehler),
    AcceptanceCheck(12, "ls-duality", "LS duality", 60.0, check_ls_duality),
]


def select_checks(only: str | None) -> list[AcceptanceCheck]:
    """All checks, or those named in a comma list of numbers or keys."""
    if not only:
        return list(CHECKS)
    wanted = [w.strip() for w in only.split(",") if w.strip()]
    by_name = {c.key: c for c in CHECKS} | {str(c.number): c for c in CHECKS}
    unknown = [w for w in wanted if w not in by_name]
    if unknown:
        raise ValueError(f"Unknown check: {unknown}. Available: {[c.key for c in CHECKS]}")
    return [c for c in CHECKS if c in {by_name[w] for w in wanted}]


def run_check(check: AcceptanceCheck) -> AcceptanceOutcome:
    start = time.perf_counter()
    try:
        passed, detail = check.run()
    except Exception as e:
        logger.error("check %d (%s) raised %s: %s", check.number, check.key, type(e).__name__, e)
        passed, detail = False, f"{type(e).__name__}: {e}"
    seconds = time.perf_counter() - start
    if seconds > check.budget:
        logger.warning("check %d (%s) took %.1fs, budget %.0fs", check.number, check.key, seconds, check.budget)
    return AcceptanceOutcome(number=check.number, key=check.key, title=check.title, passed=bool(passed),
                             detail=detail, seconds=seconds, budget=check.budget)
