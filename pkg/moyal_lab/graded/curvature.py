"""
Gauge potentials on the Moyal superalgebra and their curvature.

A connection assigns to each generator derivation X = ad_a a potential A_X
of the same parity: (0, φ), (A⁰_μ, 0), (0, A¹_μ), (G_μν, 0).  Its curvature is

    F_{X,Y} = X(A_Y) − (−1)^{|X||Y|} Y(A_X) − i[A_X, A_Y] − A_{[X,Y]}.

In covariant coordinates 𝒜_X = A_X + i a_X (so Φ = φ − 1, 𝒜⁰ = A⁰ + ½x̃,
𝒜¹ = A¹ + ½x̃, 𝒢 = G − ½x̃x̃) the same quantity reads

    F_{X,Y} = −i[𝒜_X, 𝒜_Y] − Σ_k c_k 𝒜_k − iκ·1,   [a_X, a_Y] = Σ_k c_k a_k + κ·1,

and a gauge transformation acts by 𝒜_X ↦ g 𝒜_X g*, hence F ↦ g F g*.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from moyal_lab.config import get_lab_context
from moyal_lab.errors import DimensionError, DomainError
from moyal_lab.graded.superalgebra import (
    Generator,
    GeneratorKind,
    SuperCoordinates,
    SuperField,
    eta,
    gamma,
    generators,
    structure_constants,
    super_bracket,
    super_coordinates,
    super_product,
    superalgebra_parameters,
    xi_even,
    xi_odd,
)
from moyal_lab.models import ActionPatternReport, CurvatureComponent, CurvatureReport, GaugeCovarianceReport
from moyal_lab.moyal.algebra import anticommutator, commutator, interior_mask
from moyal_lab.moyal.params import Field

logger = logging.getLogger(__name__)

Pair = tuple[Generator, Generator]


@dataclass(frozen=True, eq=False)
class GaugePotentials:
    coords: SuperCoordinates
    phi: Field
    a0: tuple[Field, Field]
    a1: tuple[Field, Field]
    g: dict[tuple[int, int], Field]

    def __post_init__(self) -> None:
        fields = [self.phi, *self.a0, *self.a1, *self.g.values()]
        tol = get_lab_context().tolerances.exact
        for f in fields:
            if f.params != self.coords.params or f.trunc != self.coords.trunc:
                raise DimensionError("potentials must share the truncation of the superalgebra coordinates")
            scale = max(1.0, f.norm())
            if np.abs(f.coeffs - f.coeffs.conj().T).max(initial=0.0) > tol * scale:
                raise DomainError("gauge potentials must be Hermitian")
        if set(self.g) != {(1, 1), (1, 2), (2, 2)}:
            raise DimensionError("G needs the components (1,1), (1,2), (2,2)")

    @property
    def alpha(self) -> float:
        return self.coords.alpha

    def potential(self, x: Generator) -> SuperField:
        zero = Field.zeros(self.coords.params, self.coords.trunc)
        if x.kind is GeneratorKind.GAMMA:
            return SuperField(zero, self.phi, self.alpha)
        if x.kind is GeneratorKind.XI_EVEN:
            return SuperField(self.a0[x.index[0] - 1], zero, self.alpha)
        if x.kind is GeneratorKind.XI_ODD:
            return SuperField(zero, self.a1[x.index[0] - 1], self.alpha)
        return SuperField(self.g[x.index], zero, self.alpha)

    def covariant(self, x: Generator) -> SuperField:
        return self.potential(x) + self.coords.element(x) * 1j


def potentials_from_covariant(coords: SuperCoordinates, big_phi: Field, a0: tuple[Field, Field],
                              a1: tuple[Field, Field], g: dict[tuple[int, int], Field]) -> GaugePotentials:
    """Potentials whose covariant coordinates are (Φ, 𝒜⁰, 𝒜¹, 𝒢)."""
    xi = coords.xi
    return GaugePotentials(
        coords,
        phi=big_phi + coords.unit,
        a0=(a0[0] + xi[0], a0[1] + xi[1]),
        a1=(a1[0] + xi[0], a1[1] + xi[1]),
        g={k: g[k] + coords.eta[k] for k in ((1, 1), (1, 2), (2, 2))},
    )


def vanishing_covariant(coords: SuperCoordinates) -> GaugePotentials:
    """Φ = 𝒜 = 𝒢 = 0."""
    z = Field.zeros(coords.params, coords.trunc)
    return potentials_from_covariant(coords, z, (z, z), (z, z), {(1, 1): z, (1, 2): z, (2, 2): z})


# ---------------------------------------------------------------------------
# Curvature
# ---------------------------------------------------------------------------

def _expansion(x: Generator, y: Generator, coords: SuperCoordinates) -> tuple[complex, dict[Generator, complex]]:
    return structure_constants(x, y, coords.params.theta_inverse(), coords.alpha)


def curvature_definition(x: Generator, y: Generator, pots: GaugePotentials) -> SuperField:
    coords = pots.coords
    ax, ay = coords.element(x), coords.element(y)
    px, py = pots.potential(x), pots.potential(y)
    sign = -1.0 if x.degree * y.degree else 1.0
    out = super_bracket(ax, py) - super_bracket(ay, px) * sign - super_bracket(px, py) * 1j
    _, terms = _expansion(x, y, coords)
    for k, c in terms.items():
        out = out - pots.potential(k) * c
    return out


def curvature_closed_form(x: Generator, y: Generator, pots: GaugePotentials) -> SuperField:
    coords = pots.coords
    kappa, terms = _expansion(x, y, coords)
    out = super_bracket(pots.covariant(x), pots.covariant(y)) * -1j
    for k, c in terms.items():
        out = out - pots.covariant(k) * c
    return out - SuperField(coords.unit * (1j * kappa), Field.zeros(coords.params, coords.trunc), coords.alpha)


def _margin(x: Generator, y: Generator) -> int:
    ctx = get_lab_context()
    return ctx.eta_margin if GeneratorKind.ETA in (x.kind, y.kind) else ctx.margin


def _defect(p: SuperField, q: SuperField, margin: int) -> float:
    mask = interior_mask(p.trunc, p.params.dim, margin)
    return float(max(np.abs(p.even.coeffs - q.even.coeffs)[mask].max(),
                     np.abs(p.odd.coeffs - q.odd.coeffs)[mask].max()))


def _interior_norm(p: SuperField, margin: int) -> float:
    mask = interior_mask(p.trunc, p.params.dim, margin)
    return float(max(np.abs(p.even.coeffs)[mask].max(), np.abs(p.odd.coeffs)[mask].max()))


@dataclass(frozen=True, eq=False)
class GradedCurvature:
    components: dict[Pair, SuperField]
    report: CurvatureReport


def graded_curvature(pots: GaugePotentials) -> GradedCurvature:
    """Every component F_{X,Y}, X ≤ Y, in closed form, checked against the definition."""
    gens = generators(2)
    components: dict[Pair, SuperField] = {}
    rows = []
    for i, x in enumerate(gens):
        for y in gens[i:]:
            closed = curvature_closed_form(x, y, pots)
            direct = curvature_definition(x, y, pots)
            m = _margin(x, y)
            components[(x, y)] = closed
            rows.append(CurvatureComponent(x=x.label, y=y.label, defect=_defect(direct, closed, m),
                                           norm=_interior_norm(closed, m)))
    worst = max(r.defect for r in rows)
    logger.debug("graded curvature: %d components, max defect %.2e", len(rows), worst)
    report = CurvatureReport(trunc=pots.coords.trunc, alpha=pots.alpha, components=rows, max_defect=worst)
    return GradedCurvature(components, report)


# ---------------------------------------------------------------------------
# Gauge transformations
# ---------------------------------------------------------------------------

def random_unitary(coords: SuperCoordinates, block: int | None = None, scale: float = 1.0,
                   seed: int | None = None) -> Field:
    """g = exp(iH) with H a random Hermitian matrix on the first ``block`` levels."""
    seed = get_lab_context().seed if seed is None else seed
    size = coords.trunc ** coords.params.pairs
    block = size // 2 if block is None else block
    if not 1 <= block <= size:
        raise DomainError(f"block must lie in 1..{size}, got {block}")
    rng = np.random.default_rng(seed)
    h = np.zeros((size, size), dtype=complex)
    r = rng.normal(size=(block, block)) + 1j * rng.normal(size=(block, block))
    h[:block, :block] = scale * 0.5 * (r + r.conj().T)
    return Field(coords.params, coords.trunc, linalg.expm(1j * h))


def random_potentials(coords: SuperCoordinates, block: int | None = None, scale: float = 0.3,
                      seed: int | None = None) -> GaugePotentials:
    """Hermitian potentials supported on the first ``block`` levels."""
    seed = get_lab_context().seed if seed is None else seed
    size = coords.trunc ** coords.params.pairs
    block = size // 2 if block is None else block
    if not 1 <= block <= size:
        raise DomainError(f"block must lie in 1..{size}, got {block}")
    rng = np.random.default_rng(seed)

    def draw() -> Field:
        out = np.zeros((size, size), dtype=complex)
        r = rng.normal(size=(block, block)) + 1j * rng.normal(size=(block, block))
        out[:block, :block] = scale * 0.5 * (r + r.conj().T)
        return Field(coords.params, coords.trunc, out)

    return GaugePotentials(
        coords,
        phi=draw(),
        a0=(draw(), draw()),
        a1=(draw(), draw()),
        g={k: draw() for k in ((1, 1), (1, 2), (2, 2))},
    )


def gauge_transform(pots: GaugePotentials, g: Field) -> GaugePotentials:
    """A_X ↦ g A_X g* + i g X(g*)."""
    coords = pots.coords
    zero = Field.zeros(coords.params, coords.trunc)
    gs, gs_dag = SuperField(g, zero, pots.alpha), SuperField(g.dagger, zero, pots.alpha)

    def moved(x: Generator) -> SuperField:
        conj = super_product(super_product(gs, pots.potential(x)), gs_dag)
        return conj + super_product(gs, super_bracket(coords.element(x), gs_dag)) * 1j

    def even(x: Generator) -> Field:
        return _hermitian_part(moved(x).even)

    def odd(x: Generator) -> Field:
        return _hermitian_part(moved(x).odd)

    return GaugePotentials(
        coords,
        phi=odd(gamma()),
        a0=(even(xi_even(1)), even(xi_even(2))),
        a1=(odd(xi_odd(1)), odd(xi_odd(2))),
        g={k: even(eta(*k)) for k in ((1, 1), (1, 2), (2, 2))},
    )


def _hermitian_part(f: Field) -> Field:
    return f.with_coeffs(0.5 * (f.coeffs + f.coeffs.conj().T))


def gauge_covariance_check(pots: GaugePotentials, g: Field) -> GaugeCovarianceReport:
    """F(A^g) by the definition against g F(A) g* from the closed form."""
    coords = pots.coords
    zero = Field.zeros(coords.params, coords.trunc)
    gs, gs_dag = SuperField(g, zero, pots.alpha), SuperField(g.dagger, zero, pots.alpha)
    moved = gauge_transform(pots, g)
    gens = generators(2)
    worst = 0.0
    count = 0
    for i, x in enumerate(gens):
        for y in gens[i:]:
            expected = super_product(super_product(gs, curvature_closed_form(x, y, pots)), gs_dag)
            worst = max(worst, _defect(curvature_definition(x, y, moved), expected, _margin(x, y)))
            count += 1
    unitarity = float(np.abs(g.coeffs @ g.coeffs.conj().T - np.eye(g.size)).max())
    return GaugeCovarianceReport(trunc=coords.trunc, alpha=pots.alpha, components=count,
                                 max_defect=worst, unitarity=unitarity)


# ---------------------------------------------------------------------------
# Action pattern
# ---------------------------------------------------------------------------

def _masked_trace(f: Field, margin: int) -> float:
    keep = np.diag(interior_mask(f.trunc, f.params.dim, margin))
    return float(np.trace(f.coeffs[np.ix_(keep, keep)]).real)


def _weight(x: Generator, theta: float) -> float:
    """Rescaled generators (0, iγ/√θ) and (i√θ η_μν, 0); η_12 also stands for η_21."""
    if x.kind is GeneratorKind.GAMMA:
        return 1.0 / np.sqrt(theta)
    if x.kind is GeneratorKind.ETA:
        mult = 1.0 if x.index[0] == x.index[1] else 2.0
        return np.sqrt(mult * theta)
    return 1.0


def _curvature_density(pots: GaugePotentials) -> Field:
    """Σ_{X,Y} |F_{X,Y}|², even component."""
    theta = pots.coords.params.theta
    gens = generators(2)
    total = Field.zeros(pots.coords.params, pots.coords.trunc)
    for x in gens:
        for y in gens:
            f = curvature_closed_form(x, y, pots)
            w = (_weight(x, theta) * _weight(y, theta)) ** 2
            total = total + (f.even.dagger @ f.even + pots.alpha * (f.odd.dagger @ f.odd)) * w
    return total


def _action_density(cov: tuple[Field, Field], alpha: float, theta: float, inv: np.ndarray) -> Field:
    """(1+2α) F² + α² {𝒜,𝒜}² + (8/θ)(α² + 2(D+1)(1+α)) 𝒜𝒜 with F_μν = Θ⁻¹_μν − i[𝒜_μ, 𝒜_ν]."""
    unit = Field(cov[0].params, cov[0].trunc, np.eye(cov[0].size))
    mass = 8.0 * (alpha**2 + 2.0 * 3.0 * (1.0 + alpha)) / theta
    total = Field.zeros(cov[0].params, cov[0].trunc)
    for mu in range(2):
        total = total + (cov[mu] @ cov[mu]) * mass
        for nu in range(2):
            f = unit * inv[mu, nu] - commutator(cov[mu], cov[nu]) * 1j
            ac = anticommutator(cov[mu], cov[nu])
            total = total + (f @ f) * (1.0 + 2.0 * alpha) + (ac @ ac) * alpha**2
    return total


def curvature_action_check(a: tuple[Field, Field], alpha: float, margin: int | None = None) -> ActionPatternReport:
    """Σ|F|² at Φ = 𝒢 = 0, 𝒜⁰ = 𝒜¹ = A + ½x̃ against the induced gauge action.

    Both sides are taken relative to A = 0, which removes the field
    independent constants; A must vanish outside the first trunc − margin − 5
    levels so that every term containing A is traced without truncation loss.
    """
    margin = get_lab_context().margin if margin is None else margin
    if len(a) != 2:
        raise DimensionError("need two components A_1, A_2")
    params, trunc = a[0].params, a[0].trunc
    if params.dim != 2:
        raise DimensionError("the superalgebra is built on the two-dimensional Moyal plane")
    limit = trunc - margin - 5
    if limit < 1:
        raise DomainError(f"trunc={trunc} is too small for margin {margin}")
    for f in a:
        if np.any(f.coeffs[limit:, :]) or np.any(f.coeffs[:, limit:]):
            raise DomainError(f"A must vanish outside the first {limit} levels")
    theta = params.theta
    coords = super_coordinates(trunc, theta, alpha)
    z = Field.zeros(params, trunc)
    inv = params.theta_inverse()
    gs = {(1, 1): z, (1, 2): z, (2, 2): z}

    def both(fields: tuple[Field, Field]) -> tuple[float, float]:
        cov = (fields[0] - coords.xi[0], fields[1] - coords.xi[1])
        pots = potentials_from_covariant(coords, z, cov, cov, gs)
        return (_masked_trace(_curvature_density(pots), margin),
                _masked_trace(_action_density(cov, alpha, theta, inv), margin))

    lhs, rhs = both(a)
    lhs0, rhs0 = both((z, z))
    lhs, rhs = lhs - lhs0, rhs - rhs0
    omega2, _, kappa = superalgebra_parameters(alpha, theta)
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return ActionPatternReport(
        alpha=alpha, theta=theta, curvature_form=lhs, action_form=rhs,
        defect=abs(lhs - rhs) / scale, mass_coefficient=8.0 * (alpha**2 + 6.0 * (1.0 + alpha)) / theta,
        omega2=omega2, kappa=kappa,
    )
