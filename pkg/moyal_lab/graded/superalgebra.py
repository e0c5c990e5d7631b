"""
Moyal superalgebra A = A⁰ ⊕ A¹ with A⁰ = A¹ = Moyal algebra and product

    (a, b)·(c, d) = (a⋆c + α b⋆d, a⋆d + b⋆c).

Its Lie superbracket is

    [(a, b), (c, d)] = ([a, c] + α{b, d}, [a, d] + [b, c]).

The derivations used for the gauge theory are ad of the generators
(0, iγ), (iξ_μ, 0), (0, iξ_μ) and (iη_μν, 0) with γ = 1, ξ_μ = −½x̃_μ and
η_μν = {ξ_μ, ξ_ν}⋆ = ½x̃_μx̃_ν.  ``structure_constants`` expands the bracket
of two generators as Σ c_k a_k + κ·1; with this normalisation of η the
brackets that involve η carry four times the printed right-hand side.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from moyal_lab.config import get_lab_context
from moyal_lab.errors import DimensionError, DomainError
from moyal_lab.models import BracketRow, DerivationTableReport, SuperactionReport
from moyal_lab.moyal.algebra import anticommutator, commutator, coordinate_field, integral, interior_mask
from moyal_lab.moyal.params import Field, MoyalParams
from moyal_lab.scalar.model import ScalarModel, apply_kinetic

logger = logging.getLogger(__name__)

MIN_TRUNC = 6


# ---------------------------------------------------------------------------
# SuperField
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SuperField:
    even: Field
    odd: Field
    alpha: float

    def __post_init__(self) -> None:
        self.even.check_compatible(self.odd)
        if not math.isfinite(self.alpha):
            raise DomainError(f"alpha must be finite, got {self.alpha!r}")

    @property
    def params(self) -> MoyalParams:
        return self.even.params

    @property
    def trunc(self) -> int:
        return self.even.trunc

    @classmethod
    def zeros(cls, params: MoyalParams, trunc: int, alpha: float) -> "SuperField":
        z = Field.zeros(params, trunc)
        return cls(z, z, alpha)

    @classmethod
    def unit(cls, params: MoyalParams, trunc: int, alpha: float) -> "SuperField":
        one = Field(params, trunc, np.eye(trunc ** params.pairs))
        return cls(one, Field.zeros(params, trunc), alpha)

    def _same(self, other: "SuperField") -> None:
        if other.alpha != self.alpha:
            raise DomainError(f"alpha mismatch: {self.alpha} vs {other.alpha}")

    def __add__(self, other: "SuperField") -> "SuperField":
        self._same(other)
        return SuperField(self.even + other.even, self.odd + other.odd, self.alpha)

    def __sub__(self, other: "SuperField") -> "SuperField":
        self._same(other)
        return SuperField(self.even - other.even, self.odd - other.odd, self.alpha)

    def __neg__(self) -> "SuperField":
        return SuperField(-self.even, -self.odd, self.alpha)

    def __mul__(self, scalar: complex) -> "SuperField":
        return SuperField(self.even * scalar, self.odd * scalar, self.alpha)

    __rmul__ = __mul__

    def parts(self) -> list[tuple[int, "SuperField"]]:
        """Non-zero homogeneous components with their degree."""
        zero = Field.zeros(self.params, self.trunc)
        out = []
        if np.any(self.even.coeffs):
            out.append((0, SuperField(self.even, zero, self.alpha)))
        if np.any(self.odd.coeffs):
            out.append((1, SuperField(zero, self.odd, self.alpha)))
        return out


def super_product(p: SuperField, q: SuperField) -> SuperField:
    p._same(q)
    a = p.alpha
    return SuperField(p.even @ q.even + a * (p.odd @ q.odd), p.even @ q.odd + p.odd @ q.even, a)


def super_bracket(p: SuperField, q: SuperField) -> SuperField:
    p._same(q)
    return SuperField(
        commutator(p.even, q.even) + p.alpha * anticommutator(p.odd, q.odd),
        commutator(p.even, q.odd) + commutator(p.odd, q.even),
        p.alpha,
    )


def super_adjoint(p: SuperField) -> SuperField:
    return SuperField(p.even.dagger, p.odd.dagger, p.alpha)


def super_trace(p: SuperField) -> complex:
    """∫ of the even component."""
    return integral(p.even)


def superalgebra_parameters(alpha: float, theta: float, dim: int = 2) -> tuple[float, float, float]:
    """(Ω², μ², κ) of the scalar and gauge actions induced at parameter α."""
    if abs(1.0 + 2.0 * alpha) < 1e-15:
        raise DomainError("alpha = -1/2 makes 1 + 2 alpha vanish")
    if 1.0 + 2.0 * alpha < 0:
        logger.warning("alpha=%g < -1/2: Ω² and μ² come out negative", alpha)
    s = 1.0 + 2.0 * alpha
    omega2 = alpha**2 / s
    mu2 = 4.0 * alpha**2 / (theta * s)
    kappa = 8.0 * (alpha**2 + 2.0 * (dim + 1) * (alpha + 1.0)) / (theta * s)
    return omega2, mu2, kappa


# ---------------------------------------------------------------------------
# Generators and structure constants
# ---------------------------------------------------------------------------

class GeneratorKind(str, Enum):
    ETA = "eta"        # (iη_μν, 0)
    XI_EVEN = "xi0"    # (iξ_μ, 0)
    XI_ODD = "xi1"     # (0, iξ_μ)
    GAMMA = "gamma"    # (0, iγ)


_RANK = {GeneratorKind.ETA: 0, GeneratorKind.XI_EVEN: 1, GeneratorKind.XI_ODD: 2, GeneratorKind.GAMMA: 3}


@dataclass(frozen=True)
class Generator:
    kind: GeneratorKind
    index: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.kind is GeneratorKind.ETA:
            object.__setattr__(self, "index", tuple(sorted(self.index)))

    @property
    def degree(self) -> int:
        return 1 if self.kind in (GeneratorKind.XI_ODD, GeneratorKind.GAMMA) else 0

    @property
    def label(self) -> str:
        idx = "".join(str(i) for i in self.index)
        return {
            GeneratorKind.ETA: f"(i eta{idx},0)",
            GeneratorKind.XI_EVEN: f"(i xi{idx},0)",
            GeneratorKind.XI_ODD: f"(0,i xi{idx})",
            GeneratorKind.GAMMA: "(0,i gamma)",
        }[self.kind]


def gamma() -> Generator:
    return Generator(GeneratorKind.GAMMA)


def xi_even(mu: int) -> Generator:
    return Generator(GeneratorKind.XI_EVEN, (mu,))


def xi_odd(mu: int) -> Generator:
    return Generator(GeneratorKind.XI_ODD, (mu,))


def eta(mu: int, nu: int) -> Generator:
    return Generator(GeneratorKind.ETA, (mu, nu))


def generators(dim: int = 2) -> list[Generator]:
    idx = range(1, dim + 1)
    return ([gamma()] + [xi_even(m) for m in idx] + [xi_odd(m) for m in idx]
            + [eta(m, n) for m in idx for n in idx if m <= n])


Expansion = tuple[complex, dict[Generator, complex]]


def _canonical(x: Generator, y: Generator, inv: np.ndarray, alpha: float) -> Expansion:
    """[a_x, a_y] for rank(x) ≤ rank(y)."""
    def t(a: int, b: int) -> float:
        return inv[a - 1, b - 1]

    terms: dict[Generator, complex] = {}

    def add(coef: complex, g: Generator) -> None:
        terms[g] = terms.get(g, 0.0) + coef

    kx, ky = x.kind, y.kind
    K = GeneratorKind
    if kx is K.ETA and ky in (K.XI_EVEN, K.XI_ODD):
        mu, nu = x.index
        (rho,) = y.index
        make = xi_even if ky is K.XI_EVEN else xi_odd
        add(2.0 * t(nu, rho), make(mu))
        add(2.0 * t(mu, rho), make(nu))
    elif kx is K.ETA and ky is K.ETA:
        mu, nu = x.index
        rho, sig = y.index
        add(2.0 * t(nu, sig), eta(mu, rho))
        add(2.0 * t(nu, rho), eta(mu, sig))
        add(2.0 * t(mu, sig), eta(nu, rho))
        add(2.0 * t(mu, rho), eta(nu, sig))
    elif kx is K.XI_EVEN and ky is K.XI_EVEN:
        return 1j * t(x.index[0], y.index[0]), {}
    elif kx is K.XI_EVEN and ky is K.XI_ODD:
        add(t(x.index[0], y.index[0]), gamma())
    elif kx is K.XI_ODD and ky is K.XI_ODD:
        add(1j * alpha, eta(x.index[0], y.index[0]))
    elif kx is K.XI_ODD and ky is K.GAMMA:
        add(2j * alpha, xi_even(x.index[0]))
    elif kx is K.GAMMA and ky is K.GAMMA:
        return -2.0 * alpha, {}
    # (η, γ) and (iξ, 0) with γ bracket to zero
    return 0.0, {g: c for g, c in terms.items() if c != 0}


def structure_constants(x: Generator, y: Generator, theta_inverse: np.ndarray, alpha: float) -> Expansion:
    """(κ, {a_k: c_k}) with [a_x, a_y] = Σ c_k a_k + κ·1."""
    if _RANK[x.kind] <= _RANK[y.kind]:
        return _canonical(x, y, theta_inverse, alpha)
    kappa, terms = _canonical(y, x, theta_inverse, alpha)
    sign = -((-1) ** (x.degree * y.degree))
    return sign * kappa, {g: sign * c for g, c in terms.items()}


# Printed right-hand sides are scaled by this factor for η = {ξ, ξ}.
PRINTED_SCALE = {
    (GeneratorKind.ETA, GeneratorKind.XI_EVEN): 4.0,
    (GeneratorKind.ETA, GeneratorKind.XI_ODD): 4.0,
    (GeneratorKind.ETA, GeneratorKind.ETA): 4.0,
}


# ---------------------------------------------------------------------------
# Truncated generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SuperCoordinates:
    """Matrix-basis ξ_μ, η_μν and the unit at one truncation."""

    params: MoyalParams
    trunc: int
    alpha: float
    xi: tuple[Field, ...]
    eta: dict[tuple[int, int], Field]

    @property
    def unit(self) -> Field:
        return Field(self.params, self.trunc, np.eye(self.trunc ** self.params.pairs))

    def element(self, g: Generator) -> SuperField:
        zero = Field.zeros(self.params, self.trunc)
        if g.kind is GeneratorKind.GAMMA:
            return SuperField(zero, self.unit * 1j, self.alpha)
        if g.kind is GeneratorKind.XI_EVEN:
            return SuperField(self.xi[g.index[0] - 1] * 1j, zero, self.alpha)
        if g.kind is GeneratorKind.XI_ODD:
            return SuperField(zero, self.xi[g.index[0] - 1] * 1j, self.alpha)
        return SuperField(self.eta[g.index] * 1j, zero, self.alpha)

    def expand(self, expansion: Expansion) -> SuperField:
        kappa, terms = expansion
        out = SuperField(self.unit * kappa, Field.zeros(self.params, self.trunc), self.alpha)
        for g, c in terms.items():
            out = out + self.element(g) * c
        return out


def super_coordinates(trunc: int, theta: float, alpha: float) -> SuperCoordinates:
    if trunc < MIN_TRUNC:
        raise DomainError(f"trunc must be >= {MIN_TRUNC}, got {trunc}")
    params = MoyalParams(theta, 2)
    xi = tuple(coordinate_field("x_tilde", trunc, params, mu) * (-0.5) for mu in (1, 2))
    etas = {(m, n): xi[m - 1] @ xi[n - 1] + xi[n - 1] @ xi[m - 1] for m in (1, 2) for n in (1, 2) if m <= n}
    return SuperCoordinates(params, trunc, alpha, xi, etas)


def _super_defect(p: SuperField, q: SuperField, margin: int) -> float:
    mask = interior_mask(p.trunc, p.params.dim, margin)
    if not mask.any():
        raise DomainError(f"margin {margin} leaves no interior block at trunc={p.trunc}")
    return float(max(np.abs(p.even.coeffs - q.even.coeffs)[mask].max(),
                     np.abs(p.odd.coeffs - q.odd.coeffs)[mask].max()))


def derivation_table_check(trunc: int, theta: float, alpha: float, margin: int | None = None,
                           eta_margin: int | None = None, tolerance: float = 1e-8) -> DerivationTableReport:
    """Every generator bracket against its expansion, on the interior block."""
    ctx = get_lab_context()
    margin = ctx.margin if margin is None else margin
    eta_margin = ctx.eta_margin if eta_margin is None else eta_margin
    coords = super_coordinates(trunc, theta, alpha)
    inv = coords.params.theta_inverse()
    gens = generators(2)
    rows: dict[str, BracketRow] = {}
    for i, x in enumerate(gens):
        for y in gens[i:]:
            lhs = super_bracket(coords.element(x), coords.element(y))
            rhs = coords.expand(structure_constants(x, y, inv, alpha))
            uses_eta = GeneratorKind.ETA in (x.kind, y.kind)
            defect = _super_defect(lhs, rhs, eta_margin if uses_eta else margin)
            first, second = sorted((x.kind, y.kind), key=_RANK.get)
            name = f"[{first.value},{second.value}]"
            row = rows.get(name)
            if row is None or defect > row.defect:
                rows[name] = BracketRow(name=name, defect=defect, scale=PRINTED_SCALE.get((first, second), 1.0))
    worst = max(r.defect for r in rows.values())
    logger.debug("derivation table at N=%d alpha=%g: max defect %.2e", trunc, alpha, worst)
    return DerivationTableReport(
        trunc=trunc, theta=theta, alpha=alpha, rows=list(rows.values()),
        max_defect=worst, passed=worst <= tolerance,
    )


# ---------------------------------------------------------------------------
# Differential and scalar superaction
# ---------------------------------------------------------------------------

def super_differential(phi: SuperField, g: Generator, coords: SuperCoordinates) -> SuperField:
    """dΦ(ad_a) = Σ_k (−1)^{|a||Φ_k|} [a, Φ_k]."""
    a = coords.element(g)
    out = SuperField.zeros(phi.params, phi.trunc, phi.alpha)
    for degree, part in phi.parts():
        term = super_bracket(a, part)
        out = out + (term * -1.0 if degree * g.degree else term)
    return out


def _norm_density(p: SuperField) -> Field:
    """Even component of p*·p: |p₀|² + α|p₁|²."""
    return p.even.dagger @ p.even + p.alpha * (p.odd.dagger @ p.odd)


def scalar_superaction_check(phi: Field, alpha: float, margin: int | None = None) -> SuperactionReport:
    """tr Σ_a |dΦ(ad_a)|² at Φ = (φ, φ) against the harmonic scalar quadratic form.

    The sum runs over (0, iγ/√θ), (iξ_μ, 0) and (0, iξ_μ); the result is
    (1+2α) ∫ (∂φ)² + Ω²(x̃φ)² + μ²φ² with Ω², μ² from superalgebra_parameters.
    """
    margin = get_lab_context().margin if margin is None else margin
    if phi.params.dim != 2:
        raise DimensionError("the superalgebra is built on the two-dimensional Moyal plane")
    limit = phi.trunc - margin
    if np.any(phi.coeffs[limit:, :]) or np.any(phi.coeffs[:, limit:]):
        raise DomainError(f"phi must vanish outside the first {limit} levels")
    if np.abs(phi.coeffs - phi.coeffs.conj().T).max(initial=0.0) > 1e-12:
        raise DomainError("phi must be Hermitian")
    theta = phi.params.theta
    coords = super_coordinates(phi.trunc, theta, alpha)
    field = SuperField(phi, phi, alpha)
    total = 0.0
    weights = [(gamma(), 1.0 / theta)] + [(xi_even(m), 1.0) for m in (1, 2)] + [(xi_odd(m), 1.0) for m in (1, 2)]
    for g, w in weights:
        total += w * integral(_norm_density(super_differential(field, g, coords))).real
    omega2, mu2, _ = superalgebra_parameters(alpha, theta)
    model = ScalarModel(phi.params, math.sqrt(max(omega2, 0.0)), mu2, lam=1.0)
    quadratic = integral(phi @ apply_kinetic(phi, model)).real
    scalar_form = (1.0 + 2.0 * alpha) * quadratic
    scale = max(abs(total), abs(scalar_form), 1e-300)
    return SuperactionReport(
        alpha=alpha, superaction=float(total), scalar_form=float(scalar_form),
        defect=float(abs(total - scalar_form) / scale), omega2=omega2, mu2=mu2,
    )
