"""
Commutation factors, factor sets and crossed products.

A commutation factor is fixed by its values on generators,

    ε(i, j) = Π_{r,s} ε(e_r, e_s)^{λ_r μ_s},   i = Σλ_r e_r, j = Σμ_s e_s,

evaluated on reduced representatives, so a table that breaks the order
constraints shows up as a failure of biadditivity.  A factor set σ gives a
proper commutation factor ε_σ(i, j) = σ(i, j) σ(j, i)⁻¹ and every proper ε
arises this way from σ(i, j) = Π_{r<s} ε(e_r, e_s)^{λ_r μ_s}.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from moyal_lab.config import get_lab_context
from moyal_lab.errors import DimensionError, DomainError, UnsupportedConfigurationError
from moyal_lab.graded.groups import Element, GradingGroup, Phase
from moyal_lab.models import ValidationReport

logger = logging.getLogger(__name__)

# Exhaustive checks run over all triples when |Γ| is at most this.
EXHAUSTIVE_TRIPLES = 10
# Crossed products are only built and checked for groups up to this order.
MAX_CROSSED_PRODUCT = 64
_REPORTED_VIOLATIONS = 20


# ---------------------------------------------------------------------------
# Commutation factors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CommutationFactor:
    group: GradingGroup
    gen_table: tuple[tuple[Phase, ...], ...]

    def __post_init__(self) -> None:
        table = tuple(tuple(Phase.parse(v) for v in row) for row in self.gen_table)
        k = self.group.rank
        if len(table) != k or any(len(row) != k for row in table):
            raise DimensionError(f"generator table must be {k}x{k} for {self.group.label()}")
        object.__setattr__(self, "gen_table", table)

    def __call__(self, i, j) -> Phase:
        i, j = self.group.reduce(i), self.group.reduce(j)
        out = Phase()
        for r, lam in enumerate(i):
            if not lam:
                continue
            for s, mu in enumerate(j):
                if mu:
                    out = out * self.gen_table[r][s] ** (lam * mu)
        return out

    @property
    def proper(self) -> bool:
        """ε(i, i) = 1 everywhere; given ε(i,j)ε(j,i) = 1 this is ε(e_r, e_r) = 1."""
        return all(self.gen_table[r][r].is_one for r in range(self.group.rank))

    def signature(self, i) -> Phase:
        return self(i, i)

    def parity(self) -> tuple[list[Element], list[Element]]:
        """(Γ⁰, Γ¹) split by ε(i, i) = ±1."""
        even, odd = [], []
        for i in self.group.elements():
            (even if self.signature(i).is_one else odd).append(i)
        return even, odd

    def table_labels(self) -> list[list[str]]:
        return [[v.label() for v in row] for row in self.gen_table]

    @classmethod
    def from_rule(cls, group: GradingGroup, rule: Callable[[Element, Element], Phase]) -> "CommutationFactor":
        gens = group.generators()
        return cls(group, tuple(tuple(rule(a, b) for b in gens) for a in gens))

    @classmethod
    def from_signs(cls, group: GradingGroup, signs) -> "CommutationFactor":
        """Generator table of ±1 entries."""
        return cls(group, tuple(tuple(Phase.sign(int(s)) for s in row) for row in signs))


def super_factor() -> CommutationFactor:
    """Z₂ with ε(i, j) = (−1)^{ij}."""
    return CommutationFactor.from_signs(GradingGroup((2,)), [[-1]])


def trivial_factor(group: GradingGroup) -> CommutationFactor:
    return CommutationFactor.from_rule(group, lambda a, b: Phase())


def _triples(group: GradingGroup, samples: int, seed: int) -> tuple[list[tuple[Element, Element, Element]], bool]:
    if group.is_finite and group.size <= EXHAUSTIVE_TRIPLES:
        elems = group.elements()
        return [(i, j, k) for i in elems for j in elems for k in elems], True
    rng = np.random.default_rng(seed)
    a, b, c = (group.sample(rng, samples) for _ in range(3))
    return list(zip(a, b, c)), False


def _order_violations(cf: CommutationFactor) -> list[str]:
    out = []
    orders = cf.group.orders
    for r in range(cf.group.rank):
        diag = cf.gen_table[r][r]
        if not (diag ** 2).is_one:
            out.append(f"eps(e{r + 1},e{r + 1}) = {diag.label()} is not +-1")
        elif orders[r] % 2 == 1 and not diag.is_one:
            out.append(f"eps(e{r + 1},e{r + 1}) must be 1 for the odd order {orders[r]}")
        for s in range(cf.group.rank):
            if s == r:
                continue
            m = math.gcd(orders[r], orders[s])
            if m and not (cf.gen_table[r][s] ** m).is_one:
                out.append(f"eps(e{r + 1},e{s + 1})^{m} = {(cf.gen_table[r][s] ** m).label()} != 1")
            if r < s and not (cf.gen_table[r][s] * cf.gen_table[s][r]).is_one:
                out.append(f"eps(e{r + 1},e{s + 1}) eps(e{s + 1},e{r + 1}) != 1")
    return out


def cf_validate(cf: CommutationFactor, samples: int = 1000, seed: int | None = None) -> ValidationReport:
    """Axioms of a commutation factor plus the order constraints on its generator table."""
    seed = get_lab_context().seed if seed is None else seed
    violations = _order_violations(cf)
    triples, exhaustive = _triples(cf.group, samples, seed)
    g = cf.group
    broken = 0
    for i, j, k in triples:
        bad = []
        if not (cf(i, j) * cf(j, i)).is_one:
            bad.append(f"eps{i, j} eps{j, i} != 1")
        if cf(g.add(i, j), k) != cf(i, k) * cf(j, k):
            bad.append(f"eps({g.add(i, j)},{k}) != eps({i},{k}) eps({j},{k})")
        if cf(i, g.add(j, k)) != cf(i, j) * cf(i, k):
            bad.append(f"eps({i},{g.add(j, k)}) != eps({i},{j}) eps({i},{k})")
        if bad:
            broken += 1
            if len(violations) < _REPORTED_VIOLATIONS:
                violations.extend(bad)
    valid = not violations
    even: list[list[int]] = []
    odd: list[list[int]] = []
    if valid and g.is_finite:
        ev, od = cf.parity()
        even, odd = [list(e) for e in ev], [list(e) for e in od]
    if broken:
        logger.debug("commutation factor on %s fails on %d of %d triples", g.label(), broken, len(triples))
    return ValidationReport(
        group=list(g.orders), valid=valid, proper=cf.proper, violations=violations,
        sampled=len(triples), exhaustive=exhaustive, even=even, odd=odd,
    )


# ---------------------------------------------------------------------------
# Factor sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FactorSet:
    group: GradingGroup
    rule: Callable[[Element, Element], Phase]
    name: str = "custom"

    def __call__(self, i, j) -> Phase:
        return self.rule(self.group.reduce(i), self.group.reduce(j))


def clifford_factor_set(n: int) -> FactorSet:
    """σ(i, j) = (−1)^{Σ_{p<q} i_p j_q} on (Z₂)ⁿ."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")

    def rule(i: Element, j: Element) -> Phase:
        s = sum(i[p] * j[q] for p in range(n) for q in range(p + 1, n))
        return Phase.sign(-1 if s % 2 else 1)

    return FactorSet(GradingGroup((2,) * n), rule, name=f"clifford({n})")


def real_clifford_factor_set(r: int, s: int) -> FactorSet:
    """Clifford factor set times Π_p η_p^{i_p j_p}, η = (+1)^r (−1)^s."""
    if r < 0 or s < 0 or r + s < 1:
        raise DomainError(f"need r, s >= 0 and r + s >= 1, got ({r}, {s})")
    n = r + s
    base = clifford_factor_set(n)
    eta = [1] * r + [-1] * s

    def rule(i: Element, j: Element) -> Phase:
        out = base(i, j)
        for p in range(n):
            if eta[p] < 0 and i[p] * j[p] % 2:
                out = out * Phase.sign(-1)
        return out

    return FactorSet(base.group, rule, name=f"clifford({r},{s})")


def trivial_factor_set(group: GradingGroup) -> FactorSet:
    return FactorSet(group, lambda i, j: Phase(), name="trivial")


def factor_set_violations(sigma: FactorSet, samples: int = 1000, seed: int | None = None) -> list[str]:
    """σ(i,j)σ(i+j,k) = σ(i,j+k)σ(j,k) on all or sampled triples."""
    seed = get_lab_context().seed if seed is None else seed
    g = sigma.group
    out = []
    triples, _ = _triples(g, samples, seed)
    for i, j, k in triples:
        if sigma(i, j) * sigma(g.add(i, j), k) != sigma(i, g.add(j, k)) * sigma(j, k):
            out.append(f"cocycle identity fails at {i}, {j}, {k}")
            if len(out) >= _REPORTED_VIOLATIONS:
                break
    return out


def factor_set_from_matrices(group: GradingGroup, basis: dict[Element, np.ndarray],
                             tolerance: float = 1e-10) -> FactorSet:
    """σ read off a fine-graded basis: e_α e_β = σ(α, β) e_{α+β}."""
    basis = {group.reduce(k): np.asarray(v, dtype=complex) for k, v in basis.items()}
    table: dict[tuple[Element, Element], Phase] = {}
    for a, ea in basis.items():
        for b, eb in basis.items():
            c = group.add(a, b)
            if c not in basis:
                raise DomainError(f"support is not a subgroup: {a} + {b} = {c} has no basis element")
            ec = basis[c]
            prod = ea @ eb
            coeff = np.vdot(ec, prod) / np.vdot(ec, ec)
            if np.abs(prod - coeff * ec).max() > tolerance * max(1.0, np.abs(prod).max()):
                raise DomainError(f"e_{a} e_{b} is not proportional to e_{c}")
            table[(a, b)] = Phase.from_value(coeff, tolerance=tolerance ** 0.5)

    def rule(i: Element, j: Element) -> Phase:
        try:
            return table[(i, j)]
        except KeyError:
            raise DomainError(f"({i}, {j}) lies outside the support") from None

    return FactorSet(group, rule, name="from-matrices")


# ---------------------------------------------------------------------------
# Multiplier bridge
# ---------------------------------------------------------------------------

def eps_from_factor_set(sigma: FactorSet, samples: int = 1000, seed: int | None = None) -> CommutationFactor:
    """ε_σ(i, j) = σ(i, j) σ(j, i)⁻¹."""
    bad = factor_set_violations(sigma, samples, seed)
    if bad:
        raise DomainError(f"{sigma.name} is not a factor set: {bad[0]}")
    g = sigma.group
    eps = CommutationFactor.from_rule(g, lambda a, b: sigma(a, b) / sigma(b, a))
    triples, _ = _triples(g, samples, get_lab_context().seed if seed is None else seed)
    for i, j, _ in triples:
        if eps(i, j) != sigma(i, j) / sigma(j, i):
            raise DomainError(f"sigma(i,j)/sigma(j,i) is not biadditive at {i}, {j}")
    return eps


def factor_set_from_eps(eps: CommutationFactor) -> FactorSet:
    """Representative σ(i, j) = Π_{r<s} ε(e_r, e_s)^{λ_r μ_s} of a proper ε."""
    report = cf_validate(eps)
    if not report.valid:
        raise DomainError(f"not a commutation factor: {report.violations[0]}")
    if not eps.proper:
        raise DomainError("only proper commutation factors come from a factor set")
    table = eps.gen_table
    k = eps.group.rank

    def rule(i: Element, j: Element) -> Phase:
        out = Phase()
        for r in range(k):
            for s in range(r + 1, k):
                if i[r] and j[s]:
                    out = out * table[r][s] ** (i[r] * j[s])
        return out

    return FactorSet(eps.group, rule, name="from-eps")


def multiplier_bridge(obj: FactorSet | CommutationFactor) -> CommutationFactor | FactorSet:
    """Factor set → ε_σ, proper commutation factor → representative factor set."""
    if isinstance(obj, FactorSet):
        return eps_from_factor_set(obj)
    if isinstance(obj, CommutationFactor):
        return factor_set_from_eps(obj)
    raise DomainError(f"expected a FactorSet or CommutationFactor, got {type(obj).__name__}")


# ---------------------------------------------------------------------------
# Crossed product
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CrossedProduct:
    """Basis e_i, i ∈ Γ, with e_i e_j = σ(i, j) e_{i+j}."""

    sigma: FactorSet
    table: dict[tuple[Element, Element], tuple[Phase, Element]]

    @property
    def group(self) -> GradingGroup:
        return self.sigma.group

    def product(self, i, j) -> tuple[Phase, Element]:
        return self.table[(self.group.reduce(i), self.group.reduce(j))]

    def multiply(self, x: dict[Element, complex], y: dict[Element, complex]) -> dict[Element, complex]:
        """Product of two elements given as {degree: coefficient}."""
        out: dict[Element, complex] = {}
        for i, a in x.items():
            for j, b in y.items():
                phase, k = self.product(i, j)
                out[k] = out.get(k, 0.0) + phase.value * a * b
        return {k: v for k, v in out.items() if v != 0}

    @property
    def is_commutative(self) -> bool:
        return all(self.table[(i, j)] == self.table[(j, i)] for i, j in self.table)


def crossed_product(sigma: FactorSet) -> CrossedProduct:
    """Multiplication table of the crossed product, associativity checked exhaustively."""
    g = sigma.group
    if not g.is_finite or g.size > MAX_CROSSED_PRODUCT:
        raise UnsupportedConfigurationError(
            f"crossed products are built for finite groups of order <= {MAX_CROSSED_PRODUCT}"
        )
    elems = g.elements()
    table = {(i, j): (sigma(i, j), g.add(i, j)) for i in elems for j in elems}
    for i in elems:
        for j in elems:
            p_ij, ij = table[(i, j)]
            for k in elems:
                p_jk, jk = table[(j, k)]
                left = p_ij * table[(ij, k)][0]
                right = table[(i, jk)][0] * p_jk
                if left != right:
                    raise DomainError(f"{sigma.name} is not a factor set: (e{i} e{j}) e{k} != e{i} (e{j} e{k})")
    logger.debug("crossed product of %s over %s: %d basis elements", sigma.name, g.label(), len(elems))
    return CrossedProduct(sigma, table)
