"""
ε-structure of graded matrix algebras.

Two gradings of M_D(C) are supported:

* elementary, |E_ij| = φ(i) − φ(j) for a map φ: {1..D} → Γ;
* fine, a basis e_α (one element per degree of a subgroup Supp ⊂ Γ) with
  e_α e_β = σ(α, β) e_{α+β}.

The ε-bracket, ε-trace, ε-center and ε-derivations are computed on the
homogeneous decomposition.  For fine gradings a homogeneous derivation of
degree d is classified against Γ_{ε,ε_σ} = {d : ε(d, ·) = ε_σ(d, ·)}:
outside it the derivation is inner (a multiple of ad_{e_d}), inside it
the derivation is given by a group morphism Supp → C, which vanishes for a
finite group.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np
from scipy import linalg

from moyal_lab.errors import DimensionError, DomainError, UnsupportedConfigurationError
from moyal_lab.graded.factors import (
    CommutationFactor,
    FactorSet,
    eps_from_factor_set,
    factor_set_from_matrices,
    super_factor,
)
from moyal_lab.graded.groups import Element, GradingGroup, Phase
from moyal_lab.models import DerivationClass

logger = logging.getLogger(__name__)

LinearMap = Callable[[np.ndarray], np.ndarray]

MAX_CENTER_SIZE = 16
MAX_DERIVATION_SIZE = 4
_NULL_TOL = 1e-10


# ---------------------------------------------------------------------------
# Algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GradedMatrixAlgebra:
    size: int
    factor: CommutationFactor
    phi: tuple[Element, ...] | None = None
    fine_basis: tuple[tuple[Element, np.ndarray], ...] | None = None
    sigma: FactorSet | None = None

    def __post_init__(self) -> None:
        if (self.phi is None) == (self.fine_basis is None):
            raise DomainError("give either an elementary map phi or a fine basis")
        if self.phi is not None:
            if len(self.phi) != self.size:
                raise DimensionError(f"phi has {len(self.phi)} entries for size {self.size}")
            object.__setattr__(self, "phi", tuple(self.group.reduce(p) for p in self.phi))

    @property
    def group(self) -> GradingGroup:
        return self.factor.group

    @property
    def kind(self) -> str:
        return "elementary" if self.phi is not None else "fine"

    @cached_property
    def basis(self) -> list[tuple[Element, np.ndarray]]:
        """Homogeneous basis as (degree, matrix)."""
        if self.fine_basis is not None:
            return list(self.fine_basis)
        out = []
        for i in range(self.size):
            for j in range(self.size):
                e = np.zeros((self.size, self.size), dtype=complex)
                e[i, j] = 1.0
                out.append((self.group.sub(self.phi[i], self.phi[j]), e))
        return out

    @cached_property
    def support(self) -> list[Element]:
        return sorted({d for d, _ in self.basis})

    @cached_property
    def _coordinates(self) -> np.ndarray:
        stack = np.array([m.reshape(-1) for _, m in self.basis]).T
        return np.linalg.inv(stack)

    def coordinates(self, a: np.ndarray) -> np.ndarray:
        """Coefficients of a in the homogeneous basis."""
        return self._coordinates @ np.asarray(a, dtype=complex).reshape(-1)

    def from_coordinates(self, c: np.ndarray) -> np.ndarray:
        return sum(ck * m for ck, (_, m) in zip(c, self.basis))

    def components(self, a: np.ndarray) -> dict[Element, np.ndarray]:
        """Homogeneous parts of a, keyed by degree."""
        a = np.asarray(a, dtype=complex)
        if a.shape != (self.size, self.size):
            raise DimensionError(f"matrix shape {a.shape} does not match size {self.size}")
        if self.phi is not None:
            out: dict[Element, np.ndarray] = {}
            for i in range(self.size):
                for j in range(self.size):
                    if a[i, j] != 0:
                        d = self.group.sub(self.phi[i], self.phi[j])
                        out.setdefault(d, np.zeros_like(a))[i, j] = a[i, j]
            return out
        coords = self.coordinates(a)
        out = {}
        for c, (d, m) in zip(coords, self.basis):
            if abs(c) > _NULL_TOL:
                out[d] = out.get(d, 0) + c * m
        return out

    def degree_basis(self, degree: Element) -> list[np.ndarray]:
        degree = self.group.reduce(degree)
        return [m for d, m in self.basis if d == degree]

    def generating_set(self) -> list[tuple[Element, np.ndarray]]:
        """Homogeneous elements generating the algebra."""
        if self.phi is None:
            return self.basis
        out = []
        for i in range(self.size - 1):
            for a, b in ((i, i + 1), (i + 1, i)):
                e = np.zeros((self.size, self.size), dtype=complex)
                e[a, b] = 1.0
                out.append((self.group.sub(self.phi[a], self.phi[b]), e))
        if self.size == 1:
            out.append((self.group.zero, np.eye(1, dtype=complex)))
        return out


def elementary_algebra(factor: CommutationFactor, phi) -> GradedMatrixAlgebra:
    phi = tuple(tuple(p) if not isinstance(p, int) else (p,) for p in phi)
    return GradedMatrixAlgebra(len(phi), factor, phi=phi)


def super_matrix_algebra(m: int, n: int) -> GradedMatrixAlgebra:
    """M(m|n): Z₂ elementary grading with ε(i, j) = (−1)^{ij}."""
    if m < 1 or n < 0:
        raise DomainError(f"need m >= 1 and n >= 0, got ({m}, {n})")
    return elementary_algebra(super_factor(), [(0,)] * m + [(1,)] * n)


def fine_algebra(factor: CommutationFactor, basis: dict[Element, np.ndarray]) -> GradedMatrixAlgebra:
    """Fine grading from one invertible matrix per degree; σ is read off the products."""
    group = factor.group
    mats = {group.reduce(k): np.asarray(v, dtype=complex) for k, v in basis.items()}
    sizes = {m.shape for m in mats.values()}
    if len(sizes) != 1:
        raise DimensionError(f"basis matrices disagree in shape: {sorted(sizes)}")
    (shape,) = sizes
    if shape[0] != shape[1] or len(mats) != shape[0] ** 2:
        raise DimensionError(f"a fine grading of M_{shape[0]} needs {shape[0] ** 2} basis matrices")
    sigma = factor_set_from_matrices(group, mats)
    ordered = tuple(sorted(mats.items()))
    stack = np.array([m.reshape(-1) for _, m in ordered])
    if np.linalg.matrix_rank(stack) < len(ordered):
        raise DomainError("fine basis is linearly dependent")
    return GradedMatrixAlgebra(shape[0], factor, fine_basis=ordered, sigma=sigma)


PAULI = {
    (0, 0): np.eye(2, dtype=complex),
    (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
    (0, 1): np.array([[0, -1j], [1j, 0]], dtype=complex),
    (1, 1): np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_algebra(eps: CommutationFactor | None = None) -> GradedMatrixAlgebra:
    """M₂ with its (Z₂)² fine grading by 1, τ₁, τ₂, τ₃; ε defaults to ε_σ."""
    group = GradingGroup((2, 2))
    if eps is None:
        eps = eps_from_factor_set(factor_set_from_matrices(group, PAULI))
    elif eps.group != group:
        raise DimensionError(f"the Pauli grading needs Z2xZ2, got {eps.group.label()}")
    return fine_algebra(eps, PAULI)


def eps_sigma(algebra: GradedMatrixAlgebra) -> CommutationFactor:
    if algebra.sigma is None:
        raise UnsupportedConfigurationError("ε_σ is defined for fine gradings only")
    return eps_from_factor_set(algebra.sigma)


# ---------------------------------------------------------------------------
# ε-bracket and ε-trace
# ---------------------------------------------------------------------------

def _value(algebra: GradedMatrixAlgebra, i: Element, j: Element) -> complex:
    return algebra.factor(i, j).value


def eps_bracket(a: np.ndarray, b: np.ndarray, algebra: GradedMatrixAlgebra) -> np.ndarray:
    """[a, b]_ε = Σ a_α b_β − ε(α, β) b_β a_α over homogeneous parts."""
    out = np.zeros((algebra.size, algebra.size), dtype=complex)
    parts_b = algebra.components(b)
    for da, pa in algebra.components(a).items():
        for db, pb in parts_b.items():
            out += pa @ pb - _value(algebra, da, db) * (pb @ pa)
    return out


def eps_trace(a: np.ndarray, algebra: GradedMatrixAlgebra) -> complex:
    """Σ ε(φ(i), φ(i)) a_ii."""
    if algebra.phi is None:
        raise UnsupportedConfigurationError("eps_trace is defined for elementary gradings")
    a = np.asarray(a, dtype=complex)
    signs = np.array([_value(algebra, p, p) for p in algebra.phi])
    return complex(np.sum(signs * np.diag(a)))


# ---------------------------------------------------------------------------
# ε-center
# ---------------------------------------------------------------------------

def _normalise(m: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(m).reshape(-1) > _NULL_TOL * np.abs(m).max()))
    out = m / m.reshape(-1)[k]
    out[np.abs(out) < _NULL_TOL] = 0.0
    return out


def center_basis(algebra: GradedMatrixAlgebra) -> list[tuple[Element, np.ndarray]]:
    """Homogeneous basis of the ε-center, degree by degree."""
    if algebra.size > MAX_CENTER_SIZE:
        raise UnsupportedConfigurationError(f"center_basis handles D <= {MAX_CENTER_SIZE}")
    gens = algebra.generating_set()
    out = []
    for d in algebra.support:
        cands = algebra.degree_basis(d)
        columns = []
        for m in cands:
            rows = [(m @ e - _value(algebra, d, de) * (e @ m)).reshape(-1) for de, e in gens]
            columns.append(np.concatenate(rows))
        null = linalg.null_space(np.array(columns).T, rcond=_NULL_TOL)
        for v in null.T:
            out.append((d, _normalise(sum(c * m for c, m in zip(v, cands)))))
    logger.debug("ε-center of the %s algebra (D=%d): dimension %d", algebra.kind, algebra.size, len(out))
    return out


# ---------------------------------------------------------------------------
# ε-derivations
# ---------------------------------------------------------------------------

def _first_witness(x: LinearMap, algebra: GradedMatrixAlgebra, degree: Element,
                   tolerance: float) -> tuple[int, int] | None:
    basis = algebra.basis
    images = [np.asarray(x(m), dtype=complex) for _, m in basis]
    for i, (di, mi) in enumerate(basis):
        target = algebra.group.add(di, degree)
        for dj, part in algebra.components(images[i]).items():
            if dj != target and np.abs(part).max() > tolerance:
                return i, i
        for j, (_, mj) in enumerate(basis):
            lhs = np.asarray(x(mi @ mj), dtype=complex)
            rhs = images[i] @ mj + _value(algebra, degree, di) * (mi @ images[j])
            if np.abs(lhs - rhs).max() > tolerance:
                return i, j
    return None


def _infer_degree(x: LinearMap, algebra: GradedMatrixAlgebra) -> Element:
    for d, m in algebra.basis:
        image = np.asarray(x(m), dtype=complex)
        parts = algebra.components(image)
        if parts:
            top = max(parts, key=lambda k: np.abs(parts[k]).max())
            return algebra.group.sub(top, d)
    return algebra.group.zero


def _ad(m: np.ndarray, degree: Element, algebra: GradedMatrixAlgebra) -> LinearMap:
    def apply(b: np.ndarray) -> np.ndarray:
        out = np.zeros_like(m)
        for db, pb in algebra.components(b).items():
            out += m @ pb - _value(algebra, degree, db) * (pb @ m)
        return out
    return apply


def _matches(x: LinearMap, m: np.ndarray, degree: Element, algebra: GradedMatrixAlgebra, tolerance: float) -> bool:
    ad = _ad(m, degree, algebra)
    return all(np.abs(ad(b) - np.asarray(x(b))).max() <= tolerance for _, b in algebra.basis)


def inner_generator(x: LinearMap, algebra: GradedMatrixAlgebra, degree: Element | None = None,
                    tolerance: float = 1e-10) -> np.ndarray:
    """M with ad_M = X for a homogeneous ε-derivation X."""
    degree = _infer_degree(x, algebra) if degree is None else algebra.group.reduce(degree)
    witness = _first_witness(x, algebra, degree, tolerance)
    if witness is not None:
        i, j = witness
        di, dj = algebra.basis[i][0], algebra.basis[j][0]
        raise DomainError(
            f"not an ε-derivation of degree {degree}: fails on basis pair ({i}, {j}) of degrees ({di}, {dj})"
        )
    size = algebra.size
    if algebra.phi is not None:
        m = np.zeros((size, size), dtype=complex)
        for k in range(size):
            e_k0 = np.zeros((size, size), dtype=complex)
            e_0k = np.zeros((size, size), dtype=complex)
            e_k0[k, 0] = e_0k[0, k] = 1.0
            m += np.asarray(x(e_k0), dtype=complex) @ e_0k
        if _matches(x, m, degree, algebra, tolerance):
            return m
        logger.debug("matrix-unit construction missed degree %s, solving in A^d", degree)
    cands = algebra.degree_basis(degree)
    if not cands:
        raise DomainError(f"degree {degree} is outside the support")
    design = np.array([np.concatenate([_ad(c, degree, algebra)(b).reshape(-1) for _, b in algebra.basis])
                       for c in cands]).T
    target = np.concatenate([np.asarray(x(b), dtype=complex).reshape(-1) for _, b in algebra.basis])
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    m = sum(c * b for c, b in zip(coef, cands))
    if not _matches(x, m, degree, algebra, tolerance):
        raise DomainError(f"the derivation of degree {degree} is not inner")
    return m


def derivation_space(algebra: GradedMatrixAlgebra, degree: Element) -> list[np.ndarray]:
    """Basis of Der^d as matrices acting on basis coordinates."""
    if algebra.size > MAX_DERIVATION_SIZE:
        raise UnsupportedConfigurationError(f"derivation_space handles D <= {MAX_DERIVATION_SIZE}")
    degree = algebra.group.reduce(degree)
    basis = algebra.basis
    n = len(basis)
    unknowns = [(l, k) for k, (dk, _) in enumerate(basis) for l, (dl, _) in enumerate(basis)
                if dl == algebra.group.add(dk, degree)]
    if not unknowns:
        return []
    products = [[basis[i][1] @ basis[j][1] for j in range(n)] for i in range(n)]
    coords = [[algebra.coordinates(products[i][j]) for j in range(n)] for i in range(n)]
    signs = [_value(algebra, degree, d) for d, _ in basis]
    columns = []
    for l, k in unknowns:
        bl = basis[l][1]
        blocks = []
        for i in range(n):
            for j in range(n):
                col = coords[i][j][k] * bl
                if k == i:
                    col = col - bl @ basis[j][1]
                if k == j:
                    col = col - signs[i] * (basis[i][1] @ bl)
                blocks.append(col.reshape(-1))
        columns.append(np.concatenate(blocks))
    null = linalg.null_space(np.array(columns).T, rcond=_NULL_TOL)
    out = []
    for v in null.T:
        xm = np.zeros((n, n), dtype=complex)
        for coef, (l, k) in zip(v, unknowns):
            xm[l, k] = coef
        out.append(xm)
    return out


def as_linear_map(xm: np.ndarray, algebra: GradedMatrixAlgebra) -> LinearMap:
    """The map on matrices whose action on basis coordinates is xm."""
    def apply(a: np.ndarray) -> np.ndarray:
        return algebra.from_coordinates(xm @ algebra.coordinates(a))
    return apply


def _ratio(algebra: GradedMatrixAlgebra, es: CommutationFactor, d: Element, a: Element) -> Phase:
    return algebra.factor(d, a) / es(d, a)


def twisted_radical(algebra: GradedMatrixAlgebra) -> list[Element]:
    """Γ_{ε,ε_σ} ∩ Supp: degrees d with ε(d, α) = ε_σ(d, α) for every α in Supp."""
    es = eps_sigma(algebra)
    return [d for d in algebra.support if all(_ratio(algebra, es, d, a).is_one for a in algebra.support)]


def derivation_coordinates_kind(algebra: GradedMatrixAlgebra, degree: Element,
                                x: dict[Element, complex], tolerance: float = 1e-10) -> str:
    """'inner', 'outer' or 'invalid' for X(e_α) = σ(d, α) x_α e_{α+d}."""
    es = eps_sigma(algebra)
    g = algebra.group
    degree = g.reduce(degree)
    if len(algebra.support) > 16:
        raise UnsupportedConfigurationError("coordinate classification is exhaustive for |Supp| <= 16")
    xs = {g.reduce(k): complex(v) for k, v in x.items()}
    for a in algebra.support:
        for b in algebra.support:
            lhs = xs.get(g.add(a, b), 0.0)
            rhs = xs.get(a, 0.0) + _ratio(algebra, es, degree, a).value * xs.get(b, 0.0)
            if abs(lhs - rhs) > tolerance:
                return "invalid"
    if degree in twisted_radical(algebra):
        return "outer"
    return "inner"


def classify_fine_derivations(algebra: GradedMatrixAlgebra) -> list[DerivationClass]:
    """Der^d for every degree of a fine grading: ad_{e_d} outside Γ_{ε,ε_σ}, zero inside."""
    if algebra.fine_basis is None:
        raise UnsupportedConfigurationError("classify_fine_derivations needs a fine grading")
    radical = set(twisted_radical(algebra))
    finite = algebra.group.is_finite
    out = []
    for d in algebra.support:
        numeric = len(derivation_space(algebra, d)) if algebra.size <= MAX_DERIVATION_SIZE else -1
        if d in radical:
            dim = 0 if finite else -1
            out.append(DerivationClass(degree=list(d), kind="outer", dimension=dim, numeric_dimension=numeric))
        else:
            (e_d,) = algebra.degree_basis(d)
            out.append(DerivationClass(
                degree=list(d), kind="inner", dimension=1,
                generator=[[complex(v) for v in row] for row in e_d], numeric_dimension=numeric,
            ))
        if numeric >= 0 and out[-1].dimension >= 0 and numeric != out[-1].dimension:
            logger.warning("derivation space of degree %s has dimension %d, classifier says %d",
                           d, numeric, out[-1].dimension)
    return out