"""
Divergent one-loop coefficients T₁ … T₄''' in the operator basis.

Every entry is a rational function of w = Ω², m² and θ times 1/π²,
kept exact in sympy and evaluated to floats only for reports.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy as sp

from moyal_lab.errors import DomainError
from moyal_lab.models import DivergencePair, DivergenceTableReport

logger = logging.getLogger(__name__)

w, m2, theta = sp.symbols("w m2 theta", positive=True)
pi = sp.pi

# Operator basis of the effective action (D = 4, integrals over u implied).
TAGS: tuple[str, ...] = (
    "ũA",          # ũ_μ A_μ
    "A²",          # A_μ ⋆ A_μ
    "u²A²",        # u² A_μ A_μ
    "u²ũA",        # u² ũ_μ A_μ
    "(ũA)²",       # (ũ_μ A_μ)²
    "A∂²A",        # A_μ ∂² A_μ
    "(∂A)²",       # (∂_μ A_μ)²
    "ũA{A,A}",     # ũ_μ A_ν {A_μ, A_ν}
    "∂A[A,A]",     # (−i∂_μ A_ν)[A_μ, A_ν]
    "(AA)²-sym",   # A_μ⋆A_μ⋆A_ν⋆A_ν
    "(AA)²-alt",   # A_μ⋆A_ν⋆A_μ⋆A_ν
)

CONTRIBUTIONS: tuple[str, ...] = ("T1", "T2p", "T2pp", "T3p", "T3pp", "T4p", "T4pp", "T4ppp")

Pair = tuple[sp.Expr, sp.Expr]

_TAG_KEYS = {
    "uA": "ũA", "A2": "A²", "u2A2": "u²A²", "u2uA": "u²ũA", "uA_2": "(ũA)²",
    "AddA": "A∂²A", "dA_2": "(∂A)²", "uAAA": "ũA{A,A}", "dAAA": "∂A[A,A]",
    "sym": "(AA)²-sym", "alt": "(AA)²-alt",
}

def _pairs(**by_tag: Pair) -> dict[str, Pair]:
    return {_TAG_KEYS[k]: v for k, v in by_tag.items()}

@lru_cache(maxsize=1)
def symbolic_divergence_table() -> dict[str, dict[str, Pair]]:
    """(1/ε, ln ε) coefficients as sympy expressions in w = Ω², m2, theta."""
    zero = sp.Integer(0)
    p = 1 + w
    q = 1 - w
    mid = 1 + 4 * w + w**2
    t4p = -q**4 / (96 * pi**2 * p**4)
    # ∫∂A[A,A] = i·∫(−i∂A)[A,A], so the printed i·w/(8π²(1+w)²) becomes −w/(8π²(1+w)²)
    t3pp_comm = sp.I * sp.I * w / (8 * pi**2 * p**2)
    return {
        "T1": _pairs(
            uA=(-w / (4 * pi**2 * p**3), -m2 * w / (4 * pi**2 * p**3)),
            u2uA=(zero, -w**2 / (pi**2 * theta**2 * p**4)),
        ),
        "T2p": _pairs(
            A2=(q**2 / (16 * pi**2 * p**3), m2 * q**2 / (16 * pi**2 * p**3)),
            u2A2=(zero, w * q**2 / (4 * pi**2 * theta**2 * p**4)),
            uA_2=(zero, -w**2 / (2 * pi**2 * p**4)),
            AddA=(zero, -q**2 * mid / (96 * pi**2 * p**4)),
            dA_2=(zero, -q**4 / (96 * pi**2 * p**4)),
        ),
        "T2pp": _pairs(
            A2=(-1 / (16 * pi**2 * p), -m2 / (16 * pi**2 * p)),
            u2A2=(zero, -w / (4 * pi**2 * theta**2 * p**2)),
            AddA=(zero, w / (16 * pi**2 * p**2)),
        ),
        "T3p": _pairs(
            uAAA=(zero, w * q**2 / (8 * pi**2 * p**4)),
            dAAA=(zero, q**2 * mid / (48 * pi**2 * p**4)),
        ),
        "T3pp": _pairs(
            uAAA=(zero, -w / (8 * pi**2 * p**2)),
            dAAA=(zero, t3pp_comm),
        ),
        # (A_μ⋆A_ν)² + 2(A_μ⋆A_ν)² read as 2·sym + alt
        "T4p": _pairs(sym=(zero, 2 * t4p), alt=(zero, t4p)),
        "T4pp": _pairs(sym=(zero, q**2 / (16 * pi**2 * p**2))),
        "T4ppp": _pairs(sym=(zero, -1 / (32 * pi**2))),
    }

def exact(x) -> sp.Rational:
    """Exact rational from an int, Fraction, decimal string or float (via its repr)."""
    if isinstance(x, Fraction):
        return sp.Rational(x.numerator, x.denominator)
    if isinstance(x, float):
        return sp.Rational(repr(x))
    return sp.Rational(x)

@dataclass(frozen=True)
class DivergenceTable:
    omega: float
    m2: float
    theta: float
    entries: dict[str, dict[str, Pair]]

    def pair(self, contribution: str, tag: str) -> Pair:
        zero = sp.Integer(0)
        return self.entries.get(contribution, {}).get(tag, (zero, zero))

    def total(self, tag: str) -> Pair:
        """Σ over contributions of the (1/ε, ln ε) coefficients of one operator."""
        inv = sum((self.pair(c, tag)[0] for c in CONTRIBUTIONS), sp.Integer(0))
        log = sum((self.pair(c, tag)[1] for c in CONTRIBUTIONS), sp.Integer(0))
        return sp.simplify(inv), sp.simplify(log)

    def value(self, contribution: str, tag: str) -> tuple[float, float]:
        inv, log = self.pair(contribution, tag)
        return float(inv), float(log)

    def to_report(self) -> DivergenceTableReport:
        return DivergenceTableReport(
            omega=self.omega,
            m2=self.m2,
            theta=self.theta,
            entries={
                c: {
                    tag: DivergencePair(
                        inv_eps=float(inv), log_eps=float(log),
                        exact_inv_eps=str(inv), exact_log_eps=str(log),
                    )
                    for tag, (inv, log) in row.items()
                }
                for c, row in self.entries.items()
            },
        )

def divergent_coefficients(omega, m2_value=0.0, theta_value=1.0) -> DivergenceTable:
    """Evaluate every printed coefficient exactly at (Ω, m², θ)."""
    omega_q = exact(omega)
    if not 0 < omega_q <= 1:
        raise DomainError(f"omega must lie in (0, 1], got {omega}")
    if exact(theta_value) <= 0:
        raise DomainError(f"theta must be positive, got {theta_value}")
    subs = {w: omega_q**2, m2: exact(m2_value), theta: exact(theta_value)}
    entries = {
        c: {tag: (sp.simplify(inv.subs(subs)), sp.simplify(log.subs(subs))) for tag, (inv, log) in row.items()}
        for c, row in symbolic_divergence_table().items()
    }
    logger.debug("divergence table at omega=%s m2=%s theta=%s", omega, m2_value, theta_value)
    return DivergenceTable(float(omega), float(m2_value), float(theta_value), entries)
