"""
Induced gauge action in covariant coordinates.

With 𝒜_μ = A_μ + ½x̃_μ and, in two dimensions, Z = (𝒜₁ + i𝒜₂)/√2 the
action (coupling set to 1, constants dropped) reads

    S = ∫ −¼[𝒜_μ, 𝒜_ν]² + (Ω²/4){𝒜_μ, 𝒜_ν}² + κ 𝒜_μ𝒜_μ
      = ∫ (3Ω²−1) ZZZ†Z† + (1+Ω²) ZZ†ZZ† + 2κ ZZ†

and the equation of motion is

    (3Ω²−1)(Z†ZZ + ZZZ†) + 2(1+Ω²) ZZ†Z + 2κ Z = 0.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from moyal_lab.config import get_lab_context
from moyal_lab.errors import DimensionError, DomainError
from moyal_lab.models import GaugeActionForms, HessianProbe
from moyal_lab.moyal.algebra import anticommutator, commutator, integral
from moyal_lab.moyal.params import Field, MoyalParams, multi_indices

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GaugeModel:
    params: MoyalParams
    omega2: float
    kappa: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.omega2 <= 1.0:
            raise DomainError(f"omega2 must lie in [0, 1], got {self.omega2!r}")
        if not math.isfinite(self.kappa):
            raise DomainError(f"kappa must be finite, got {self.kappa!r}")


@dataclass(frozen=True)
class CovariantField2D:
    Z: Field

    def __post_init__(self) -> None:
        if self.Z.params.dim != 2:
            raise DimensionError("CovariantField2D needs a dim = 2 field")

    @property
    def Zd(self) -> Field:
        return self.Z.dagger

    @classmethod
    def from_coordinates(cls, a1: Field, a2: Field) -> "CovariantField2D":
        return cls((a1 + 1j * a2) * (1.0 / math.sqrt(2.0)))


def covariant_coordinates(z: CovariantField2D) -> tuple[Field, Field]:
    """(𝒜₁, 𝒜₂) = ((Z+Z†)/√2, (Z−Z†)/(i√2))."""
    s = 1.0 / math.sqrt(2.0)
    return (z.Z + z.Zd) * s, (z.Z - z.Zd) * (-1j * s)


def gauge_action_2d(z: CovariantField2D, model: GaugeModel) -> float:
    Z, Zd = z.Z, z.Zd
    w = model.omega2
    zzd = Z @ Zd
    density = (3.0 * w - 1.0) * (Z @ Z @ Zd @ Zd) + (1.0 + w) * (zzd @ zzd) + 2.0 * model.kappa * zzd
    return float(integral(density).real)


def gauge_eom_residual_2d(z: CovariantField2D, model: GaugeModel) -> Field:
    Z, Zd = z.Z, z.Zd
    w = model.omega2
    return (3.0 * w - 1.0) * (Zd @ Z @ Z + Z @ Z @ Zd) + 2.0 * (1.0 + w) * (Z @ Zd @ Z) + 2.0 * model.kappa * Z


def gauge_action_forms(z: CovariantField2D, model: GaugeModel) -> GaugeActionForms:
    """The action by the Z form, the commutator form and the expansion around 𝒜 = 0."""
    coords = covariant_coordinates(z)
    w = model.omega2
    comm = 0.0 + 0.0j
    p_term = 0.0 + 0.0j
    q_term = 0.0 + 0.0j
    mass = 0.0 + 0.0j
    for a in coords:
        mass += integral(a @ a)
        for b in coords:
            c = commutator(a, b)
            ac = anticommutator(a, b)
            comm += -0.25 * integral(c @ c) + 0.25 * w * integral(ac @ ac)
            p_term += integral(a @ a @ b @ b)
            q_term += integral(a @ b @ a @ b)
    kappa = model.kappa
    return GaugeActionForms(
        z_form=gauge_action_2d(z, model),
        commutator_form=float((comm + kappa * mass).real),
        expanded_form=float((kappa * mass + 0.5 * (1.0 + w) * p_term - 0.5 * (1.0 - w) * q_term).real),
    )


# ---------------------------------------------------------------------------
# Bidiagonal vacua
# ---------------------------------------------------------------------------

def _phases(phases, count: int) -> np.ndarray:
    if phases is None:
        return np.zeros(count)
    arr = np.asarray(phases, dtype=float)
    if arr.shape[0] < count:
        raise DimensionError(f"need {count} phases, got {arr.shape[0]}")
    return arr[:count]


def bidiagonal_field(u, trunc: int, params: MoyalParams, phases=None) -> CovariantField2D:
    """Z_{m,m+1} = −i e^{iξ_m} √u_{m+1} for m < trunc − 1."""
    u = np.asarray([float(x) for x in u])
    if u.shape[0] < trunc:
        raise DimensionError(f"sequence of length {u.shape[0]} cannot fill trunc={trunc}")
    if np.any(u[1:trunc] < 0):
        raise DomainError("bidiagonal vacuum needs u_m >= 0")
    xi = _phases(phases, trunc - 1)
    out = np.zeros((trunc, trunc), dtype=complex)
    for m in range(trunc - 1):
        out[m, m + 1] = -1j * np.exp(1j * xi[m]) * math.sqrt(u[m + 1])
    return CovariantField2D(Field(params, trunc, out))


def bidiagonal_fields_4d(v, trunc: int, params: MoyalParams, phases=None) -> tuple[Field, Field]:
    """(Z₁, Z₂) with (Z_j)_{m, m+e_j} = −i e^{iξ_{|m|}} √v_{|m|+1} √(m_j+1)."""
    if params.dim != 4:
        raise DimensionError("bidiagonal_fields_4d needs dim = 4 params")
    v = np.asarray([float(x) for x in v])
    top = 2 * (trunc - 1) + 1
    if v.shape[0] <= top:
        raise DimensionError(f"sequence of length {v.shape[0]} cannot fill trunc={trunc}")
    if np.any(v[1: top + 1] < 0):
        raise DomainError("bidiagonal vacuum needs v_m >= 0")
    xi = _phases(phases, top)
    size = trunc * trunc
    z1 = np.zeros((size, size), dtype=complex)
    z2 = np.zeros((size, size), dtype=complex)
    for m1, m2 in multi_indices(trunc, 4):
        level = m1 + m2
        amp = -1j * np.exp(1j * xi[level]) * math.sqrt(v[level + 1])
        row = m1 * trunc + m2
        if m1 + 1 < trunc:
            z1[row, (m1 + 1) * trunc + m2] = amp * math.sqrt(m1 + 1)
        if m2 + 1 < trunc:
            z2[row, m1 * trunc + m2 + 1] = amp * math.sqrt(m2 + 1)
    return Field(params, trunc, z1), Field(params, trunc, z2)


# ---------------------------------------------------------------------------
# Minimality probe
# ---------------------------------------------------------------------------

def hessian_probe(z: CovariantField2D, model: GaugeModel, directions: int = 8,
                  step: float = 1e-4, seed: int | None = None, margin: int | None = None) -> HessianProbe:
    """Second differences of the action along random interior directions."""
    ctx = get_lab_context()
    seed = ctx.seed if seed is None else seed
    margin = ctx.margin if margin is None else margin
    rng = np.random.default_rng(seed)
    trunc = z.Z.trunc
    inner = max(trunc - margin, 1)
    base = gauge_action_2d(z, model)
    curvatures = []
    for _ in range(directions):
        d = np.zeros((trunc, trunc), dtype=complex)
        d[:inner, :inner] = rng.normal(size=(inner, inner)) + 1j * rng.normal(size=(inner, inner))
        d /= np.linalg.norm(d)
        plus = CovariantField2D(z.Z.with_coeffs(z.Z.coeffs + step * d))
        minus = CovariantField2D(z.Z.with_coeffs(z.Z.coeffs - step * d))
        curv = (gauge_action_2d(plus, model) + gauge_action_2d(minus, model) - 2.0 * base) / step**2
        curvatures.append(float(curv))
    logger.warning("hessian_probe is heuristic: %d random directions, min curvature %.3e",
                   directions, min(curvatures))
    return HessianProbe(
        action=base,
        curvatures=curvatures,
        min_curvature=min(curvatures),
        step=step,
        seed=seed,
        heuristic=True,
    )
