"""
Vacuum sequences of the induced gauge model.

Two dimensions, u_m = |a_{m−1}|², u₀ = 0:
    (3Ω²−1)(u_m + u_{m+2}) + 2(1+Ω²) u_{m+1} + 2κ = 0

Four dimensions, v_m = |a_{m−1}|², v₀ = 0:
    (3Ω²−1)(m v_m + (m+3) v_{m+2}) + (1+Ω²)(2m+3) v_{m+1} + 2κ = 0

For κ = 0 the four-dimensional sequence has the closed form

    v_{m+1} = (1+Ω²)² v₁ / (4√π Ω²(1−Ω²)) · Γ(3/2)Γ(m+3/2) / (Γ(m/2+3/2)Γ(m/2+2))
              · ((1+Ω²)/(1−3Ω²))^m · ₂F₁(−m/2−½, −m/2−1; −m−½; (1−3Ω²)²/(1+Ω²)²)

where the ₂F₁ terminates and every factor is rational once the √π are
paired off, so both the closed form and the recurrence run in exact
Fraction arithmetic.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

from moyal_lab.config import get_lab_context
from moyal_lab.errors import AccuracyError, DomainError
from moyal_lab.gauge.model import GaugeModel

logger = logging.getLogger(__name__)


class Branch(str, Enum):
    OMEGA0 = "omega0"          # Ω = 0, κ = 0, u_m = αm
    LOW_OMEGA = "low_omega"    # 0 < Ω² < 1/3, r > 1
    ONE_THIRD = "one_third"    # Ω² = 1/3, u_m = −3κ/4
    MID_OMEGA = "mid_omega"    # 1/3 < Ω² < 1, r < −1
    OMEGA_ONE = "omega_one"    # Ω² = 1, alternating
    FOUR_D = "four_d"


@dataclass(frozen=True)
class VacuumSequence:
    model: GaugeModel
    branch: Branch
    u: tuple[float, ...]
    alpha: float | None = None
    v1: float | None = None
    phases: tuple[float, ...] = ()
    exact: tuple[Fraction, ...] | None = None
    flags: tuple[str, ...] = field(default=())
    recurrence_defect: float = 0.0

    @property
    def dim(self) -> int:
        return 4 if self.branch is Branch.FOUR_D else 2

    def phase(self, m: int) -> float:
        return self.phases[m] if m < len(self.phases) else 0.0


def characteristic_root(omega2: float) -> float:
    """r = (1+Ω²+√(8Ω²(1−Ω²)))/(1−3Ω²); r and 1/r solve (3Ω²−1)(1+r²) + 2(1+Ω²)r = 0."""
    if abs(1.0 - 3.0 * omega2) < 1e-15:
        raise DomainError("the characteristic root is undefined at omega2 = 1/3")
    return (1.0 + omega2 + math.sqrt(8.0 * omega2 * (1.0 - omega2))) / (1.0 - 3.0 * omega2)


def recurrence_residual_2d(u, model: GaugeModel) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    w, k = model.omega2, model.kappa
    return (3.0 * w - 1.0) * (u[:-2] + u[2:]) + 2.0 * (1.0 + w) * u[1:-1] + 2.0 * k


def _is(value: float, target: float) -> bool:
    return abs(value - target) <= 1e-14


def classify_branch(omega2: float) -> Branch:
    if _is(omega2, 0.0):
        return Branch.OMEGA0
    if _is(omega2, 1.0 / 3.0):
        return Branch.ONE_THIRD
    if _is(omega2, 1.0):
        return Branch.OMEGA_ONE
    return Branch.LOW_OMEGA if omega2 < 1.0 / 3.0 else Branch.MID_OMEGA


def vacuum_sequence_2d(model: GaugeModel, alpha: float = 0.0, m_max: int = 50,
                       phases=None, allow_growing: bool = False,
                       tolerance: float | None = None) -> VacuumSequence:
    """u_0..u_{m_max} on the branch selected by Ω²."""
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    if m_max < 2:
        raise DomainError("m_max must be >= 2")
    tolerance = get_lab_context().tolerances.exact if tolerance is None else tolerance
    w, kappa = model.omega2, model.kappa
    branch = classify_branch(w)
    m = np.arange(m_max + 1, dtype=float)

    if branch is not Branch.OMEGA0 and branch is not Branch.LOW_OMEGA and alpha != 0.0:
        raise DomainError(f"alpha is not a free parameter on the {branch.value} branch")
    if branch is Branch.OMEGA0:
        if kappa != 0.0:
            raise DomainError("omega2 = 0 requires kappa = 0")
        u = alpha * m
    elif branch is Branch.LOW_OMEGA:
        if alpha != 0.0 and not allow_growing:
            raise DomainError("0 < omega2 < 1/3 requires alpha = 0 (the growing mode leaves the Moyal algebra); "
                              "pass allow_growing to override")
        r = characteristic_root(w)
        u = alpha * (r**m - r**-m) - kappa / (4.0 * w) * (1.0 - r**-m)
    elif branch is Branch.ONE_THIRD:
        if kappa > 0:
            raise DomainError("omega2 = 1/3 requires kappa <= 0")
        u = np.where(m > 0, -0.75 * kappa, 0.0)
    elif branch is Branch.MID_OMEGA:
        if kappa > 0:
            raise DomainError("1/3 < omega2 < 1 requires kappa <= 0")
        r = characteristic_root(w)
        u = -kappa / (4.0 * w) * (1.0 - r**-m)
    else:
        if kappa > 0:
            raise DomainError("omega2 = 1 requires kappa <= 0")
        u = -kappa / 4.0 * (1.0 - (-1.0) ** m)

    scale = max(1.0, float(np.abs(u).max()), abs(kappa))
    if np.any(u < -tolerance * scale):
        raise DomainError(f"branch {branch.value} yields negative u_m for kappa={kappa}, alpha={alpha}")
    defect = float(np.abs(recurrence_residual_2d(u, model)).max()) / scale
    if defect > tolerance * 10:
        raise AccuracyError("2D vacuum sequence violates its recurrence", estimate=defect, tolerance=tolerance)
    logger.debug("2D vacuum: branch=%s kappa=%g alpha=%g defect=%.2e", branch.value, kappa, alpha, defect)
    xi = tuple(float(x) for x in (np.zeros(m_max) if phases is None else phases))
    return VacuumSequence(model, branch, tuple(float(x) for x in u), alpha=alpha,
                          phases=xi, recurrence_defect=defect)


# ---------------------------------------------------------------------------
# Four dimensions
# ---------------------------------------------------------------------------

def as_fraction(x) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or float (via its repr)."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if not math.isfinite(x):
        raise DomainError(f"non-finite value {x!r}")
    return Fraction(repr(float(x)))


def _gamma(x: Fraction) -> tuple[Fraction, int]:
    """Γ(x) = q·√π^k for positive integers (k=0) and half-integers (k=1)."""
    if x.denominator == 1:
        return Fraction(math.factorial(x.numerator - 1)), 0
    if x.denominator == 2:
        n = (x.numerator - 1) // 2  # x = n + 1/2
        return Fraction(math.factorial(2 * n), 4**n * math.factorial(n)), 1
    raise DomainError(f"gamma at {x} is not needed here")


def _gamma_ratio(m: int) -> Fraction:
    """Γ(3/2)Γ(m+3/2) / (√π Γ(m/2+3/2) Γ(m/2+2)), rational."""
    num = Fraction(1)
    sqrt_pi = -1
    for x in (Fraction(3, 2), Fraction(2 * m + 3, 2)):
        q, k = _gamma(x)
        num *= q
        sqrt_pi += k
    for x in (Fraction(m + 3, 2), Fraction(m + 4, 2)):
        q, k = _gamma(x)
        num /= q
        sqrt_pi -= k
    assert sqrt_pi == 0
    return num


def hyp2f1_terminating(a: Fraction, b: Fraction, c: Fraction, z: Fraction) -> Fraction:
    """₂F₁(a, b; c; z) when a or b is a non-positive integer."""
    stops = [-p for p in (a, b) if p.denominator == 1 and p <= 0]
    if not stops:
        raise DomainError("hypergeometric series does not terminate")
    total = term = Fraction(1)
    for k in range(int(min(stops))):
        term = term * (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        total += term
    return total


def closed_form_4d(omega2, v1, m_max: int) -> list[Fraction]:
    """v_0..v_{m_max} from the hypergeometric form (κ = 0)."""
    w, v1 = as_fraction(omega2), as_fraction(v1)
    if w in (0, 1, Fraction(1, 3)):
        raise DomainError(f"closed form is singular at omega2 = {w}")
    pref = (1 + w) ** 2 * v1 / (4 * w * (1 - w))
    ratio = (1 + w) / (1 - 3 * w)
    z = ((1 - 3 * w) / (1 + w)) ** 2
    out = [Fraction(0)]
    for m in range(m_max):
        f = hyp2f1_terminating(Fraction(-m - 1, 2), Fraction(-m - 2, 2), Fraction(-2 * m - 1, 2), z)
        out.append(pref * _gamma_ratio(m) * ratio**m * f)
    return out


def recurrence_4d(omega2, kappa, v1, m_max: int) -> list[Fraction]:
    w, k, v1 = as_fraction(omega2), as_fraction(kappa), as_fraction(v1)
    v = [Fraction(0), v1]
    for m in range(m_max - 1):
        v.append(-((1 + w) * (2 * m + 3) * v[m + 1] + (3 * w - 1) * m * v[m] + 2 * k) / ((3 * w - 1) * (m + 3)))
    return v[: m_max + 1]


def vacuum_sequence_4d(model: GaugeModel, v1: float, m_max: int = 30,
                       phases=None, tolerance: float | None = None) -> VacuumSequence:
    """v_0..v_{m_max} at κ = 0, closed form cross-checked against the recurrence."""
    if model.kappa != 0:
        raise DomainError("the four-dimensional solver covers kappa = 0 only")
    if v1 < 0:
        raise DomainError(f"v1 must be >= 0, got {v1}")
    if m_max < 1:
        raise DomainError("m_max must be >= 1")
    tolerance = 1e-10 if tolerance is None else tolerance
    w = as_fraction(model.omega2)
    special = {Branch.OMEGA0: Fraction(0), Branch.ONE_THIRD: Fraction(1, 3), Branch.OMEGA_ONE: Fraction(1)}
    w = special.get(classify_branch(model.omega2), w)
    flags: list[str] = []

    if w == Fraction(1, 3):
        if v1 != 0:
            raise DomainError("omega2 = 1/3 admits only v1 = 0 at kappa = 0")
        values = [Fraction(0)] * (m_max + 1)
        defect = 0.0
    elif w in (0, 1):
        values = recurrence_4d(w, 0, v1, m_max)
        flags.append(f"closed form singular at omega2={w}; recurrence only")
        defect = 0.0
    else:
        values = closed_form_4d(w, v1, m_max)
        check = recurrence_4d(w, 0, v1, m_max)
        defect = 0.0
        for a, b in zip(values, check):
            scale = max(abs(a), abs(b))
            if scale:
                defect = max(defect, float(abs(a - b) / scale))
        if defect > tolerance:
            raise AccuracyError("4D closed form disagrees with the recurrence", estimate=defect, tolerance=tolerance)

    negative = [m for m, x in enumerate(values) if x < 0]
    if negative:
        flags.append(f"negative v_m at m={negative}")
        logger.warning("4D vacuum sequence has negative entries at m=%s (omega2=%s)", negative, w)
    xi = tuple(float(x) for x in (np.zeros(m_max) if phases is None else phases))
    return VacuumSequence(
        model, Branch.FOUR_D, tuple(float(x) for x in values), v1=float(v1), phases=xi,
        exact=tuple(values), flags=tuple(flags), recurrence_defect=defect,
    )
