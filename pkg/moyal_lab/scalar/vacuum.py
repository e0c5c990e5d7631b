"""
Vacuum configurations of the harmonic scalar model at the self-dual point.

At Ω = 1 the kinetic operator is diagonal and the equation of motion
(Δφ) + 4λ φ⋆φ⋆φ = 0 is solved by diagonal fields φ = Σ_k a_k b_{kk} with

    a_k² = (1/λθ)(μ²θ/4 − D/2 − 2|k|)   for |k| ≤ p,   a_k = 0 otherwise,

p being the largest level with a_k² ≥ 0.  Here μ² is the broken-phase mass:
the model's μ² when ``broken_phase`` is set, −μ² otherwise.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from moyal_lab.config import get_lab_context
from moyal_lab.errors import DimensionError, DomainError, UnsupportedConfigurationError
from moyal_lab.models import InstabilityReport, SigmaEntry, SigmaSpectrum, StabilityReport
from moyal_lab.moyal.algebra import interior_defect
from moyal_lab.moyal.params import Field, index_norms, multi_indices
from moyal_lab.scalar.model import ScalarModel, apply_kinetic, gw_action

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VacuumScalar:
    model: ScalarModel
    p: int
    a: tuple[float, ...]  # a_k for |k| = 0..p

    def amplitude(self, level: int) -> float:
        return self.a[level] if 0 <= level <= self.p else 0.0


def _require_self_dual(model: ScalarModel, what: str) -> None:
    if model.omega != 1.0:
        raise UnsupportedConfigurationError(f"{what} needs omega = 1, got {model.omega}")


def broken_mass(model: ScalarModel) -> float:
    return -model.mass_term


def floor_index(model: ScalarModel) -> int:
    """p = ⌊(μ²θ/4 − D/2)/2⌋, negative when the zero field is the only vacuum."""
    return math.floor((broken_mass(model) * model.theta / 4.0 - model.params.pairs) / 2.0)


def scalar_vacuum(model: ScalarModel, signs: tuple[int, ...] | None = None) -> VacuumScalar:
    """Diagonal minimum with a_k ≥ 0 unless ``signs`` (one ±1 per level) says otherwise."""
    _require_self_dual(model, "scalar_vacuum")
    p = floor_index(model)
    if p < 0:
        logger.info("p = %d: the zero field is the vacuum", p)
        return VacuumScalar(model, p, ())
    if signs is None:
        signs = (1,) * (p + 1)
    if len(signs) != p + 1 or any(s not in (1, -1) for s in signs):
        raise DomainError(f"signs must be {p + 1} values of +1/-1")
    c = broken_mass(model) * model.theta / 4.0 - model.params.pairs
    a = []
    for k in range(p + 1):
        sq = max(0.0, (c - 2.0 * k) / (model.lam * model.theta))
        a.append(signs[k] * math.sqrt(sq))
    logger.debug("scalar vacuum: p=%d a^2=%s", p, [x * x for x in a])
    return VacuumScalar(model, p, tuple(a))


def vacuum_field(v: VacuumScalar, trunc: int) -> Field:
    """Σ_{|k|≤p} a_k b_{kk} as a truncated Field."""
    if v.p >= 0 and trunc <= v.p:
        raise DimensionError(f"trunc={trunc} cannot hold the vacuum up to level p={v.p}")
    norms = index_norms(trunc, v.model.dim).astype(int)
    return Field(v.model.params, trunc, np.diag([v.amplitude(n) for n in norms]))


def vacuum_action(v: VacuumScalar) -> float:
    """S[v] = −(2πθ)^{D/2} λ Σ_k a_k⁴, summed over multi-indices k."""
    model = v.model
    total = 0.0
    for level, amp in enumerate(v.a):
        total += math.comb(level + model.params.pairs - 1, model.params.pairs - 1) * amp**4
    return -((2.0 * math.pi * model.theta) ** model.params.pairs) * model.lam * total


def scalar_eom_residual(f: Field, model: ScalarModel) -> Field:
    """(Δφ) + 4λ φ⋆φ⋆φ at Ω = 1, entrywise."""
    _require_self_dual(model, "scalar_eom_residual")
    return apply_kinetic(f, model) + 4.0 * model.lam * (f @ f @ f)


# ---------------------------------------------------------------------------
# Stability
# ---------------------------------------------------------------------------

def _inverse_propagator(model: ScalarModel, trunc: int, amplitudes: np.ndarray) -> np.ndarray:
    norms = index_norms(trunc, model.dim)
    pref = (2.0 * math.pi * model.theta) ** model.params.pairs / 2.0
    base = (4.0 / model.theta) * (norms[:, None] + norms[None, :] + model.params.pairs) - broken_mass(model)
    a = amplitudes
    cubic = 4.0 * model.lam * (a[:, None] ** 2 + a[None, :] ** 2 + a[:, None] * a[None, :])
    return pref * (base + cubic)


def vacuum_stability(v: VacuumScalar, trunc: int, tolerance: float | None = None) -> StabilityReport:
    """C⁻¹_{mn} around the vacuum; the D = 4 scan is heuristic."""
    model = v.model
    _require_self_dual(model, "vacuum_stability")
    tolerance = get_lab_context().tolerances.exact if tolerance is None else tolerance
    heuristic = model.dim != 2
    if heuristic:
        logger.warning("vacuum_stability in dim=4 is heuristic: minimality is only established in dim=2")
    norms = index_norms(trunc, model.dim).astype(int)
    amps = np.array([v.amplitude(n) for n in norms])
    values = _inverse_propagator(model, trunc, amps)
    scale = max(1.0, float(np.abs(values).max()))
    degenerate = np.argwhere(np.abs(values) <= tolerance * scale)
    idx = multi_indices(trunc, model.dim)
    flat_min = int(np.argmin(values))
    i, j = divmod(flat_min, values.shape[1])
    positive = bool(np.all((values > tolerance * scale) | (np.abs(values) <= tolerance * scale)))
    return StabilityReport(
        p=v.p,
        trunc=trunc,
        values=values.tolist(),
        min_value=float(values[i, j]),
        min_index=[list(idx[i]), list(idx[j])],
        degenerate=[[list(idx[a]), list(idx[b])] for a, b in degenerate],
        all_positive=positive,
        heuristic=heuristic,
        action=vacuum_action(v),
    )


def zero_field_instabilities(model: ScalarModel, trunc: int) -> InstabilityReport:
    """Negative α_{mn} around φ = 0 in the window m ≤ p, n ≤ 2p − m."""
    _require_self_dual(model, "zero_field_instabilities")
    p = floor_index(model)
    values = _inverse_propagator(model, trunc, np.zeros(trunc ** model.params.pairs))
    norms = index_norms(trunc, model.dim).astype(int)
    idx = multi_indices(trunc, model.dim)
    found = []
    for a, b in np.argwhere(values < 0):
        if norms[a] <= p and norms[b] <= 2 * p - norms[a]:
            found.append({"m": list(idx[a]), "n": list(idx[b]), "alpha": float(values[a, b])})
    return InstabilityReport(p=p, negative=found, unstable=bool(found))


def sigma_quadratic_spectrum(v: VacuumScalar, trunc: int) -> SigmaSpectrum:
    """(2/θ)(|m|+|n|+D/2−μ²θ/4) for |m| > p, reported as computed."""
    model = v.model
    _require_self_dual(model, "sigma_quadratic_spectrum")
    norms = index_norms(trunc, model.dim).astype(int)
    idx = multi_indices(trunc, model.dim)
    shift = model.params.pairs - broken_mass(model) * model.theta / 4.0
    entries = [
        SigmaEntry(m=list(idx[a]), n=list(idx[b]), value=(2.0 / model.theta) * (norms[a] + norms[b] + shift))
        for a in range(len(idx)) if norms[a] > v.p
        for b in range(len(idx))
    ]
    masked = [list(idx[a]) for a in range(len(idx)) if norms[a] <= v.p]
    return SigmaSpectrum(p=v.p, entries=entries, masked=masked)


def check_vacuum(v: VacuumScalar, trunc: int, margin: int | None = None) -> dict[str, float]:
    """EOM residual (interior) and |gw_action − S[v]| for a vacuum."""
    margin = get_lab_context().margin if margin is None else margin
    f = vacuum_field(v, trunc)
    residual = scalar_eom_residual(f, v.model)
    zero = Field.zeros(f.params, trunc)
    return {
        "eom_residual": interior_defect(residual, zero, margin),
        "action_defect": abs(gw_action(f, v.model) - vacuum_action(v)),
    }
