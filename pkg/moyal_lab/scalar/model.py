"""
Harmonic scalar model on the Moyal plane in the matrix basis.

    S[φ] = (2πθ)^{D/2} [ ½ tr(φ Δφ) + λ tr(φ⁴) ]

The kinetic operator acts on coefficient matrices as

    (Δφ)_{ab} = d(a, b) φ_{ab}
                − (2(1−Ω²)/θ) Σ_j [ √((a_j+1)(b_j+1)) φ_{a+e_j, b+e_j} + √(a_j b_j) φ_{a−e_j, b−e_j} ]
    d(a, b)   = ±μ² + (2/θ)(1+Ω²)(|a| + |b| + D/2)

with the minus sign on μ² in the broken phase.  With the ladder matrix A_j
of the j-th coordinate pair the bands are A_j φ A_jᵀ and A_jᵀ φ A_j.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from moyal_lab.config import get_lab_context
from moyal_lab.errors import DomainError
from moyal_lab.moyal.algebra import integral
from moyal_lab.moyal.params import Field, MoyalParams, index_norms

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScalarModel:
    params: MoyalParams
    omega: float
    mu2: float
    lam: float
    broken_phase: bool = False

    def __post_init__(self) -> None:
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise DomainError(f"coupling lambda must be > 0, got {self.lam!r}")
        if not (self.omega >= 0 and math.isfinite(self.omega)):
            raise DomainError(f"omega must be >= 0, got {self.omega!r}")
        if not math.isfinite(self.mu2):
            raise DomainError(f"mu2 must be finite, got {self.mu2!r}")

    @property
    def mass_term(self) -> float:
        """Coefficient of φ² in the quadratic form (−μ² in the broken phase)."""
        return -self.mu2 if self.broken_phase else self.mu2

    @property
    def theta(self) -> float:
        return self.params.theta

    @property
    def dim(self) -> int:
        return self.params.dim


def ladder_operators(trunc: int, params: MoyalParams) -> list[np.ndarray]:
    """A_j with (A_j)_{m, m+e_j} = √(m_j + 1), one per coordinate pair."""
    a = np.diag(np.sqrt(np.arange(1, trunc, dtype=float)), k=1)
    if params.pairs == 1:
        return [a]
    eye = np.eye(trunc)
    return [np.kron(a, eye), np.kron(eye, a)]


def kinetic_diagonal(model: ScalarModel, trunc: int) -> np.ndarray:
    """d(a, b) as a matrix over flat indices."""
    norms = index_norms(trunc, model.dim)
    scale = (2.0 / model.theta) * (1.0 + model.omega**2)
    return model.mass_term + scale * (norms[:, None] + norms[None, :] + model.params.pairs)


def apply_kinetic(f: Field, model: ScalarModel) -> Field:
    """Δφ on the truncated coefficient matrix."""
    if f.params != model.params:
        raise DomainError("field params differ from model params")
    phi = f.coeffs
    out = kinetic_diagonal(model, f.trunc) * phi
    band = 2.0 * (1.0 - model.omega**2) / model.theta
    if band:
        for a in ladder_operators(f.trunc, model.params):
            out = out - band * (a @ phi @ a.T + a.T @ phi @ a)
    return f.with_coeffs(out)


def kinetic_matrix(model: ScalarModel, trunc: int) -> np.ndarray:
    """Dense Δ_{mn,kl} over flat pairs, with Σ_{kl} Δ_{mn,kl} φ_{kl} = (Δφ)_{nm}."""
    size = trunc ** model.params.pairs
    out = np.zeros((size * size, size * size))
    unit = np.zeros((size, size))
    for k in range(size):
        for l in range(size):
            unit[k, l] = 1.0
            image = apply_kinetic(Field(model.params, trunc, unit), model).coeffs.real
            out[:, k * size + l] = image.T.reshape(-1)
            unit[k, l] = 0.0
    return out


def gw_action(f: Field, model: ScalarModel, tolerance: float | None = None) -> float:
    """Matrix-basis action of a Hermitian field."""
    tolerance = get_lab_context().tolerances.exact if tolerance is None else tolerance
    asym = float(np.abs(f.coeffs - f.coeffs.conj().T).max(initial=0.0))
    if asym > tolerance:
        raise DomainError(f"gw_action needs a Hermitian field; |φ − φ†| = {asym:.3e}")
    quadratic = 0.5 * integral(f @ apply_kinetic(f, model))
    f2 = f @ f
    quartic = model.lam * integral(f2 @ f2)
    return float((quadratic + quartic).real)
