"""
Matrix-basis operations: star product, integral, involution, synthesis,
coordinate functions and the interior-block checks used everywhere a
truncated identity is compared with its untruncated counterpart.
"""

from __future__ import annotations

import logging

import numpy as np

from moyal_lab.errors import DomainError
from moyal_lab.moyal.basis import basis_values
from moyal_lab.moyal.params import Field, MoyalParams, index_norms, multi_indices

logger = logging.getLogger(__name__)


def star(f: Field, g: Field) -> Field:
    """f ⋆ g as the product of coefficient matrices."""
    return f @ g


def integral(f: Field) -> complex:
    """∫ f = (2πθ)^{D/2} Σ_m φ_mm."""
    p = f.params
    return complex((2.0 * np.pi * p.theta) ** p.pairs * np.trace(f.coeffs))


def adjoint(f: Field) -> Field:
    return f.dagger


def commutator(f: Field, g: Field) -> Field:
    return f @ g - g @ f


def anticommutator(f: Field, g: Field) -> Field:
    return f @ g + g @ f


def eval_field(f: Field, x) -> complex | np.ndarray:
    """Σ φ_mn b_mn(x); a single point gives a scalar, (P, dim) points an array."""
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    values = basis_values(f.params, f.trunc, np.atleast_2d(pts))
    out = np.einsum("mn,mnp->p", f.coeffs, values)
    return complex(out[0]) if single else out


# ---------------------------------------------------------------------------
# Coordinate functions and special elements
# ---------------------------------------------------------------------------

def _ladder(trunc: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, trunc, dtype=float)), k=1)


def _embed(block: np.ndarray, pair: int, params: MoyalParams, trunc: int) -> np.ndarray:
    if params.pairs == 1:
        return block
    eye = np.eye(trunc)
    return np.kron(block, eye) if pair == 0 else np.kron(eye, block)


def coordinate_field(which: str, trunc: int, params: MoyalParams, mu: int | None = None) -> Field:
    """Exact matrix coefficients of x_μ, x̃_μ = 2Θ⁻¹_μν x_ν or x² (μ is 1-based)."""
    if which == "x_squared":
        diag = params.theta * (2.0 * index_norms(trunc, params.dim) + params.pairs)
        return Field(params, trunc, np.diag(diag))
    if mu is None or not 1 <= mu <= params.dim:
        raise DomainError(f"component index mu must be in 1..{params.dim}, got {mu!r}")
    if which == "x":
        a = _ladder(trunc)
        scale = np.sqrt(params.theta / 2.0)
        block = scale * (a + a.T) if mu % 2 == 1 else -1j * scale * (a - a.T)
        return Field(params, trunc, _embed(block, (mu - 1) // 2, params, trunc))
    if which == "x_tilde":
        inv = params.theta_inverse()
        out = np.zeros((trunc ** params.pairs,) * 2, dtype=complex)
        for nu in range(1, params.dim + 1):
            if inv[mu - 1, nu - 1]:
                out += 2.0 * inv[mu - 1, nu - 1] * coordinate_field("x", trunc, params, nu).coeffs
        return Field(params, trunc, out)
    raise DomainError(f"unknown coordinate function {which!r}; expected x, x_tilde or x_squared")


def special_field(which: str, trunc: int, params: MoyalParams) -> Field:
    """Truncated unit, Dirac distribution at 0, or the Gaussian e^{−x²/θ}."""
    size = trunc ** params.pairs
    if which == "unit":
        return Field(params, trunc, np.eye(size))
    if which == "delta":
        signs = (-1.0) ** index_norms(trunc, params.dim)
        return Field(params, trunc, np.diag(signs / (np.pi * params.theta) ** params.pairs))
    if which == "gaussian":
        out = np.zeros((size, size))
        out[0, 0] = 0.5 ** params.pairs
        return Field(params, trunc, out)
    raise DomainError(f"unknown special field {which!r}; expected unit, delta or gaussian")


def approximate_unit(k: int, trunc: int, params: MoyalParams) -> Field:
    """e_k = Σ_{max m_j ≤ k} b_mm."""
    diag = [1.0 if max(m) <= k else 0.0 for m in multi_indices(trunc, params.dim)]
    return Field(params, trunc, np.diag(diag))


# ---------------------------------------------------------------------------
# Interior block
# ---------------------------------------------------------------------------

def interior_mask(trunc: int, dim: int, margin: int) -> np.ndarray:
    """Entries (m, n) whose components all stay below trunc − margin."""
    inside = np.array([max(m) < trunc - margin for m in multi_indices(trunc, dim)])
    return np.outer(inside, inside)


def interior_defect(a: Field | np.ndarray, b: Field | np.ndarray, margin: int,
                    trunc: int | None = None, dim: int = 2) -> float:
    """max |a − b| over the interior block."""
    if isinstance(a, Field):
        trunc, dim = a.trunc, a.params.dim
        a = a.coeffs
    if isinstance(b, Field):
        b = b.coeffs
    mask = interior_mask(trunc, dim, margin)
    if not mask.any():
        logger.warning("interior block is empty for trunc=%d margin=%d", trunc, margin)
        return 0.0
    return float(np.abs(np.asarray(a) - np.asarray(b))[mask].max())


def support_below(f: Field, limit: int) -> bool:
    """True when every non-zero coefficient has all index components < limit."""
    mask = interior_mask(f.trunc, f.params.dim, f.trunc - limit)
    return not np.any(f.coeffs[~mask])
