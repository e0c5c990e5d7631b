"""
Symplectic Fourier transform on the sampled plane.

    ĝ(k) = (πθ)^{−1} ∫ g(x) e^{−i s k∧x} dx,    k∧x = 2 k Θ⁻¹ x = (2/θ)(k₂x₁ − k₁x₂)

with s = ±1 selecting the sign convention.  For either sign the transform
is unitary and involutive (F∘F = id).  The integral is a trapezoid sum
evaluated as two dense matrix products, since the kernel separates in
(k₂, x₁) and (k₁, x₂).
"""

from __future__ import annotations

import logging

import numpy as np

from moyal_lab.config import get_lab_context
from moyal_lab.errors import AccuracyError, DomainError
from moyal_lab.moyal.params import GridField
from moyal_lab.moyal.quadrature import grid_edge_magnitude, trapezoid_weights

logger = logging.getLogger(__name__)


def nyquist_ratio(g: GridField) -> float:
    """Largest kernel phase step (2/θ)·L·h divided by π; must stay below 1."""
    return (2.0 / g.params.theta) * g.extent * g.spacing / np.pi


def symplectic_fourier(g: GridField, sign: int = 1, tolerance: float | None = None) -> GridField:
    """Transform onto the same grid in k-space."""
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign!r}")
    tolerance = get_lab_context().tolerances.grid_edge if tolerance is None else tolerance
    edge = grid_edge_magnitude(g)
    if edge > tolerance:
        raise AccuracyError("field is not contained in the grid", estimate=edge, tolerance=tolerance)
    ratio = nyquist_ratio(g)
    if ratio >= 1.0:
        raise AccuracyError("grid under-resolves the transform kernel", estimate=ratio, tolerance=1.0)

    theta = g.params.theta
    axis = g.axis
    w = trapezoid_weights(g.resolution, g.spacing)
    phase = (2.0 / theta) * np.outer(axis, axis)
    e1 = np.exp(-1j * sign * phase)
    e2 = np.exp(1j * sign * phase)
    weighted = g.samples * np.outer(w, w)
    out = e2 @ weighted.T @ e1.T / (np.pi * theta)
    logger.debug("symplectic_fourier: N=%d L=%.3g nyquist=%.3f", g.resolution, g.extent, ratio)
    return g.with_samples(out)


def grid_inner_product(f: GridField, g: GridField) -> complex:
    """⟨f, g⟩ = ∫ conj(f) g by the trapezoid rule."""
    if f.resolution != g.resolution or not np.isclose(f.extent, g.extent):
        raise DomainError("grid inner product needs identical grids")
    w = trapezoid_weights(f.resolution, f.spacing)
    return complex(np.sum(np.conj(f.samples) * g.samples * np.outer(w, w)))
