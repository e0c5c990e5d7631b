"""
Analysis of functions into matrix-basis coefficients.

φ_{mn} = (2πθ)^{−D/2} ∫ f(x) b_{nm}(x) dx

Callables are integrated by tensor-product Gauss-Hermite quadrature with
nodes scaled by s = √(θ/2), so the Gaussian weight e^{−y²} matches the
e^{−x²/θ} envelope of every basis function.  The error estimate compares
the full rule against a rule with half as many nodes.  Sampled grids are
integrated with the trapezoid rule.
"""

from __future__ import annotations

import logging
from typing import Callable

import numpy as np

from moyal_lab.config import get_lab_context
from moyal_lab.errors import AccuracyError, DomainError
from moyal_lab.moyal.basis import basis_2d, basis_values
from moyal_lab.moyal.params import Field, GridField, MoyalParams

logger = logging.getLogger(__name__)

FieldFunction = Callable[[np.ndarray], np.ndarray]


def _hermite_points(nodes: int, params: MoyalParams) -> tuple[np.ndarray, np.ndarray]:
    """Tensor-product points (P, dim) and weights (P,) for ∫ F(x) dx."""
    y, w = np.polynomial.hermite.hermgauss(nodes)
    s = np.sqrt(params.theta / 2.0)
    w1 = s * w * np.exp(y**2)
    x1 = s * y
    grids = np.meshgrid(*([x1] * params.dim), indexing="ij")
    weights = np.meshgrid(*([w1] * params.dim), indexing="ij")
    points = np.stack([g.ravel() for g in grids], axis=1)
    return points, np.prod(np.stack([g.ravel() for g in weights]), axis=0)


def _project(func: FieldFunction, trunc: int, params: MoyalParams, nodes: int) -> np.ndarray:
    points, weights = _hermite_points(nodes, params)
    values = np.asarray(func(points), dtype=complex).reshape(-1)
    if values.shape[0] != points.shape[0]:
        raise DomainError(f"function returned {values.shape[0]} values for {points.shape[0]} points")
    basis = basis_values(params, trunc, points)
    norm = (2.0 * np.pi * params.theta) ** params.pairs
    # b_{nm} at (m, n) is the transpose of the (m, n) table
    return np.einsum("nmp,p->mn", basis, weights * values) / norm


def project_function(func: FieldFunction, trunc: int, params: MoyalParams,
                     nodes: int | None = None) -> tuple[Field, float]:
    """Coefficients of ``func`` and the half-rule error estimate (max abs)."""
    ctx = get_lab_context()
    if nodes is None:
        nodes = ctx.quadrature.hermite_nodes_2d if params.dim == 2 else ctx.quadrature.hermite_nodes_4d
    if nodes < 2 * trunc:
        raise DomainError(f"{nodes} Hermite nodes cannot resolve trunc={trunc}; need at least {2 * trunc}")
    full = _project(func, trunc, params, nodes)
    coarse = _project(func, trunc, params, nodes // 2 + trunc)
    estimate = float(np.abs(full - coarse).max())
    logger.debug("projected function: trunc=%d nodes=%d estimate=%.3e", trunc, nodes, estimate)
    return Field(params, trunc, full), estimate


def coeffs_from_function(func: FieldFunction, trunc: int, params: MoyalParams,
                         nodes: int | None = None, tolerance: float | None = None) -> Field:
    """Matrix-basis coefficients of a rapidly decaying function of x (points of shape (P, dim))."""
    tolerance = get_lab_context().tolerances.quadrature if tolerance is None else tolerance
    field, estimate = project_function(func, trunc, params, nodes)
    if estimate > tolerance:
        raise AccuracyError("coefficient quadrature did not converge", estimate=estimate, tolerance=tolerance)
    return field


# ---------------------------------------------------------------------------
# Grid ↔ matrix basis
# ---------------------------------------------------------------------------

def trapezoid_weights(resolution: int, spacing: float) -> np.ndarray:
    w = np.full(resolution, spacing)
    w[0] = w[-1] = spacing / 2.0
    return w


def default_extent(params: MoyalParams, trunc: int) -> float:
    """L = factor·√θ, widened for the oscillatory range of b_{mn} with m, n < trunc."""
    factor = get_lab_context().quadrature.grid_extent_factor
    return float(factor * np.sqrt(params.theta * max(1.0, trunc / 4.0)))


def grid_edge_magnitude(g: GridField) -> float:
    """Largest |g| on the grid boundary relative to the largest |g| overall."""
    s = np.abs(g.samples)
    peak = s.max()
    if peak == 0.0:
        return 0.0
    return float(max(s[0].max(), s[-1].max(), s[:, 0].max(), s[:, -1].max()) / peak)


def coeffs_from_grid(g: GridField, trunc: int, tolerance: float | None = None) -> Field:
    """Matrix-basis coefficients of sampled data; the grid must contain the field."""
    tolerance = get_lab_context().tolerances.grid_edge if tolerance is None else tolerance
    edge = grid_edge_magnitude(g)
    if edge > tolerance:
        raise AccuracyError("grid does not contain the field support", estimate=edge, tolerance=tolerance)
    x1, x2 = g.mesh()
    basis = basis_2d(trunc, x1, x2, g.params.theta)
    w = trapezoid_weights(g.resolution, g.spacing)
    weighted = g.samples * np.outer(w, w)
    coeffs = np.einsum("nmij,ij->mn", basis, weighted) / (2.0 * np.pi * g.params.theta)
    return Field(g.params, trunc, coeffs)


def grid_from_field(f: Field, extent: float | None = None, resolution: int | None = None) -> GridField:
    """Sample Σ φ_{mn} b_{mn} on the uniform grid [−L, L]²."""
    if f.params.dim != 2:
        raise DomainError("grid sampling supports dim = 2 only")
    quad = get_lab_context().quadrature
    if extent is None:
        extent = default_extent(f.params, f.trunc)
    resolution = quad.grid_resolution if resolution is None else resolution
    axis = np.linspace(-extent, extent, resolution)
    x1, x2 = np.meshgrid(axis, axis, indexing="ij")
    basis = basis_2d(f.trunc, x1, x2, f.params.theta)
    return GridField(f.params, extent, np.einsum("mn,mnij->ij", f.coeffs, basis))


def grid_from_function(func: FieldFunction, params: MoyalParams, extent: float, resolution: int) -> GridField:
    axis = np.linspace(-extent, extent, resolution)
    x1, x2 = np.meshgrid(axis, axis, indexing="ij")
    points = np.stack([x1.ravel(), x2.ravel()], axis=1)
    values = np.asarray(func(points), dtype=complex).reshape(resolution, resolution)
    return GridField(params, extent, values)
