"""
Schwinger cut-off behaviour and the bubble-graph Gaussian step.

A one-loop graph with p internal lines carries

    ∫_{[ε,1]^p} dt / (Σt)^{p+1} = 1/(p·p!·ε) + …
    ∫_{[ε,1]^p} dt / (Σt)^p     = −ln ε/(p−1)! + …

so rescaling ε → ε/p² puts the quadratic and the m² ln ε parts of the
graph on the same footing.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy import integrate

from moyal_lab.config import get_lab_context
from moyal_lab.errors import AccuracyError, DomainError
from moyal_lab.models import SchwingerCheck

logger = logging.getLogger(__name__)


def schwinger_leading_divergences(p: int) -> tuple[float, float]:
    """(1/ε coefficient of the quadratic integral, ln ε coefficient of the logarithmic one)."""
    if p < 1:
        raise DomainError(f"a graph needs at least one internal line, got p={p}")
    return 1.0 / (p * math.factorial(p)), -1.0 / math.factorial(p - 1)


def regularization_scale(p: int) -> float:
    return 1.0 / (p * p)


def _irwin_hall(p: int, y: float) -> float:
    """Density of a sum of p uniform variables on [0, 1]."""
    total = sum((-1) ** k * math.comb(p, k) * (y - k) ** (p - 1) for k in range(int(math.floor(y)) + 1) if y - k >= 0)
    return total / math.factorial(p - 1)


def schwinger_integral(p: int, eps: float, power: int) -> float:
    """∫_{[ε,1]^p} dt (t₁+…+t_p)^{−power}, reduced to one dimension through the sum's density."""
    if not 0.0 < eps < 1.0:
        raise DomainError(f"cut-off must lie in (0, 1), got {eps}")
    scale = 1.0 - eps

    def integrand(y: float) -> float:
        return _irwin_hall(p, y) * (p * eps + scale * y) ** (-power)

    total = 0.0
    err = 0.0
    for k in range(p):
        points = [k + x for x in (eps, 10 * eps, 100 * eps) if x < 1.0] if k == 0 else None
        value, e = integrate.quad(integrand, k, k + 1, points=points, limit=400, epsabs=0.0, epsrel=1e-12)
        total += value
        err += e
    if err > 1e-8 * max(1.0, abs(total)):
        raise AccuracyError(f"Schwinger integral p={p} eps={eps}", estimate=err, tolerance=1e-8)
    return scale**p * total


def _fit(eps: np.ndarray, values: np.ndarray, columns: list[np.ndarray]) -> np.ndarray:
    design = np.column_stack(columns)
    norms = np.linalg.norm(design, axis=0)
    cond = float(np.linalg.cond(design / norms))
    limit = get_lab_context().tolerances.fit_condition
    if cond > limit:
        raise AccuracyError("Schwinger fit is ill-conditioned", estimate=cond, tolerance=limit)
    solution, *_ = np.linalg.lstsq(design / norms, values, rcond=None)
    return solution / norms


def schwinger_divergence_check(p: int, eps_list=None) -> SchwingerCheck:
    """Fit both Schwinger integrals over the ε grid and report the leading coefficients."""
    eps = np.asarray(get_lab_context().tadpole_eps if eps_list is None else eps_list, dtype=float)
    if len(eps) < 6:
        raise DomainError("need at least six cut-offs for the Schwinger fit")
    expected_inv, expected_log = schwinger_leading_divergences(p)
    quad_vals = np.array([schwinger_integral(p, e, p + 1) for e in eps])
    log_vals = np.array([schwinger_integral(p, e, p) for e in eps])
    log_eps = np.log(eps)
    quad_fit = _fit(eps, quad_vals, [1.0 / eps, log_eps, np.ones_like(eps), eps * log_eps, eps])
    log_fit = _fit(eps, log_vals, [log_eps, np.ones_like(eps), eps * log_eps, eps])
    logger.debug("Schwinger p=%d: 1/eps %.6g (expected %.6g), ln eps %.6g (expected %.6g)",
                 p, quad_fit[0], expected_inv, log_fit[0], expected_log)
    return SchwingerCheck(
        lines=p,
        expected_inv_eps=expected_inv,
        fitted_inv_eps=float(quad_fit[0]),
        expected_log_eps=expected_log,
        fitted_log_eps=float(log_fit[0]),
        scale=regularization_scale(p),
    )


# ---------------------------------------------------------------------------
# Bubble graph
# ---------------------------------------------------------------------------

def bubble_hu(t1: float, t2: float) -> float:
    """HU of the bubble graph."""
    return 4.0 * (t1 + t2) ** 2


def bubble_gaussian_width(t1: float, t2: float, omega: float, theta: float) -> float:
    """a in exp(−a z²) after the shift y₄ = x₁ − x₄ + y₁ + z."""
    return (1.0 + omega * omega) / (2.0 * omega * theta * (t1 + t2))


def bubble_z_gaussian(t1: float, t2: float, J, omega: float, theta: float) -> tuple[float, float]:
    """∫d⁴z exp(−a z² + iJ·z): (product quadrature, closed form (π/a)² e^{−J²/4a})."""
    J = np.asarray(J, dtype=float)
    if J.shape != (4,):
        raise DomainError(f"J must have four components, got shape {J.shape}")
    a = bubble_gaussian_width(t1, t2, omega, theta)
    numeric = 1.0
    for j in J:
        value, _ = integrate.quad(lambda z: math.exp(-a * z * z) * math.cos(j * z), -np.inf, np.inf)
        numeric *= value
    closed = (math.pi / a) ** 2 * math.exp(-float(J @ J) / (4.0 * a))
    return numeric, closed


def bubble_leading_weight(t1: float, t2: float, omega: float, theta: float) -> float:
    """HU⁻² times the z integral at J = 0: Ω²π²θ²/(4(1+Ω²)²(t₁+t₂)²)."""
    return omega**2 * math.pi**2 * theta**2 / (4.0 * (1.0 + omega**2) ** 2 * (t1 + t2) ** 2)
