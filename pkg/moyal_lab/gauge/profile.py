"""
Position-space profile of gauge vacua.

For the bidiagonal vacuum Z_{m,m+1} = −i e^{iξ_m} √u_{m+1} the covariant
coordinates are

    𝒜_μ(x) = P e^{−z/2} Σ_m (−1)^m c_m L_m^{(ν)}(z) (x̃_μ cos ξ_m − (2/θ) x_μ sin ξ_m),   z = 2x²/θ

with (P, ν, c_m) = (−2√θ, 1, √(u_{m+1}/(m+1))) in two dimensions and
(−4√θ, 2, √v_{m+1}) in four.  The identity

    ∫₀^∞ e^{−t} t^{m+ν/2} J_ν(2√(zt)) dt = m! z^{ν/2} e^{−z} L_m^{(ν)}(z)

turns the series into a single t-integral, which ``vacuum_profile_xspace``
evaluates by quadrature; ``profile_series_xspace`` sums the Laguerre form.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy import integrate, special

from moyal_lab.config import get_lab_context
from moyal_lab.errors import AccuracyError, DimensionError
from moyal_lab.gauge.sequences import VacuumSequence

logger = logging.getLogger(__name__)


def _layout(seq: VacuumSequence, levels: int | None) -> tuple[float, int, np.ndarray]:
    values = np.asarray(seq.u, dtype=float)
    count = len(values) - 1 if levels is None else min(levels, len(values) - 1)
    m = np.arange(count)
    theta = seq.model.params.theta
    if seq.dim == 2:
        return -2.0 * math.sqrt(theta), 1, np.sqrt(np.maximum(values[1: count + 1], 0.0) / (m + 1))
    return -4.0 * math.sqrt(theta), 2, np.sqrt(np.maximum(values[1: count + 1], 0.0))


def _directions(seq: VacuumSequence, x: np.ndarray, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-m weights of x̃_μ and x_μ."""
    theta = seq.model.params.theta
    xi = np.array([seq.phase(m) for m in range(count)])
    return np.cos(xi), -(2.0 / theta) * np.sin(xi)


def _x_tilde(x: np.ndarray, theta: float) -> np.ndarray:
    inv = np.kron(np.eye(len(x) // 2), np.array([[0.0, -1.0], [1.0, 0.0]]) / theta)
    return 2.0 * inv @ x


def _check_point(seq: VacuumSequence, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (seq.dim,):
        raise DimensionError(f"profile point must have {seq.dim} components, got shape {x.shape}")
    return x


def profile_coefficients_series(seq: VacuumSequence, z: float, levels: int | None = None) -> tuple[float, float]:
    """(a, b) with 𝒜_μ = a x̃_μ + b x_μ, from the Laguerre sum."""
    pref, nu, c = _layout(seq, levels)
    count = len(c)
    cos_w, sin_w = _directions(seq, np.zeros(seq.dim), count)
    signs = (-1.0) ** np.arange(count)
    lag = np.array([special.eval_genlaguerre(m, nu, z) for m in range(count)])
    base = pref * math.exp(-z / 2.0) * signs * c * lag
    return float(np.sum(base * cos_w)), float(np.sum(base * sin_w))


def profile_series_xspace(seq: VacuumSequence, x, levels: int | None = None) -> np.ndarray:
    """𝒜_μ(x) from the closed Laguerre form."""
    x = _check_point(seq, x)
    theta = seq.model.params.theta
    z = 2.0 * float(x @ x) / theta
    a, b = profile_coefficients_series(seq, z, levels)
    return a * _x_tilde(x, theta) + b * x


def _bessel_factor(nu: int, y: np.ndarray | float) -> float:
    """2J₁(y)/y (ν=1) or 8J₂(y)/y² (ν=2); both → 1 at y = 0."""
    if y < 1e-6:
        return 1.0 - y * y / 8.0 if nu == 1 else 1.0 - y * y / 12.0
    return 2.0 * special.j1(y) / y if nu == 1 else 8.0 * special.jv(2, y) / (y * y)


def profile_coefficients_quadrature(seq: VacuumSequence, z: float, levels: int | None = None,
                                    tolerance: float | None = None) -> tuple[float, float]:
    """(a, b) with 𝒜_μ = a x̃_μ + b x_μ, from the t-integral."""
    tolerance = get_lab_context().tolerances.profile if tolerance is None else tolerance
    pref, nu, c = _layout(seq, levels)
    count = len(c)
    cos_w, sin_w = _directions(seq, np.zeros(seq.dim), count)
    signs = (-1.0) ** np.arange(count)
    log_fact = special.gammaln(np.arange(count) + 1.0)
    # ν = 1: e^{z/2}/√z · √t J₁ = e^{z/2} t g(y);  ν = 2: e^{z/2}/z · J₂ t = e^{z/2} (t²/2) h(y)
    lead = 1 if nu == 1 else 2
    scale = 1.0 if nu == 1 else 0.5

    def integrand(t: float, weights: np.ndarray) -> float:
        if t == 0.0:
            return 0.0 if lead > 0 else float(weights[0])
        y = 2.0 * math.sqrt(t * z)
        poly = np.sum(weights * np.exp(np.arange(count) * math.log(t) - log_fact - t))
        return scale * t**lead * _bessel_factor(nu, y) * poly

    results = []
    for dirw in (cos_w, sin_w):
        weights = signs * c * dirw
        if not np.any(weights):
            results.append(0.0)
            continue
        upper = count + 60.0 + 10.0 * math.sqrt(count + 1.0)
        value, err = integrate.quad(integrand, 0.0, upper, args=(weights,), limit=400,
                                    epsabs=tolerance * 1e-2, epsrel=tolerance * 1e-2)
        total = pref * math.exp(z / 2.0) * value
        err_total = abs(pref) * math.exp(z / 2.0) * err
        if err_total > tolerance * max(1.0, abs(total)):
            raise AccuracyError("vacuum profile quadrature", estimate=err_total, tolerance=tolerance)
        results.append(total)
    return results[0], results[1]


def vacuum_profile_xspace(seq: VacuumSequence, x, levels: int | None = None,
                          tolerance: float | None = None) -> np.ndarray:
    """𝒜_μ(x) by quadrature of the t-integral."""
    x = _check_point(seq, x)
    theta = seq.model.params.theta
    z = 2.0 * float(x @ x) / theta
    a, b = profile_coefficients_quadrature(seq, z, levels, tolerance)
    logger.debug("profile at z=%.3g: a=%.6g b=%.6g", z, a, b)
    return a * _x_tilde(x, theta) + b * x
