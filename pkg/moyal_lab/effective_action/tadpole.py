"""
Numeric check of the tadpole divergence.

After the Gaussian integrals the tadpole is a single Schwinger integral

    T₁(ε) = −Ω⁴/(π²θ²(1+Ω²)³) ∫_ε^∞ dt e^{−tm²} / (sinh²(Ω̃t) cosh²(Ω̃t))
             · ∫d⁴u ũ_μA_μ(u) e^{−2Ω tanh(Ω̃t) u² / (θ(1+Ω²))},      Ω̃ = 2Ω/θ.

For the profile A_μ = ũ_μ e^{−u²/s} the u-integral is 8π²/(θ²(1/s+τ)³),
so T₁(ε) is evaluated by adaptive quadrature and fitted on
{1/ε, ln ε, 1, ε}.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable

import numpy as np
from scipy import integrate

from moyal_lab.config import get_lab_context
from moyal_lab.errors import AccuracyError, DomainError
from moyal_lab.models import TadpoleFit

logger = logging.getLogger(__name__)

BASIS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "inv_eps": lambda e: 1.0 / e,
    "log_eps": np.log,
    "const": np.ones_like,
    "eps": lambda e: e,
}


def profile_integrals(width: float, theta: float) -> tuple[float, float]:
    """(∫ũA, ∫u²ũA) for A_μ = ũ_μ e^{−u²/width}."""
    return 8.0 * math.pi**2 * width**3 / theta**2, 24.0 * math.pi**2 * width**4 / theta**2


def expected_coefficients(omega: float, m2: float, theta: float, width: float) -> tuple[float, float]:
    """(1/ε, ln ε) coefficients predicted by the Taylor expansion at t → 0."""
    w = omega * omega
    first, second = profile_integrals(width, theta)
    inv = -w / (4.0 * math.pi**2 * (1.0 + w) ** 3) * first
    log = -m2 * w / (4.0 * math.pi**2 * (1.0 + w) ** 3) * first - w * w / (math.pi**2 * theta**2 * (1.0 + w) ** 4) * second
    return inv, log


def tadpole_integral(eps: float, omega: float, m2: float, theta: float, width: float,
                     tolerance: float | None = None) -> float:
    """T₁ with lower Schwinger cut-off ε."""
    tolerance = get_lab_context().tolerances.quadrature if tolerance is None else tolerance
    w = omega * omega
    wt = 2.0 * omega / theta
    pref = -w * w / (math.pi**2 * theta**2 * (1.0 + w) ** 3)

    def integrand(t: float) -> float:
        y = wt * t
        tau = 2.0 * omega * math.tanh(y) / (theta * (1.0 + w))
        u_part = 8.0 * math.pi**2 / (theta**2 * (1.0 / width + tau) ** 3)
        # 1/(sinh²(y)cosh²(y)) = 16 e^{-4y} / (1 - e^{-4y})², finite for every y > 0
        return math.exp(-t * m2 - 4.0 * y) * 16.0 / math.expm1(-4.0 * y) ** 2 * u_part

    # t = e^s on [ε, 1]
    near, err_near = integrate.quad(lambda s: integrand(math.exp(s)) * math.exp(s), math.log(eps), 0.0,
                                    epsabs=0.0, epsrel=1e-12, limit=400)
    far, err_far = integrate.quad(integrand, 1.0, np.inf, epsabs=0.0, epsrel=1e-12, limit=400)
    total = near + far
    err = err_near + err_far
    if err > tolerance * max(1.0, abs(total)):
        raise AccuracyError(f"tadpole quadrature at eps={eps}", estimate=err, tolerance=tolerance)
    return pref * total


def tadpole_numeric(omega: float, m2: float = 0.0, theta: float = 1.0, eps_list=None,
                    width: float | None = None, basis: tuple[str, ...] = ("inv_eps", "log_eps", "const", "eps"),
                    ) -> TadpoleFit:
    """Fit T₁(ε) on the ε grid and compare the leading coefficients with the closed form."""
    ctx = get_lab_context()
    eps = np.asarray(ctx.tadpole_eps if eps_list is None else eps_list, dtype=float)
    width = ctx.tadpole_width if width is None else width
    if not 0.0 < omega <= 1.0:
        raise DomainError(f"omega must lie in (0, 1], got {omega}")
    if theta <= 0 or width <= 0:
        raise DomainError("theta and the profile width must be positive")
    if np.any(eps <= 1e-6) or np.any(eps >= 1e-2):
        raise DomainError("tadpole cut-offs must lie in (1e-6, 1e-2)")
    if np.log10(eps.max() / eps.min()) < 2.0:
        raise DomainError("tadpole cut-offs must span at least two decades")
    unknown = [b for b in basis if b not in BASIS]
    if unknown:
        raise DomainError(f"Unknown fit basis functions: {unknown}. Available: {list(BASIS)}")
    if len(eps) <= len(basis):
        raise DomainError(f"need more than {len(basis)} cut-offs for the fit, got {len(eps)}")

    values = np.array([tadpole_integral(e, omega, m2, theta, width) for e in eps])
    design = np.column_stack([BASIS[b](eps) for b in basis])
    norms = np.linalg.norm(design, axis=0)
    scaled = design / norms
    cond = float(np.linalg.cond(scaled))
    if cond > ctx.tolerances.fit_condition:
        raise AccuracyError("tadpole fit is ill-conditioned", estimate=cond, tolerance=ctx.tolerances.fit_condition)
    solution, *_ = np.linalg.lstsq(scaled, values, rcond=None)
    coeffs = {b: float(c) for b, c in zip(basis, solution / norms)}

    inv, log = expected_coefficients(omega, m2, theta, width)
    fitted_inv = coeffs.get("inv_eps", 0.0)
    rel = abs(fitted_inv - inv) / abs(inv) if inv else abs(fitted_inv)
    rel_log = None
    if "log_eps" in coeffs:
        fitted_log = coeffs["log_eps"]
        rel_log = abs(fitted_log - log) / abs(log) if log else abs(fitted_log)
    logger.debug("tadpole fit omega=%g: c_inv=%.6e expected=%.6e cond=%.2e", omega, fitted_inv, inv, cond)
    return TadpoleFit(
        omega=omega, m2=m2, theta=theta, width=width,
        eps=eps.tolist(), values=values.tolist(), basis=list(basis),
        coefficients=coeffs,
        expected_inv_eps=inv, expected_log_eps=log,
        relative_error_inv_eps=rel, relative_error_log_eps=rel_log, condition=cond,
    )
