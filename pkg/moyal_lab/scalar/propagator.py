"""
Propagator of the harmonic scalar model.

Matrix basis, Ω = 1:
    C_{mn;kl} = (θ/4) δ_{ml} δ_{nk} / (|m| + |n| + μ²θ/4 + D/2)

General Ω (C = (1−Ω)²/(4Ω), support m + k = n + l):
    C_{mn;kl} = (θ/8Ω) ∫₀¹ dα (1−α)^{μ²θ/8Ω + D/4 − 1} (1 + Cα)^{−D/2}
                × Π_j (√(1−α)/(1+Cα))^{n_j+l_j}
                      Σ_i A_i ((1−Ω²) α / (4Ω √(1−α)))^{m_j+l_j−2i}

with A_i = √(C(m,m−i) C(n,m−i) C(l,l−i) C(k,l−i)) and i from max(0, m−n) to
min(m, l).  The substitution u = √(1−α) leaves a smooth integrand on [0, 1].

Position space (Mehler kernel, Ω̃ = 2Ω/θ):
    C(x, y) = (θ/4Ω)(Ω/πθ)^{D/2} ∫ dα sinh(α)^{−D/2} e^{−μ²θα/4Ω}
              × exp(−(Ω̃/4) coth(α/2)(x−y)² − (Ω̃/4) tanh(α/2)(x+y)²)
"""

from __future__ import annotations

import logging
import math
from itertools import product

import numpy as np
from scipy import integrate
from scipy.special import comb

from moyal_lab.config import get_lab_context
from moyal_lab.errors import AccuracyError, DomainError, UnsupportedConfigurationError
from moyal_lab.moyal.basis import basis_2d
from moyal_lab.moyal.params import as_multi
from moyal_lab.scalar.model import ScalarModel

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Matrix basis
# ---------------------------------------------------------------------------

def _closed_form(m, n, k, l, model: ScalarModel) -> float:
    if m != l or n != k:
        return 0.0
    denom = sum(m) + sum(n) + model.mass_term * model.theta / 4.0 + model.params.pairs
    if denom <= 0:
        raise DomainError(f"propagator pole: |m|+|n|+μ²θ/4+D/2 = {denom:.3g} <= 0")
    return (model.theta / 4.0) / denom


def _pair_terms(mj: int, nj: int, kj: int, lj: int) -> list[tuple[float, int, int]]:
    """(A_i, power of the α-ratio, power of u) for one coordinate pair."""
    terms = []
    for i in range(max(0, mj - nj), min(mj, lj) + 1):
        coeff = math.sqrt(
            comb(mj, mj - i, exact=True) * comb(nj, mj - i, exact=True)
            * comb(lj, lj - i, exact=True) * comb(kj, lj - i, exact=True)
        )
        terms.append((coeff, mj + lj - 2 * i, nj - mj + 2 * i))
    return terms


def _alpha_integral(m, n, k, l, model: ScalarModel, tolerance: float) -> float:
    omega = model.omega
    if omega <= 0:
        raise DomainError("the α-representation of the propagator needs omega > 0")
    c = (1.0 - omega) ** 2 / (4.0 * omega)
    q = model.mass_term * model.theta / (8.0 * omega) + model.params.pairs / 2.0 - 1.0
    if q <= -1.0:
        raise DomainError(f"propagator integral diverges at α → 1 (exponent {q:.3g} <= -1)")
    ratio = (1.0 - omega**2) / (4.0 * omega)
    pairs = [_pair_terms(*js) for js in zip(m, n, k, l)]
    nl = sum(n) + sum(l)
    half_dim = model.params.pairs

    def integrand(u: float) -> float:
        alpha = 1.0 - u * u
        one_c = 1.0 + c * alpha
        total = 0.0
        for combo in product(*pairs):
            coeff, a_pow, u_pow = 1.0, 0, 0
            for t in combo:
                coeff *= t[0]
                a_pow += t[1]
                u_pow += t[2]
            total += coeff * (ratio * alpha) ** a_pow * u ** u_pow
        return 2.0 * u ** (2.0 * q + 1.0) * total / one_c ** (half_dim + nl)

    value, err = integrate.quad(integrand, 0.0, 1.0, epsabs=tolerance * 1e-2, epsrel=tolerance * 1e-2, limit=200)
    if err > tolerance * max(1.0, abs(value)):
        raise AccuracyError("propagator α-quadrature", estimate=err, tolerance=tolerance)
    return model.theta / (8.0 * omega) * value


def propagator_entry(m, n, k, l, model: ScalarModel, method: str = "auto",
                     tolerance: float | None = None) -> float:
    """C_{mn;kl}; method "closed" needs Ω = 1, "quadrature" forces the α-integral."""
    dim = model.dim
    m, n, k, l = (as_multi(i, dim) for i in (m, n, k, l))
    if any(mj + kj != nj + lj for mj, nj, kj, lj in zip(m, n, k, l)):
        return 0.0
    if method == "auto":
        method = "closed" if model.omega == 1.0 else "quadrature"
    if method == "closed":
        if model.omega != 1.0:
            raise UnsupportedConfigurationError("closed-form propagator needs omega = 1")
        return _closed_form(m, n, k, l, model)
    if method != "quadrature":
        raise DomainError(f"unknown propagator method {method!r}")
    tolerance = get_lab_context().tolerances.quadrature if tolerance is None else tolerance
    return _alpha_integral(m, n, k, l, model, tolerance)


def propagator_matrix(m, n, k, l, model: ScalarModel, trunc: int | None = None) -> float:
    """C_{mn;kl} with indices checked against ``trunc`` when given."""
    if trunc is not None and max(max(as_multi(i, model.dim)) for i in (m, n, k, l)) >= trunc:
        raise DomainError(f"propagator indices must be < trunc={trunc}")
    return propagator_entry(m, n, k, l, model)


def kinetic_identity_check(model: ScalarModel, max_index: int = 2) -> float:
    """max |Σ_{kl} Δ_{mn;kl} C_{lk;rs} − δ_{ms}δ_{nr}| over D = 2 indices ≤ max_index."""
    if model.dim != 2:
        raise UnsupportedConfigurationError("kinetic_identity_check is implemented for dim = 2")
    theta, w2 = model.theta, model.omega**2
    band = 2.0 * (1.0 - w2) / theta

    def c(a, b, r, s):
        if min(a, b) < 0:
            return 0.0
        return propagator_entry(a, b, r, s, model, method="quadrature")

    worst = 0.0
    rng = range(max_index + 1)
    for m, n, r, s in product(rng, rng, rng, rng):
        if m + r != n + s:
            continue
        d = model.mass_term + (2.0 / theta) * (1.0 + w2) * (m + n + 1)
        lhs = d * c(m, n, r, s) - band * (
            math.sqrt((m + 1) * (n + 1)) * c(m + 1, n + 1, r, s) + math.sqrt(m * n) * c(m - 1, n - 1, r, s)
        )
        target = 1.0 if (m == s and n == r) else 0.0
        worst = max(worst, abs(lhs - target))
    logger.debug("kinetic identity defect %.3e at omega=%g", worst, model.omega)
    return worst


# ---------------------------------------------------------------------------
# Position space
# ---------------------------------------------------------------------------

def _log_sinh(a: float) -> float:
    return a + math.log1p(-math.exp(-2.0 * a)) - math.log(2.0)


def mehler_kernel(x, y, model: ScalarModel, alpha_min: float = 0.0,
                  tolerance: float | None = None) -> float:
    """C(x, y) by quadrature over α ∈ (alpha_min, ∞)."""
    tolerance = get_lab_context().tolerances.quadrature if tolerance is None else tolerance
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (model.dim,) or y.shape != (model.dim,):
        raise DomainError(f"points must have {model.dim} components")
    if model.omega <= 0:
        raise DomainError("the Mehler kernel needs omega > 0")
    diff2 = float(np.sum((x - y) ** 2))
    sum2 = float(np.sum((x + y) ** 2))
    if diff2 == 0.0 and alpha_min <= 0.0:
        raise DomainError("coincident points diverge; supply alpha_min > 0 as a small-α cutoff")
    omega, theta, half_dim = model.omega, model.theta, model.params.pairs
    decay = model.mass_term * theta / (4.0 * omega)
    if decay + half_dim <= 0:
        raise DomainError("the Mehler integral diverges at large α for this mass")
    wt = 2.0 * omega / theta

    def integrand(a: float) -> float:
        if a <= 0.0:
            return 0.0
        log_val = (
            -half_dim * _log_sinh(a) - decay * a
            - 0.25 * wt * diff2 / math.tanh(a / 2.0) - 0.25 * wt * math.tanh(a / 2.0) * sum2
        )
        return math.exp(log_val)

    lower = max(alpha_min, 0.0)
    split = max(lower, 1.0)
    # quad is asked for a tenth of the accepted error so its own estimate clears the gate
    opts = {"epsabs": 0.0, "epsrel": 0.1 * tolerance, "limit": 400}
    head, err_head = integrate.quad(integrand, lower, split, **opts) if split > lower else (0.0, 0.0)
    tail, err_tail = integrate.quad(integrand, split, np.inf, **opts)
    value = head + tail
    err = err_head + err_tail
    if err > tolerance * max(1.0, abs(value)):
        raise AccuracyError("Mehler kernel quadrature", estimate=err, tolerance=tolerance)
    return (theta / (4.0 * omega)) * (omega / (np.pi * theta)) ** half_dim * value


def propagator_resummation(x, y, model: ScalarModel, alpha_min: float | None = None,
                           trunc: int | None = None) -> float:
    """(2πθ)⁻¹ Σ_{m,n<N} C_{mn;nm} e^{−α_min(m+n+1+μ²θ/4)} b_{mn}(x) b_{nm}(y) at Ω = 1, D = 2.

    The damping factor makes the truncated sum equal the Mehler integral
    taken from alpha_min.
    """
    if model.dim != 2 or model.omega != 1.0:
        raise UnsupportedConfigurationError("matrix-basis resummation is implemented for dim = 2, omega = 1")
    ctx = get_lab_context()
    alpha_min = ctx.resummation_alpha_min if alpha_min is None else alpha_min
    trunc = ctx.resummation_trunc if trunc is None else trunc
    theta = model.theta
    shift = model.mass_term * theta / 4.0
    levels = np.add.outer(np.arange(trunc), np.arange(trunc)) + 1.0 + shift
    if levels.min() <= 0:
        raise DomainError("resummation needs |m|+|n|+1+μ²θ/4 > 0")
    weights = (theta / 4.0) * np.exp(-alpha_min * levels) / levels
    bx = basis_2d(trunc, x[0], x[1], theta)
    by = basis_2d(trunc, y[0], y[1], theta)
    total = np.sum(weights * bx * by.T)
    return float(total.real / (2.0 * np.pi * theta))
