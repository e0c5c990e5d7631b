"""
Matrix-basis functions f_{mn}(x) of the Moyal plane.

In two dimensions, with z = 2r²/θ and d = n − m ≥ 0,

    f_{m,m+d}(x) = 2 (−1)^m e^{idφ} h_m^{(d)}(z),
    h_m^{(d)}(z) = √(m!/(m+d)!) z^{d/2} e^{−z/2} L_m^{(d)}(z),

and f_{nm} = conj(f_{mn}).  The normalised Laguerre functions h are built
by the upward three-term recurrence in m, which never forms factorials.
In four dimensions b_{mn}(x) = f_{m₁n₁}(x₁,x₂) f_{m₂n₂}(x₃,x₄).
"""

from __future__ import annotations

import numpy as np
from scipy.special import gammaln

from moyal_lab.moyal.params import MoyalParams, as_multi


def laguerre_functions(count: int, d: int, z: np.ndarray) -> np.ndarray:
    """h_m^{(d)}(z) for m = 0..count−1, shape (count, *z.shape)."""
    z = np.asarray(z, dtype=float)
    out = np.empty((count,) + z.shape)
    if count == 0:
        return out
    with np.errstate(divide="ignore"):
        log_z = np.where(z > 0, np.log(np.where(z > 0, z, 1.0)), -np.inf)
    if d == 0:
        h0 = np.exp(-z / 2.0)
    else:
        h0 = np.where(z > 0, np.exp(0.5 * d * log_z - z / 2.0 - 0.5 * gammaln(d + 1.0)), 0.0)
    out[0] = h0
    if count > 1:
        out[1] = (1.0 + d - z) * h0 / np.sqrt(1.0 + d)
    for m in range(1, count - 1):
        out[m + 1] = (
            (2 * m + 1 + d - z) * out[m] - np.sqrt(m * (m + d)) * out[m - 1]
        ) / np.sqrt((m + 1) * (m + 1 + d))
    return out


def basis_2d(trunc: int, x1: np.ndarray, x2: np.ndarray, theta: float) -> np.ndarray:
    """All f_{mn}(x) for m, n < trunc at the given points, shape (N, N, *x.shape)."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    z = 2.0 * (x1**2 + x2**2) / theta
    phase = np.exp(1j * np.arctan2(x2, x1))
    out = np.empty((trunc, trunc) + z.shape, dtype=complex)
    sign = np.where(np.arange(trunc) % 2 == 0, 2.0, -2.0)
    for d in range(trunc):
        h = laguerre_functions(trunc - d, d, z)
        rot = phase**d
        for m in range(trunc - d):
            val = sign[m] * rot * h[m]
            out[m, m + d] = val
            if d:
                out[m + d, m] = np.conj(val)
    return out


def basis_values(params: MoyalParams, trunc: int, points: np.ndarray) -> np.ndarray:
    """b_{mn}(x) over flat multi-indices, shape (M, M, P) for points of shape (P, dim)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if params.dim == 2:
        return basis_2d(trunc, points[:, 0], points[:, 1], params.theta)
    first = basis_2d(trunc, points[:, 0], points[:, 1], params.theta)
    second = basis_2d(trunc, points[:, 2], points[:, 3], params.theta)
    size = trunc * trunc
    return np.einsum("acp,bdp->abcdp", first, second).reshape(size, size, -1)


def basis_eval(m, n, x, params: MoyalParams) -> complex:
    """b_{mn}(x) for a single point."""
    m, n = as_multi(m, params.dim), as_multi(n, params.dim)
    x = np.asarray(x, dtype=float)
    value = 1.0 + 0.0j
    for j, (mj, nj) in enumerate(zip(m, n)):
        trunc = max(mj, nj) + 1
        table = basis_2d(trunc, x[2 * j], x[2 * j + 1], params.theta)
        value *= complex(table[mj, nj])
    return value
