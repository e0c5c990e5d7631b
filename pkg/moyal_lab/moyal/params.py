"""
Value types of the truncated Moyal algebra.

A Field stores φ_{mn} as a square complex matrix whose rows and columns
run over multi-indices m ∈ {0..N−1}^{D/2}, flattened row-major (m₁ outer).
In this layout the star product is the matrix product and the integral is
(2πθ)^{D/2} times the trace.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from moyal_lab.errors import DimensionError, DomainError


@dataclass(frozen=True)
class MoyalParams:
    theta: float
    dim: int = 2

    def __post_init__(self) -> None:
        if not (self.theta > 0 and math.isfinite(self.theta)):
            raise DomainError(f"theta must be positive and finite, got {self.theta!r}")
        if self.dim not in (2, 4):
            raise DomainError(f"dim must be 2 or 4, got {self.dim!r}")

    @property
    def pairs(self) -> int:
        return self.dim // 2

    def theta_inverse(self) -> np.ndarray:
        """Θ⁻¹ with Θ₁₂ = θ on every coordinate pair."""
        block = np.array([[0.0, -1.0], [1.0, 0.0]]) / self.theta
        return np.kron(np.eye(self.pairs), block)


# ---------------------------------------------------------------------------
# Multi-index bookkeeping
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def multi_indices(trunc: int, dim: int) -> tuple[tuple[int, ...], ...]:
    """All multi-indices of length dim/2 below trunc, row-major."""
    return tuple(itertools.product(range(trunc), repeat=dim // 2))


def flat_index(m: tuple[int, ...] | int, trunc: int) -> int:
    if isinstance(m, int):
        return m
    idx = 0
    for c in m:
        idx = idx * trunc + c
    return idx


@lru_cache(maxsize=64)
def index_norms(trunc: int, dim: int) -> np.ndarray:
    """|m| = Σ_j m_j for every flat index."""
    out = np.array([sum(m) for m in multi_indices(trunc, dim)], dtype=float)
    out.setflags(write=False)
    return out


def as_multi(m: tuple[int, ...] | int, dim: int) -> tuple[int, ...]:
    if isinstance(m, int):
        m = (m,)
    if len(m) != dim // 2:
        raise DimensionError(f"multi-index {m!r} has wrong length for dim={dim}")
    if any(c < 0 for c in m):
        raise DomainError(f"multi-index components must be >= 0, got {m!r}")
    return tuple(m)


# ---------------------------------------------------------------------------
# Field
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Field:
    params: MoyalParams
    trunc: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        if self.trunc < 1:
            raise DomainError(f"trunc must be >= 1, got {self.trunc}")
        size = self.trunc ** self.params.pairs
        arr = np.array(self.coeffs, dtype=complex)
        if arr.shape != (size, size):
            raise DimensionError(f"coeffs shape {arr.shape} != {(size, size)}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("field coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    # -- construction -------------------------------------------------------

    @classmethod
    def zeros(cls, params: MoyalParams, trunc: int) -> "Field":
        size = trunc ** params.pairs
        return cls(params, trunc, np.zeros((size, size), dtype=complex))

    @classmethod
    def basis(cls, m, n, params: MoyalParams, trunc: int) -> "Field":
        """The matrix unit b_{mn}."""
        m, n = as_multi(m, params.dim), as_multi(n, params.dim)
        if max(m + n) >= trunc:
            raise DimensionError(f"b_{m}{n} lies outside trunc={trunc}")
        out = np.zeros((trunc ** params.pairs,) * 2, dtype=complex)
        out[flat_index(m, trunc), flat_index(n, trunc)] = 1.0
        return cls(params, trunc, out)

    def with_coeffs(self, coeffs: np.ndarray) -> "Field":
        return Field(self.params, self.trunc, coeffs)

    # -- shape helpers ------------------------------------------------------

    @property
    def size(self) -> int:
        return self.coeffs.shape[0]

    def entry(self, m, n) -> complex:
        m, n = as_multi(m, self.params.dim), as_multi(n, self.params.dim)
        return complex(self.coeffs[flat_index(m, self.trunc), flat_index(n, self.trunc)])

    def check_compatible(self, other: "Field") -> None:
        if self.params != other.params or self.trunc != other.trunc:
            raise DimensionError(
                f"incompatible fields: ({self.params}, N={self.trunc}) vs ({other.params}, N={other.trunc})"
            )

    # -- algebra ------------------------------------------------------------

    def __add__(self, other: "Field") -> "Field":
        self.check_compatible(other)
        return self.with_coeffs(self.coeffs + other.coeffs)

    def __sub__(self, other: "Field") -> "Field":
        self.check_compatible(other)
        return self.with_coeffs(self.coeffs - other.coeffs)

    def __neg__(self) -> "Field":
        return self.with_coeffs(-self.coeffs)

    def __mul__(self, scalar: complex) -> "Field":
        return self.with_coeffs(scalar * self.coeffs)

    __rmul__ = __mul__

    def __matmul__(self, other: "Field") -> "Field":
        self.check_compatible(other)
        return self.with_coeffs(self.coeffs @ other.coeffs)

    @property
    def dagger(self) -> "Field":
        return self.with_coeffs(self.coeffs.conj().T)

    def norm(self) -> float:
        return float(np.abs(self.coeffs).max(initial=0.0))


# ---------------------------------------------------------------------------
# GridField
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GridField:
    """Samples of a function on the uniform grid [−L, L]² (x₁ is axis 0)."""

    params: MoyalParams
    extent: float
    samples: np.ndarray

    def __post_init__(self) -> None:
        if self.params.dim != 2:
            raise DomainError("GridField supports dim = 2 only")
        if not self.extent > 0:
            raise DomainError(f"extent must be positive, got {self.extent}")
        arr = np.array(self.samples, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 2:
            raise DimensionError(f"samples must be a square grid with resolution >= 2, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("grid samples must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def resolution(self) -> int:
        return self.samples.shape[0]

    @property
    def axis(self) -> np.ndarray:
        return np.linspace(-self.extent, self.extent, self.resolution)

    @property
    def spacing(self) -> float:
        return 2.0 * self.extent / (self.resolution - 1)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.axis, self.axis, indexing="ij")

    def with_samples(self, samples: np.ndarray) -> "GridField":
        return GridField(self.params, self.extent, samples)
