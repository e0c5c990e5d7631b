"""
Grading groups and exact phases.

A grading group is Z_{m_1} × … × Z_{m_k} with m_r = 0 standing for Z.
Commutation factors and factor sets used here take values in the roots of
unity, so a value is stored as a turn t ∈ ℚ/ℤ (the number e^{2πit}) and
all identities are checked without rounding.
"""

from __future__ import annotations

import cmath
import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from moyal_lab.errors import DimensionError, DomainError, UnsupportedConfigurationError

Element = tuple[int, ...]

# Largest root-of-unity order accepted when reading a float back into a Phase.
MAX_PHASE_ORDER = 64


# ---------------------------------------------------------------------------
# Phase
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Phase:
    """e^{2πi·turn}, turn reduced to [0, 1)."""

    turn: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "turn", Fraction(self.turn) % 1)

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(self.turn + other.turn)

    def __truediv__(self, other: "Phase") -> "Phase":
        return Phase(self.turn - other.turn)

    def __pow__(self, k: int) -> "Phase":
        return Phase(self.turn * k)

    def inverse(self) -> "Phase":
        return Phase(-self.turn)

    @property
    def order(self) -> int:
        return self.turn.denominator

    @property
    def is_one(self) -> bool:
        return self.turn == 0

    @property
    def value(self) -> complex:
        quarter = {Fraction(0): 1, Fraction(1, 4): 1j, Fraction(1, 2): -1, Fraction(3, 4): -1j}
        if self.turn in quarter:
            return complex(quarter[self.turn])
        return cmath.exp(2j * math.pi * float(self.turn))

    def label(self) -> str:
        names = {Fraction(0): "1", Fraction(1, 4): "i", Fraction(1, 2): "-1", Fraction(3, 4): "-i"}
        return names.get(self.turn, f"exp(2pi i {self.turn})")

    @classmethod
    def sign(cls, s: int) -> "Phase":
        if s not in (1, -1):
            raise DomainError(f"sign must be +1 or -1, got {s!r}")
        return cls(Fraction(0) if s == 1 else Fraction(1, 2))

    @classmethod
    def from_value(cls, z: complex, tolerance: float = 1e-10, max_order: int = MAX_PHASE_ORDER) -> "Phase":
        """Nearest root of unity of order ≤ max_order; DomainError if z is not one."""
        z = complex(z)
        if abs(abs(z) - 1.0) > tolerance:
            raise DomainError(f"{z!r} is not a unit complex number")
        turn = Fraction(cmath.phase(z) / (2.0 * math.pi)).limit_denominator(max_order)
        if abs(cmath.exp(2j * math.pi * float(turn)) - z) > tolerance:
            raise DomainError(f"{z!r} is not a root of unity of order <= {max_order}")
        return cls(turn)

    @classmethod
    def parse(cls, raw) -> "Phase":
        """Accepts 1, -1, "i", "-i", a complex number, or {"turn": "p/q"}."""
        if isinstance(raw, Phase):
            return raw
        if isinstance(raw, dict):
            if "turn" not in raw:
                raise DomainError(f"phase mapping needs a 'turn' key, got {raw!r}")
            return cls(Fraction(str(raw["turn"])))
        if isinstance(raw, str):
            text = raw.strip().replace(" ", "")
            named = {"1": 0, "+1": 0, "-1": Fraction(1, 2), "i": Fraction(1, 4), "+i": Fraction(1, 4),
                     "-i": Fraction(3, 4)}
            if text in named:
                return cls(Fraction(named[text]))
            try:
                return cls.from_value(complex(text.replace("i", "j")))
            except ValueError as exc:
                raise DomainError(f"cannot read phase {raw!r}") from exc
        if isinstance(raw, (int, float, complex)):
            return cls.from_value(complex(raw))
        raise DomainError(f"cannot read phase {raw!r}")


# ---------------------------------------------------------------------------
# GradingGroup
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradingGroup:
    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        orders = tuple(int(m) for m in self.orders)
        if not orders:
            raise DomainError("a grading group needs at least one generator")
        if any(m < 0 or m == 1 for m in orders):
            raise DomainError(f"cyclic orders must be 0 (for Z) or >= 2, got {orders}")
        object.__setattr__(self, "orders", orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def is_finite(self) -> bool:
        return all(m > 0 for m in self.orders)

    @property
    def size(self) -> int:
        if not self.is_finite:
            raise UnsupportedConfigurationError(f"{self.label()} is infinite")
        return math.prod(self.orders)

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    def generator(self, r: int) -> Element:
        return tuple(1 if s == r else 0 for s in range(self.rank))

    def generators(self) -> list[Element]:
        return [self.generator(r) for r in range(self.rank)]

    def reduce(self, i) -> Element:
        i = tuple(int(c) for c in i)
        if len(i) != self.rank:
            raise DimensionError(f"element {i} does not have {self.rank} components")
        return tuple(c % m if m else c for c, m in zip(i, self.orders))

    def add(self, i, j) -> Element:
        return self.reduce(a + b for a, b in zip(i, j))

    def neg(self, i) -> Element:
        return self.reduce(-a for a in i)

    def sub(self, i, j) -> Element:
        return self.reduce(a - b for a, b in zip(i, j))

    def elements(self) -> list[Element]:
        if not self.is_finite:
            raise UnsupportedConfigurationError(f"cannot enumerate the infinite group {self.label()}")
        return [tuple(e) for e in itertools.product(*(range(m) for m in self.orders))]

    def sample(self, rng: np.random.Generator, count: int, box: int = 3) -> list[Element]:
        """Random elements; infinite factors draw from [−box, box]."""
        out = []
        for _ in range(count):
            out.append(tuple(
                int(rng.integers(0, m)) if m else int(rng.integers(-box, box + 1)) for m in self.orders
            ))
        return out

    def label(self) -> str:
        return "x".join(f"Z{m}" if m else "Z" for m in self.orders)


_GROUP_FACTOR = re.compile(r"^Z(\d*)$")


def parse_group(text: str) -> GradingGroup:
    """'Z2xZ2', 'Z3', 'ZxZ2' → GradingGroup."""
    orders = []
    for part in text.replace("×", "x").replace(" ", "").split("x"):
        match = _GROUP_FACTOR.match(part)
        if not match:
            raise DomainError(f"cannot read group factor {part!r} in {text!r}; expected Z or Z<m>")
        orders.append(int(match.group(1)) if match.group(1) else 0)
    return GradingGroup(tuple(orders))
