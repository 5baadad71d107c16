"""Integer cost vectors and the lexicographic order over them.

Component 0 is the highest-priority objective. Python tuples already compare
lexicographically, so :class:`CostVector` is a validated tuple subclass whose
``+`` is component-wise addition instead of concatenation.
"""

from __future__ import annotations

import enum
import re
from typing import Iterable

__all__ = [
    "COMPONENT_MAX",
    "CostOverflowError",
    "CostVector",
    "DimensionMismatchError",
    "Ordering",
    "format_cost",
    "lex_cmp",
    "parse_cost",
    "vec_add",
    "zero",
]

# Components model unsigned 64-bit counters.
COMPONENT_MAX = 2**64 - 1


class DimensionMismatchError(ValueError):
    """Raised when two cost vectors of different length are combined."""


class CostOverflowError(OverflowError):
    """Raised when a component would exceed :data:`COMPONENT_MAX`."""


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class CostVector(tuple):
    """Immutable d-dimensional vector of non-negative integer costs."""

    __slots__ = ()

    def __new__(cls, components: Iterable[int] = ()) -> "CostVector":
        values = tuple(components)
        if not values:
            raise ValueError("cost vector needs at least one component")
        for c in values:
            if isinstance(c, bool) or not isinstance(c, int):
                raise TypeError(f"cost components must be integers, got {c!r}")
            if c < 0:
                raise ValueError(f"cost components must be non-negative, got {c}")
            if c > COMPONENT_MAX:
                raise CostOverflowError(f"component {c} exceeds {COMPONENT_MAX}")
        return super().__new__(cls, values)

    @property
    def d(self) -> int:
        return len(self)

    def __add__(self, other):  # type: ignore[override]
        return vec_add(self, other)

    def __radd__(self, other):
        # lets sum(vectors, zero(d)) and sum() with int 0 start work
        if other == 0:
            return self
        return vec_add(other, self)

    def __str__(self) -> str:
        return format_cost(self)

    def __repr__(self) -> str:
        return f"CostVector({tuple(self)!r})"


def zero(d: int) -> CostVector:
    return CostVector((0,) * d)


def _check_dims(a, b) -> None:
    if len(a) != len(b):
        raise DimensionMismatchError(f"dimension mismatch: {len(a)} vs {len(b)}")


def lex_cmp(a: Iterable[int], b: Iterable[int]) -> Ordering:
    """Compare two cost vectors lexicographically.

    The first index at which the components differ decides; equal vectors
    compare ``EQUAL``. Vectors of different dimension are rejected.
    """
    a, b = tuple(a), tuple(b)
    _check_dims(a, b)
    for x, y in zip(a, b):
        if x < y:
            return Ordering.LESS
        if x > y:
            return Ordering.GREATER
    return Ordering.EQUAL


def vec_add(a: Iterable[int], b: Iterable[int]) -> CostVector:
    a, b = tuple(a), tuple(b)
    _check_dims(a, b)
    out = tuple(x + y for x, y in zip(a, b))
    for c in out:
        if c > COMPONENT_MAX:
            raise CostOverflowError(f"component overflow: {c} > {COMPONENT_MAX}")
    return CostVector(out)


def format_cost(c: Iterable[int]) -> str:
    """Render as ``{c0, c1, ...}``."""
    return "{" + ", ".join(str(x) for x in c) + "}"


_COST_RE = re.compile(r"^\s*\{\s*(\d+(?:\s*,\s*\d+)*)\s*\}\s*$")


def parse_cost(text: str) -> CostVector:
    """Inverse of :func:`format_cost`."""
    m = _COST_RE.match(text)
    if m is None:
        raise ValueError(f"not a cost vector literal: {text!r}")
    return CostVector(int(p) for p in m.group(1).split(","))
