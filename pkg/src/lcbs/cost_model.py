"""Deterministic d-objective edge and wait costs.

Objective 0 is travel time (every move and wait costs 1). The remaining
objectives are either seeded pseudo-random integers per undirected edge
(``unit-first``) or copies of objective 0 (``duplicated``).
"""

from __future__ import annotations

import enum
import hashlib
import struct
from dataclasses import dataclass

from .lexcore import CostVector
from .map_io import SearchGraph

__all__ = ["CostMode", "CostModel", "TransitionTable", "edge_cost", "parse_cost_range", "transition_table"]


class CostMode(str, enum.Enum):
    UNIT_FIRST = "unit-first"
    DUPLICATED = "duplicated"


@dataclass(frozen=True)
class CostModel:
    d: int = 1
    seed: int = 0
    mode: CostMode = CostMode.UNIT_FIRST
    cost_range: tuple[int, int] = (1, 10)
    unit_wait: bool = False  # force (1, ..., 1) for waits

    def __post_init__(self):
        object.__setattr__(self, "mode", CostMode(self.mode))
        if self.d < 1:
            raise ValueError(f"need at least one objective, got d={self.d}")
        lo, hi = self.cost_range
        if lo < 1 or hi < lo:
            raise ValueError(f"cost range must satisfy 1 <= lo <= hi, got {lo}..{hi}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def describe(self) -> str:
        lo, hi = self.cost_range
        wait = ",unit-wait" if self.unit_wait else ""
        return f"d={self.d},mode={self.mode.value},seed={self.seed},range={lo}..{hi}{wait}"

    def _draw(self, a: int, b: int, k: int) -> int:
        lo, hi = self.cost_range
        key = struct.pack("<QQQQ", self.seed, a, b, k)
        r = int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")
        return lo + r % (hi - lo + 1)

    def raw_cost(self, u: int, v: int) -> tuple[int, ...]:
        """Cost of ``u -> v`` (``u == v`` is a wait) without adjacency checks."""
        if self.d == 1:
            return (1,)
        if self.mode is CostMode.DUPLICATED or (u == v and self.unit_wait):
            return (1,) * self.d
        a, b = (u, v) if u <= v else (v, u)
        return (1,) + tuple(self._draw(a, b, k) for k in range(1, self.d))


def edge_cost(model: CostModel, graph: SearchGraph, u: int, v: int) -> CostVector:
    """Cost vector of moving ``u -> v``, or waiting when ``u == v``.

    Symmetric in ``u`` and ``v``; raises ``ValueError`` when the cells are
    not adjacent.
    """
    if u != v and v not in graph.neighbors[u]:
        raise ValueError(f"vertices {u} and {v} are not adjacent")
    return CostVector(model.raw_cost(u, v))


def parse_cost_range(text: str) -> tuple[int, int]:
    """Parse ``LO..HI``."""
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ValueError(f"cost range must look like LO..HI, got {text!r}")
    return int(lo), int(hi)


class TransitionTable:
    """Per-vertex successor lists ``[(u, cost), ...]`` with the wait last.

    Built once per (graph, model) so planners never hash inside their loops.
    """

    def __init__(self, graph: SearchGraph, model: CostModel):
        self.graph = graph
        self.model = model
        self.moves: list[tuple[tuple[int, tuple[int, ...]], ...]] = []
        for v, nbrs in enumerate(graph.neighbors):
            succ = [(u, model.raw_cost(v, u)) for u in nbrs]
            succ.append((v, model.raw_cost(v, v)))
            self.moves.append(tuple(succ))


_TABLES: dict = {}


def transition_table(graph: SearchGraph, model: CostModel) -> TransitionTable:
    key = (id(graph), model)
    table = _TABLES.get(key)
    if table is None or table.graph is not graph:
        if len(_TABLES) > 64:
            _TABLES.clear()
        table = _TABLES[key] = TransitionTable(graph, model)
    return table
