"""Time-indexed vertex and edge constraints."""

from __future__ import annotations

from typing import Iterable, NamedTuple, Optional

__all__ = ["Constraint", "ConstraintSet", "edge_constraint", "vertex_constraint"]

VERTEX = "vertex"
EDGE = "edge"


class Constraint(NamedTuple):
    """Prohibition for one agent.

    ``vertex`` kind: the agent may not occupy ``v`` at ``time``.
    ``edge`` kind: the agent may not be at ``v`` at ``time`` and at ``to`` at
    ``time + 1``.
    """

    agent: int
    kind: str
    v: int
    time: int
    to: Optional[int] = None


def vertex_constraint(agent: int, v: int, time: int) -> Constraint:
    if time < 0:
        raise ValueError("constraint time must be non-negative")
    return Constraint(agent, VERTEX, v, time)


def edge_constraint(agent: int, u: int, v: int, time: int) -> Constraint:
    if time < 0:
        raise ValueError("constraint time must be non-negative")
    return Constraint(agent, EDGE, u, time, v)


class ConstraintSet:
    """Lookup structure over the constraints that apply to a single path.

    Agent ids are ignored here; callers pass only the relevant constraints.
    """

    __slots__ = ("vertex", "edge", "latest", "_goal_cache")

    def __init__(self, constraints: Iterable[Constraint] = ()):
        self.vertex: set[tuple[int, int]] = set()
        self.edge: set[tuple[int, int, int]] = set()
        self.latest = -1
        for c in constraints:
            if c.kind == VERTEX:
                self.vertex.add((c.v, c.time))
            elif c.kind == EDGE:
                self.edge.add((c.v, c.to, c.time))
            else:
                raise ValueError(f"unknown constraint kind {c.kind!r}")
            self.latest = max(self.latest, c.time)
        self._goal_cache: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self.vertex) + len(self.edge)

    def violates_transition(self, v: int, t: int, u: int) -> bool:
        return (u, t + 1) in self.vertex or (v, u, t) in self.edge

    def last_vertex_time(self, v: int) -> int:
        """Latest time ``v`` is forbidden, or -1."""
        cached = self._goal_cache.get(v)
        if cached is None:
            cached = max((t for (w, t) in self.vertex if w == v), default=-1)
            self._goal_cache[v] = cached
        return cached

    def safe_to_stay(self, v: int, t: int) -> bool:
        """True when remaining at ``v`` from ``t`` onward breaks no constraint."""
        return t > self.last_vertex_time(v)
