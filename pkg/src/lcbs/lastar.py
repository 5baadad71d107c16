"""Lexicographic A* over time-augmented states ``(v, t)``."""

from __future__ import annotations

import heapq
import time as _time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Optional

from .constraints import Constraint, ConstraintSet
from .cost_model import CostModel, TransitionTable, transition_table
from .heuristics import HeuristicTable
from .lexcore import CostVector
from .map_io import SearchGraph

__all__ = ["LowLevelStats", "Path", "SearchTimeout", "TimedState", "default_horizon", "la_star"]

# deadline polled every this many pops
_TIME_CHECK_MASK = 0x3FF


class SearchTimeout(Exception):
    """The wall-clock deadline passed during a search."""


class TimedState(NamedTuple):
    vertex: int
    time: int


@dataclass(frozen=True)
class Path:
    states: tuple[TimedState, ...]
    cost: CostVector

    @classmethod
    def from_vertices(cls, vertices: Iterable[int], cost) -> "Path":
        return cls(tuple(TimedState(v, t) for t, v in enumerate(vertices)), CostVector(cost))

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(s.vertex for s in self.states)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def arrival(self) -> int:
        return self.states[-1].time

    def at(self, t: int) -> int:
        """Vertex at time ``t``; the agent holds its last vertex afterwards."""
        vs = self.vertices
        return vs[t] if t < len(vs) else vs[-1]


@dataclass
class LowLevelStats:
    calls: int = 0
    expansions: int = 0
    generations: int = 0
    reopenings: int = 0
    pushes: int = 0
    pops: int = 0

    @property
    def heap_ops(self) -> int:
        return self.pushes + self.pops

    def merge(self, other: "LowLevelStats") -> None:
        for name in ("calls", "expansions", "generations", "reopenings", "pushes", "pops"):
            setattr(self, name, getattr(self, name) + getattr(other, name))


def default_horizon(num_vertices: int, constraints: ConstraintSet) -> int:
    return 2 * num_vertices + max(constraints.latest, 0) + 1


def la_star(
    start: int,
    goal: int,
    graph: SearchGraph,
    model: CostModel,
    h: HeuristicTable,
    constraints: Iterable[Constraint] | ConstraintSet = (),
    horizon: Optional[int] = None,
    *,
    table: Optional[TransitionTable] = None,
    stats: Optional[LowLevelStats] = None,
    deadline: Optional[float] = None,
) -> Optional[Path]:
    """Lexicographically cheapest constraint-respecting path, or ``None``.

    All ``constraints`` apply to this agent. A goal pop is accepted only if
    the agent can then stay at the goal forever. ``horizon`` bounds the
    arrival time (default: twice the vertex count plus the latest constraint
    time plus one). ``deadline`` is a ``time.monotonic()`` value; passing it
    raises :class:`SearchTimeout`.

    Equal ``f`` keys are broken by the deeper node (lex-larger ``g``), then
    later time, then smaller vertex index.
    """
    if h.goal != goal:
        raise ValueError(f"heuristic built for goal {h.goal}, asked for {goal}")
    cons = constraints if isinstance(constraints, ConstraintSet) else ConstraintSet(constraints)
    if horizon is None:
        horizon = default_horizon(graph.num_vertices, cons)
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    if table is None:
        table = transition_table(graph, model)
    if stats is None:
        stats = LowLevelStats()
    stats.calls += 1

    hv = h.values
    if hv[start] is None or (start, 0) in cons.vertex:
        return None
    moves = table.moves
    vcons, econs = cons.vertex, cons.edge
    goal_free_after = cons.last_vertex_time(goal)
    check_edges = bool(econs)

    g0 = (0,) * model.d
    # entries: (f, -g, -t, v, g); parents keyed by (v, t)
    heap = [(hv[start], g0, 0, start, g0)]
    best = {(start, 0): g0}
    parent: dict[tuple[int, int], tuple[int, int]] = {}
    pushes, pops, expansions, generations, reopenings = 1, 0, 0, 0, 0
    last_f = None
    found = None

    while heap:
        f, _, negt, v, g = heapq.heappop(heap)
        pops += 1
        if deadline is not None and not (pops & _TIME_CHECK_MASK) and _time.monotonic() > deadline:
            stats.pushes += pushes
            stats.pops += pops
            stats.expansions += expansions
            stats.generations += generations
            stats.reopenings += reopenings
            raise SearchTimeout
        t = -negt
        if best[(v, t)] is not g:
            continue  # superseded by a lex-better g for this state
        assert last_f is None or f >= last_f, "f decreased: heuristic inconsistent"
        last_f = f
        if v == goal and t > goal_free_after:
            found = (v, t)
            break
        if t >= horizon:
            continue
        expansions += 1
        t1 = t + 1
        for u, c in moves[v]:
            if (u, t1) in vcons or (check_edges and (v, u, t) in econs):
                continue
            hu = hv[u]
            if hu is None:
                continue
            g2 = tuple([a + b for a, b in zip(g, c)])
            generations += 1
            key = (u, t1)
            old = best.get(key)
            if old is None or g2 < old:
                if old is not None:
                    reopenings += 1
                best[key] = g2
                parent[key] = (v, t)
                heapq.heappush(heap, (tuple([a + b for a, b in zip(g2, hu)]), tuple([-a for a in g2]), -t1, u, g2))
                pushes += 1

    stats.pushes += pushes
    stats.pops += pops
    stats.expansions += expansions
    stats.generations += generations
    stats.reopenings += reopenings
    if found is None:
        return None
    states = [TimedState(*found)]
    key = found
    while key in parent:
        key = parent[key]
        states.append(TimedState(*key))
    states.reverse()
    return Path(tuple(states), CostVector(best[found]))
