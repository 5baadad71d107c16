"""Lexicographic conflict-based search: constraint tree over LA* replanning."""

from __future__ import annotations

import enum
import heapq
import itertools
import math
import time as _time
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

from .constraints import EDGE, VERTEX, Constraint, ConstraintSet, edge_constraint, vertex_constraint
from .cost_model import CostModel, edge_cost, transition_table
from .heuristics import HeuristicTable, build_heuristic
from .lastar import LowLevelStats, Path, SearchTimeout, default_horizon, la_star
from .lexcore import CostVector, zero
from .map_io import AgentTask, SearchGraph

__all__ = [
    "CTNode",
    "Conflict",
    "SolveResult",
    "SolveStats",
    "Status",
    "Violation",
    "detect_first_conflict",
    "generate_constraints",
    "lcbs_solve",
    "validate_plan",
]


class Conflict(NamedTuple):
    """Collision between agents ``i < j``.

    For vertex conflicts ``location`` is the shared vertex at ``time``; for
    edge conflicts it is ``(u, v)``, with ``i`` going ``u -> v`` and ``j``
    going ``v -> u`` between ``time`` and ``time + 1``.
    """

    kind: str
    location: object
    time: int
    i: int
    j: int


class Status(str, enum.Enum):
    SOLVED = "Solved"
    TIMEOUT = "Timeout"
    INFEASIBLE = "Infeasible"


@dataclass
class SolveStats:
    hl_expansions: int = 0
    hl_generated: int = 0
    hl_pushes: int = 0
    hl_pops: int = 0
    low_level: LowLevelStats = field(default_factory=LowLevelStats)
    wall_time: float = 0.0

    @property
    def ll_expansions(self) -> int:
        return self.low_level.expansions

    @property
    def heap_ops(self) -> int:
        return self.hl_pushes + self.hl_pops + self.low_level.heap_ops


@dataclass
class SolveResult:
    status: Status
    plan: Optional[list[Path]] = None
    cost: Optional[CostVector] = None
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def solved(self) -> bool:
        return self.status is Status.SOLVED


@dataclass(eq=False)
class CTNode:
    plan: list[Path]
    joint_cost: CostVector
    constraint: Optional[Constraint] = None  # the one added over the parent
    parent: Optional["CTNode"] = None
    depth: int = 0

    def constraints(self, agent: Optional[int] = None) -> list[Constraint]:
        out = []
        node = self
        while node is not None:
            c = node.constraint
            if c is not None and (agent is None or c.agent == agent):
                out.append(c)
            node = node.parent
        out.reverse()
        return out


def detect_first_conflict(plan: Sequence[Path]) -> Optional[Conflict]:
    """Earliest vertex or swap conflict in a joint plan.

    Finished agents keep occupying their goal. Among conflicts at the same
    time the lowest ``(i, j)`` pair wins, and a vertex conflict beats an edge
    conflict for the same pair.
    """
    if not plan:
        return None
    seqs = [p.vertices for p in plan]
    makespan = max(len(s) for s in seqs) - 1
    n = len(seqs)
    for t in range(makespan + 1):
        here = [s[t] if t < len(s) else s[-1] for s in seqs]
        if t < makespan:
            nxt = [s[t + 1] if t + 1 < len(s) else s[-1] for s in seqs]
        else:
            nxt = None
        for i in range(n):
            for j in range(i + 1, n):
                if here[i] == here[j]:
                    return Conflict(VERTEX, here[i], t, i, j)
                if nxt is not None and here[i] == nxt[j] and here[j] == nxt[i] and here[i] != here[j]:
                    return Conflict(EDGE, (here[i], here[j]), t, i, j)
    return None


def generate_constraints(conflict: Conflict) -> tuple[Constraint, Constraint]:
    """The two child constraints, the first for agent ``i``, the second for ``j``."""
    if conflict.kind == VERTEX:
        v = conflict.location
        return (
            vertex_constraint(conflict.i, v, conflict.time),
            vertex_constraint(conflict.j, v, conflict.time),
        )
    u, v = conflict.location
    return (
        edge_constraint(conflict.i, u, v, conflict.time),
        edge_constraint(conflict.j, v, u, conflict.time),
    )


def _check_tasks(graph: SearchGraph, tasks: Sequence[AgentTask]) -> None:
    if not tasks:
        raise ValueError("at least one agent task is required")
    for task in tasks:
        for v in (task.start, task.goal):
            if not 0 <= v < graph.num_vertices:
                raise ValueError(f"agent {task.agent_id}: vertex {v} not in graph")
    if len({t.start for t in tasks}) != len(tasks):
        raise ValueError("agent starts must be distinct")
    if len({t.goal for t in tasks}) != len(tasks):
        raise ValueError("agent goals must be distinct")


def joint_time_bound(num_vertices: int, num_agents: int) -> int:
    """Upper bound on the arrival times of a lexicographically optimal plan.

    With strictly positive costs an optimal plan never revisits a joint
    configuration before everyone has arrived, so its makespan is below the
    number of collision-free configurations.
    """
    return math.perm(num_vertices, num_agents) - 1


def lcbs_solve(
    graph: SearchGraph,
    model: CostModel,
    tasks: Sequence[AgentTask],
    time_limit: Optional[float] = None,
    *,
    horizon: Optional[int] = None,
    heuristics: Optional[Sequence[HeuristicTable]] = None,
) -> SolveResult:
    """Conflict-free joint plan with lexicographically minimal total cost.

    ``time_limit`` is in seconds (``None`` disables it). ``horizon`` fixes the
    latest allowed arrival time for every agent; by default each replan uses
    the LA* default, clipped by :func:`joint_time_bound`.
    """
    _check_tasks(graph, tasks)
    t0 = _time.monotonic()
    deadline = None if time_limit is None else t0 + time_limit
    stats = SolveStats()
    ll = stats.low_level
    table = transition_table(graph, model)
    if heuristics is None:
        heuristics = [build_heuristic(graph, model, task.goal) for task in tasks]
    cap = joint_time_bound(graph.num_vertices, len(tasks))

    def plan_agent(a: int, constraints: list[Constraint]) -> Optional[Path]:
        cons = ConstraintSet(constraints)
        hz = horizon if horizon is not None else min(default_horizon(graph.num_vertices, cons), cap)
        task = tasks[a]
        return la_star(
            task.start, task.goal, graph, model, heuristics[a], cons, hz,
            table=table, stats=ll, deadline=deadline,
        )

    def finish(status: Status, node: Optional[CTNode] = None) -> SolveResult:
        stats.wall_time = _time.monotonic() - t0
        if node is None:
            return SolveResult(status, stats=stats)
        return SolveResult(status, list(node.plan), node.joint_cost, stats)

    try:
        root_plan = []
        for a in range(len(tasks)):
            path = plan_agent(a, [])
            if path is None:
                return finish(Status.INFEASIBLE)
            root_plan.append(path)
        root = CTNode(root_plan, sum((p.cost for p in root_plan), zero(model.d)))

        counter = itertools.count()
        # (C, #constraints, FIFO) keeps the high-level order deterministic
        open_list = [(root.joint_cost, 0, next(counter), root)]
        stats.hl_pushes += 1
        stats.hl_generated += 1
        while open_list:
            if deadline is not None and _time.monotonic() > deadline:
                return finish(Status.TIMEOUT)
            _, _, _, node = heapq.heappop(open_list)
            stats.hl_pops += 1
            conflict = detect_first_conflict(node.plan)
            if conflict is None:
                return finish(Status.SOLVED, node)
            stats.hl_expansions += 1
            for omega in generate_constraints(conflict):
                a = omega.agent
                child_cons = node.constraints(a) + [omega]
                path = plan_agent(a, child_cons)
                if path is None:
                    continue
                plan = list(node.plan)
                plan[a] = path
                cost = sum((p.cost for p in plan), zero(model.d))
                assert cost >= node.joint_cost, "child cheaper than parent"
                child = CTNode(plan, cost, omega, node, node.depth + 1)
                heapq.heappush(open_list, (cost, child.depth, next(counter), child))
                stats.hl_pushes += 1
                stats.hl_generated += 1
        return finish(Status.INFEASIBLE)
    except SearchTimeout:
        return finish(Status.TIMEOUT)


class Violation(NamedTuple):
    kind: str  # start | goal | time | move | cost | vertex | edge | count
    agent: int
    time: int
    detail: str
    other: Optional[int] = None


def validate_plan(
    plan: Sequence[Path],
    graph: SearchGraph,
    model: CostModel,
    tasks: Sequence[AgentTask],
) -> list[Violation]:
    """Re-check a joint plan from scratch; an empty list means it is valid.

    Checks endpoints, timestamps, move legality, each path's stated cost and
    vertex/swap collisions with finished agents parked on their goals.
    """
    out: list[Violation] = []
    if len(plan) != len(tasks):
        out.append(Violation("count", -1, -1, f"{len(plan)} paths for {len(tasks)} agents"))
        return out
    routes = []
    for a, (path, task) in enumerate(zip(plan, tasks)):
        states = list(path.states)
        if not states:
            out.append(Violation("start", a, 0, "empty path"))
            routes.append([task.start])
            continue
        if states[0].vertex != task.start or states[0].time != 0:
            out.append(Violation("start", a, states[0].time, f"starts at {tuple(states[0])}"))
        if states[-1].vertex != task.goal:
            out.append(Violation("goal", a, states[-1].time, f"ends at {states[-1].vertex}"))
        total = [0] * model.d
        for k in range(1, len(states)):
            (u, tu), (v, tv) = states[k - 1], states[k]
            if tv != tu + 1:
                out.append(Violation("time", a, tv, f"time jumps {tu} -> {tv}"))
            try:
                c = edge_cost(model, graph, u, v)
            except (ValueError, IndexError):
                out.append(Violation("move", a, tu, f"illegal move {u} -> {v}"))
                continue
            total = [x + y for x, y in zip(total, c)]
        if tuple(total) != tuple(path.cost):
            out.append(Violation("cost", a, -1, f"stated {tuple(path.cost)}, recomputed {tuple(total)}"))
        routes.append([s.vertex for s in states])

    horizon = max(len(r) for r in routes)
    for t in range(horizon):
        cells: dict[int, int] = {}
        for a, r in enumerate(routes):
            v = r[min(t, len(r) - 1)]
            if v in cells:
                out.append(Violation("vertex", cells[v], t, f"both at vertex {v}", a))
            else:
                cells[v] = a
    for t in range(horizon - 1):
        moved = {}
        for a, r in enumerate(routes):
            u, v = r[min(t, len(r) - 1)], r[min(t + 1, len(r) - 1)]
            if u != v:
                moved[(u, v)] = a
        for (u, v), a in moved.items():
            b = moved.get((v, u))
            if b is not None and a < b:
                out.append(Violation("edge", a, t, f"swap across {u} <-> {v}", b))
    return out
