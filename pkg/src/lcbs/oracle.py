"""Brute-force ground truth for small instances.

Two independent routes to the lexicographic optimum:

* :func:`enumerate_joint_plans` walks the joint time-expanded action space
  depth-first up to a horizon and collects the cost of every valid joint
  plan that is not provably dominated, so the resulting Pareto set is exact.
* :func:`joint_lex_astar` is a lexicographic A* over joint configurations.

Neither shares search code with the solver; the lower bounds come from
scipy's Dijkstra rather than :mod:`lcbs.heuristics`.

Cost accounting matches the solver: an agent stops paying once it reaches
its goal for the last time. In the joint state this is an explicit
zero-cost ``finish`` action available at the goal, after which the agent is
parked there for good.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .cost_model import CostModel, edge_cost
from .lastar import Path
from .lexcore import CostVector
from .map_io import AgentTask, SearchGraph

__all__ = [
    "OracleBudgetExceeded",
    "OracleResult",
    "dominates",
    "enumerate_joint_plans",
    "joint_lex_astar",
    "pareto_filter",
]

DEFAULT_BUDGET = 10**7


class OracleBudgetExceeded(RuntimeError):
    """The enumeration generated more partial states than allowed."""


@dataclass
class OracleResult:
    lex_min_cost: Optional[CostVector]
    lex_min_plan: Optional[list[Path]]
    pareto_set_costs: list[CostVector]
    plans_enumerated: int
    states_generated: int

    @property
    def feasible(self) -> bool:
        return self.lex_min_cost is not None


def dominates(a: Sequence[int], b: Sequence[int]) -> bool:
    """Pareto dominance: ``a <= b`` everywhere and ``a != b``."""
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return all(x <= y for x, y in zip(a, b)) and tuple(a) != tuple(b)


def _weakly_dominates(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def pareto_filter(costs) -> list[tuple[int, ...]]:
    """Distinct non-dominated vectors, sorted lexicographically."""
    out: list[tuple[int, ...]] = []
    for c in sorted(set(map(tuple, costs))):
        # sorted order: a later vector can never dominate an earlier one
        if not any(_weakly_dominates(p, c) for p in out):
            out.append(c)
    return out


class _Instance:
    """Per-agent move options and lower bounds, built independently of the solver."""

    def __init__(self, graph: SearchGraph, model: CostModel, tasks: Sequence[AgentTask]):
        if not tasks:
            raise ValueError("at least one agent task is required")
        if len({t.start for t in tasks}) != len(tasks) or len({t.goal for t in tasks}) != len(tasks):
            raise ValueError("agent starts and goals must be distinct")
        self.n = len(tasks)
        self.d = model.d
        self.starts = tuple(t.start for t in tasks)
        self.goals = tuple(t.goal for t in tasks)
        nv = graph.num_vertices
        self.options = []
        for v in range(nv):
            opts = [(u, tuple(edge_cost(model, graph, v, u))) for u in graph.neighbors[v]]
            opts.append((v, tuple(edge_cost(model, graph, v, v))))
            self.options.append(opts)

        rows, cols = [], []
        weights = [[] for _ in range(self.d)]
        for v in range(nv):
            for u, c in self.options[v][:-1]:
                rows.append(v)
                cols.append(u)
                for k in range(self.d):
                    weights[k].append(c[k])
        goals = np.array(self.goals, dtype=int)
        hop_m = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(nv, nv))
        hops = dijkstra(hop_m, directed=True, indices=goals) if rows else np.where(
            np.eye(nv)[goals] > 0, 0.0, np.inf
        )
        # lower[i][v]: per-objective cheapest cost from v to goal i, None if unreachable
        per_k = []
        for k in range(self.d):
            if rows:
                m = csr_matrix((np.array(weights[k], dtype=float), (rows, cols)), shape=(nv, nv))
                # costs are symmetric, so distances *to* the goal equal distances from it
                per_k.append(dijkstra(m, directed=True, indices=goals))
            else:
                per_k.append(hops)
        self.hops = []
        self.lower = []
        for i in range(self.n):
            h_i = [None if np.isinf(hops[i][v]) else int(hops[i][v]) for v in range(nv)]
            self.hops.append(h_i)
            self.lower.append(
                [None if h_i[v] is None else tuple(int(per_k[k][i][v]) for k in range(self.d)) for v in range(nv)]
            )

    def bound(self, g, positions, done) -> Optional[tuple[int, ...]]:
        total = list(g)
        for i in range(self.n):
            if done >> i & 1:
                continue
            lb = self.lower[i][positions[i]]
            if lb is None:
                return None
            for k in range(self.d):
                total[k] += lb[k]
        return tuple(total)

    def successors(self, positions, done, t: int, horizon: Optional[int]):
        """Conflict-free joint steps as ``(positions', done', step_cost)``."""
        per_agent = []
        zero = (0,) * self.d
        for i in range(self.n):
            v = positions[i]
            if done >> i & 1:
                per_agent.append([(v, zero, True)])
                continue
            opts = []
            for u, c in self.options[v]:
                hop = self.hops[i][u]
                if hop is None or (horizon is not None and t + 1 + hop > horizon):
                    continue
                opts.append((u, c, False))
            if v == self.goals[i]:
                opts.append((v, zero, True))
            if not opts:
                return []
            per_agent.append(opts)
        out = []
        n = self.n
        for combo in itertools.product(*per_agent):
            nxt = tuple(o[0] for o in combo)
            if len(set(nxt)) < n:
                continue
            swap = False
            for i in range(n):
                if nxt[i] == positions[i]:
                    continue
                for j in range(i + 1, n):
                    if nxt[i] == positions[j] and nxt[j] == positions[i]:
                        swap = True
                        break
                if swap:
                    break
            if swap:
                continue
            cost = tuple(sum(o[1][k] for o in combo) for k in range(self.d))
            new_done = done
            for i, o in enumerate(combo):
                if o[2]:
                    new_done |= 1 << i
            out.append((nxt, new_done, cost))
        return out

    def all_home(self, positions) -> bool:
        return positions == self.goals


def _plan_from_rows(graph, model, inst: _Instance, rows: list[tuple[int, ...]]) -> list[Path]:
    plan = []
    for i in range(inst.n):
        seq = [r[i] for r in rows]
        end = len(seq)
        while end > 1 and seq[end - 1] == inst.goals[i] and seq[end - 2] == inst.goals[i]:
            end -= 1
        seq = seq[:end]
        total = [0] * model.d
        for u, v in zip(seq, seq[1:]):
            total = [x + y for x, y in zip(total, edge_cost(model, graph, u, v))]
        plan.append(Path.from_vertices(seq, total))
    return plan


def enumerate_joint_plans(
    graph: SearchGraph,
    model: CostModel,
    tasks: Sequence[AgentTask],
    horizon: int,
    budget: int = DEFAULT_BUDGET,
) -> OracleResult:
    """Exhaustively enumerate valid joint plans whose arrivals are ``<= horizon``.

    Depth-first over joint steps, cheapest lower bound first. A branch is cut
    only when every completion is provably no better than something already
    found: its lower bound is weakly dominated by a recorded plan cost, or the
    same joint state was already reached no later and no more expensively.
    Returns the lexicographic minimum, one plan attaining it and the exact
    Pareto set of cost vectors. Raises :class:`OracleBudgetExceeded` once
    more than ``budget`` partial states have been generated.
    """
    inst = _Instance(graph, model, tasks)
    d = inst.d
    solutions: list[tuple[int, ...]] = []
    best_cost: Optional[tuple[int, ...]] = None
    best_rows: list = []
    plans = 0
    generated = 1
    seen: dict[tuple, list[tuple[int, tuple[int, ...]]]] = {}
    trail = [inst.starts]

    def covered(lb) -> bool:
        for s in solutions:
            if _weakly_dominates(s, lb):
                return True
        return False

    def record(g) -> None:
        nonlocal solutions, best_cost, best_rows, plans
        plans += 1
        if covered(g):
            return
        solutions = [s for s in solutions if not _weakly_dominates(g, s)]
        solutions.append(g)
        if best_cost is None or g < best_cost:
            best_cost = g
            best_rows = list(trail)

    def visit(positions, done, t, g) -> None:
        nonlocal generated
        if t >= horizon:
            return
        children = []
        for nxt, new_done, step in inst.successors(positions, done, t, horizon):
            g2 = tuple([a + b for a, b in zip(g, step)])
            generated += 1
            if generated > budget:
                raise OracleBudgetExceeded(f"more than {budget} partial states generated")
            lb = inst.bound(g2, nxt, new_done)
            if lb is None or covered(lb):
                continue
            children.append((lb, g2, nxt, new_done))
        children.sort()
        t1 = t + 1
        for lb, g2, nxt, new_done in children:
            if covered(lb):
                continue
            if inst.all_home(nxt):
                trail.append(nxt)
                record(g2)
                trail.pop()
                continue
            key = (nxt, new_done)
            entries = seen.get(key)
            if entries is None:
                seen[key] = [(t1, g2)]
            else:
                if any(te <= t1 and _weakly_dominates(ge, g2) for te, ge in entries):
                    continue
                entries[:] = [(te, ge) for te, ge in entries if not (t1 <= te and _weakly_dominates(g2, ge))]
                entries.append((t1, g2))
            trail.append(nxt)
            visit(nxt, new_done, t1, g2)
            trail.pop()

    if inst.all_home(inst.starts):
        record((0,) * d)
    else:
        visit(inst.starts, 0, 0, (0,) * d)

    pareto = [CostVector(c) for c in pareto_filter(solutions)]
    if best_cost is None:
        return OracleResult(None, None, pareto, plans, generated)
    plan = _plan_from_rows(graph, model, inst, best_rows)
    lex_cost = CostVector(best_cost)
    assert sum((p.cost for p in plan), CostVector((0,) * d)) == lex_cost
    return OracleResult(lex_cost, plan, pareto, plans, generated)


def joint_lex_astar(
    graph: SearchGraph,
    model: CostModel,
    tasks: Sequence[AgentTask],
    horizon: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
) -> tuple[Optional[CostVector], Optional[list[Path]]]:
    """Lexicographic A* in the joint configuration space.

    With ``horizon`` the time step becomes part of the state and arrivals are
    limited to it. Returns ``(None, None)`` when no valid plan exists.
    """
    inst = _Instance(graph, model, tasks)
    zero = (0,) * inst.d
    start = (inst.starts, 0, 0)
    h0 = inst.bound(zero, inst.starts, 0)
    if h0 is None:
        return None, None
    best_g = {start: zero}
    parent = {start: None}
    counter = itertools.count()
    heap = [(h0, zero, next(counter), start)]
    generated = 1
    while heap:
        f, g, _, state = heapq.heappop(heap)
        if best_g[state] != g:
            continue
        positions, done, t = state
        if inst.all_home(positions):
            rows = []
            s = state
            while s is not None:
                rows.append(s[0])
                s = parent[s]
            rows.reverse()
            plan = _plan_from_rows(graph, model, inst, rows)
            assert sum((p.cost for p in plan), CostVector(zero)) == g
            return CostVector(g), plan
        for nxt, new_done, step in inst.successors(positions, done, t, horizon):
            g2 = tuple(a + b for a, b in zip(g, step))
            key = (nxt, new_done, t + 1 if horizon is not None else 0)
            old = best_g.get(key)
            if old is not None and not g2 < old:
                continue
            f2 = inst.bound(g2, nxt, new_done)
            if f2 is None:
                continue
            generated += 1
            if generated > budget:
                raise OracleBudgetExceeded(f"more than {budget} joint states generated")
            best_g[key] = g2
            parent[key] = state
            heapq.heappush(heap, (f2, g2, next(counter), key))
    return None, None
