"""Ideal-point heuristic: per-objective shortest-path costs to a goal."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Optional

from .cost_model import CostModel, transition_table
from .lexcore import CostVector
from .map_io import SearchGraph

__all__ = ["HeuristicTable", "build_heuristic"]


@dataclass(frozen=True, eq=False)
class HeuristicTable:
    goal: int
    d: int
    values: tuple[Optional[tuple[int, ...]], ...]  # None marks an unreachable vertex

    def __getitem__(self, v: int) -> Optional[tuple[int, ...]]:
        return self.values[v]

    def reachable(self, v: int) -> bool:
        return self.values[v] is not None

    def vector(self, v: int) -> CostVector:
        value = self.values[v]
        if value is None:
            raise KeyError(f"vertex {v} cannot reach goal {self.goal}")
        return CostVector(value)


def _dijkstra(graph: SearchGraph, weights: list[list[int]], goal: int) -> list[Optional[int]]:
    dist: list[Optional[int]] = [None] * graph.num_vertices
    dist[goal] = 0
    heap = [(0, goal)]
    while heap:
        dv, v = heapq.heappop(heap)
        if dv != dist[v]:
            continue
        for u, w in zip(graph.neighbors[v], weights[v]):
            nd = dv + w
            if dist[u] is None or nd < dist[u]:
                dist[u] = nd
                heapq.heappush(heap, (nd, u))
    return dist


def build_heuristic(graph: SearchGraph, model: CostModel, goal: int) -> HeuristicTable:
    """Run one backward uniform-cost search per objective from ``goal``.

    Only move edges are used; waiting never brings an agent closer. Edge costs
    are symmetric, so searching outward from the goal is exact.
    """
    table = transition_table(graph, model)
    # moves[v] lists the wait last; drop it
    rows = [[cost for _, cost in table.moves[v][:-1]] for v in range(graph.num_vertices)]
    columns = []
    for k in range(model.d):
        weights = [[cost[k] for cost in row] for row in rows]
        columns.append(_dijkstra(graph, weights, goal))
    values = []
    for v in range(graph.num_vertices):
        if columns[0][v] is None:
            values.append(None)
        else:
            values.append(tuple(col[v] for col in columns))
    return HeuristicTable(goal, model.d, tuple(values))
