"""Seeded random maps and agent tasks."""

from __future__ import annotations

import random
from collections import deque
from typing import Optional

from .map_io import AgentTask, GridMap, SearchGraph, build_graph

__all__ = ["bfs_distances", "random_grid", "random_instance", "random_tasks"]


def bfs_distances(graph: SearchGraph, source: int) -> list[Optional[int]]:
    dist: list[Optional[int]] = [None] * graph.num_vertices
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for u in graph.neighbors[v]:
            if dist[u] is None:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def random_grid(width: int, height: int, obstacle_fraction: float, rng: random.Random) -> GridMap:
    """Grid with ``round(fraction * cells)`` blocked cells chosen uniformly."""
    cells = width * height
    blocked = set(rng.sample(range(cells), round(obstacle_fraction * cells)))
    rows = [
        "".join("@" if y * width + x in blocked else "." for x in range(width)) for y in range(height)
    ]
    return GridMap.from_rows(rows)


def random_tasks(
    graph: SearchGraph,
    n: int,
    rng: random.Random,
    max_distance: Optional[int] = None,
    max_tries: int = 10_000,
) -> list[AgentTask]:
    """``n`` tasks with distinct starts, distinct goals and connected pairs.

    ``max_distance`` caps the start-goal hop distance.
    """
    for _ in range(max_tries):
        starts = rng.sample(range(graph.num_vertices), n)
        tasks = []
        goals_used: set[int] = set()
        for i, s in enumerate(starts):
            dist = bfs_distances(graph, s)
            choices = [
                v
                for v, dv in enumerate(dist)
                if dv is not None and dv > 0 and v not in goals_used
                and (max_distance is None or dv <= max_distance)
            ]
            if not choices:
                break
            goal = rng.choice(choices)
            goals_used.add(goal)
            tasks.append(AgentTask(i, s, goal))
        if len(tasks) == n:
            return tasks
    raise RuntimeError(f"could not place {n} agents after {max_tries} tries")


def random_instance(
    seed: int,
    size: int = 8,
    obstacle_fraction: float = 0.15,
    agents: int = 2,
    max_distance: Optional[int] = None,
) -> tuple[GridMap, SearchGraph, list[AgentTask]]:
    rng = random.Random(seed)
    grid = random_grid(size, size, obstacle_fraction, rng)
    graph = build_graph(grid)
    return grid, graph, random_tasks(graph, agents, rng, max_distance)
