"""Regenerate the bundled empty-32-32 map and its 25 seeded scenario files.

Each file holds 100 tasks with distinct starts, distinct goals and
start != goal, drawn from ``random.Random("empty-32-32-seeded-<k>")``.
"""

import random
import sys
from pathlib import Path

from lcbs.instances import bfs_distances
from lcbs.map_io import AgentTask, GridMap, build_graph, render_map, render_scen

TASKS = 100


def main(out_dir: Path) -> None:
    grid = GridMap.from_rows(["." * 32] * 32)
    (out_dir / "empty-32-32.map").write_text(render_map(grid))
    graph = build_graph(grid)
    cells = range(graph.num_vertices)
    for k in range(1, 26):
        rng = random.Random(f"empty-32-32-seeded-{k}")
        starts = rng.sample(cells, TASKS)
        goals = rng.sample(cells, TASKS)
        used = set(goals)
        for i, (s, g) in enumerate(zip(starts, goals)):
            if s == g:
                goals[i] = rng.choice(sorted(set(cells) - used - {s}))
                used.add(goals[i])
        tasks = [AgentTask(i, s, g) for i, (s, g) in enumerate(zip(starts, goals))]
        lengths = [bfs_distances(graph, t.start)[t.goal] for t in tasks]
        path = out_dir / f"empty-32-32-seeded-{k}.scen"
        path.write_text(render_scen("empty-32-32.map", graph, tasks, lengths))


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "src" / "lcbs" / "data")
