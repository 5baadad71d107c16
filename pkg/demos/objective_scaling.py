r"""
Runtime against the number of objectives
----------------------------------------
With duplicated costs the search order is the same for every d. Only the
vector arithmetic grows, so wall time should rise roughly linearly.
"""
from pathlib import Path

import numpy as np

import lcbs
from lcbs.bench import affine_fit, run_scaling
from lcbs.map_io import build_graph, parse_map, parse_scen

data = Path(lcbs.__file__).parent / "data"
graph = build_graph(parse_map((data / "empty-32-32.map").read_bytes()))
tasks = parse_scen((data / "empty-32-32-seeded-23.scen").read_bytes(), graph).first(5)

rows = run_scaling(graph, tasks, d_values=range(2, 11), repetitions=5)
for r in rows:
    print(f"d={r.objectives:2d}  {r.mean_wall_ms:7.2f} ms  heap ops {r.mean_heap_ops:.0f}")

#%%
d = np.array([r.objectives for r in rows])
ms = np.array([r.mean_wall_ms for r in rows])
slope, intercept, r2 = affine_fit(d, ms)
print(f"fit: {slope:.2f} ms per objective + {intercept:.2f} ms, r2={r2:.3f}")
print(f"t(10)/t(2) = {ms[-1] / ms[0]:.2f}")
