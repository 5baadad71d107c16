r"""
One agent, time-expanded search
-------------------------------
LA* plans over (vertex, time) pairs, so a constraint can forbid a cell at one
instant. Here a corridor's middle cell is blocked at t=1 and the agent waits.
"""
from lcbs import CostModel, build_graph, build_heuristic, la_star, vertex_constraint
from lcbs.map_io import GridMap

graph = build_graph(GridMap.from_rows(["....."]))
model = CostModel(d=2, mode="duplicated", unit_wait=True)
start, goal = graph.vertex(0, 0), graph.vertex(4, 0)
h = build_heuristic(graph, model, goal)
print("heuristic at start:", h[start])

free = la_star(start, goal, graph, model, h)
print("unconstrained:", [graph.coords[v] for v in free.vertices], free.cost)

#%%
# Forbid the second cell at t=1.
blocked = la_star(start, goal, graph, model, h, [vertex_constraint(0, graph.vertex(1, 0), 1)])
print("constrained:  ", [(graph.coords[s.vertex][0], s.time) for s in blocked.states], blocked.cost)

#%%
# Constraints on the goal after arrival matter too: an agent may only stop
# once nothing will ever need its goal cell again.
late = la_star(start, goal, graph, model, h, [vertex_constraint(0, goal, 6)])
print("goal busy at t=6, arrival:", late.arrival, "cost", late.cost)
