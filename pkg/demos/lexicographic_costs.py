r"""
Lexicographic cost vectors
--------------------------
Every move on the grid has a vector of costs. Plans are compared by the first
component, then the second among ties, and so on.
"""
from lcbs import CostModel, CostVector, build_graph, edge_cost, format_cost, lex_cmp
from lcbs.map_io import GridMap

a = CostVector((4, 9, 1))
b = CostVector((4, 2, 30))
print(format_cost(a), "vs", format_cost(b), "->", lex_cmp(a, b).name)
print("sum:", format_cost(a + b))

#%%
# Cost vectors are plain tuples underneath, so ``min`` and ``sorted`` give
# the lexicographic answer directly.
print(sorted([a, b, CostVector((3, 50, 50))]))

#%%
# A cost model turns a grid into per-edge vectors. Objective 0 is always the
# step count; the rest are seeded draws from the cost range, symmetric in the
# two endpoints.
graph = build_graph(GridMap.from_rows(["...", ".@.", "..."]))
model = CostModel(d=3, seed=42)
for u, v in list(graph.edges())[:4]:
    print(graph.coords[u], "->", graph.coords[v], format_cost(edge_cost(model, graph, u, v)))

#%%
# Duplicated mode repeats the unit cost in every slot. The search then does
# identical work for any d, which isolates the price of longer vectors.
dup = CostModel(d=5, mode="duplicated")
print(format_cost(edge_cost(dup, graph, 0, 1)))
