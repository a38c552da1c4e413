"""
Static pipeline on a small weighted graph
=========================================

Builds the eight-vertex graph used throughout the test suite, runs the full
movement / refinement / aggregation stack, and walks the resulting hierarchy.
"""

from dynleiden import Graph, modularity, run_leiden, vertex_optimality_fraction

# two tight pairs (1-2 and 3-4) next to a denser 4-cycle-with-chords block
g = Graph.from_edges([
    (1, 2, 1.0),
    (3, 4, 1.0),
    (3, 5, 1.0),
    (5, 6, 1.0), (6, 7, 1.0), (7, 8, 1.0), (5, 7, 1.0), (6, 8, 1.0),
])

membership, hier = run_leiden(g)

print("communities:", membership)
print("modularity :", round(modularity(g, membership), 6))
print("optimal    :", vertex_optimality_fraction(g, membership))  # 1.0 = no single move helps

# The hierarchy stores one graph per level; each sub-community of level p
# becomes one supervertex of level p+1.
for p, lvl in enumerate(hier.levels, start=1):
    print(f"level {p}: {lvl.graph.num_vertices()} vertices, "
          f"{lvl.graph.num_edges()} edges, total weight {lvl.graph.m}")

# Refinement keeps sub-communities finer than communities: within the big
# community {5,6,7,8} the sub split is {5,6} vs {7,8}.
s = hier.levels[0].s
print("subs of 5..8:", {v: s[v] for v in (5, 6, 7, 8)})
