"""
Maintaining communities through edge updates
============================================

Freezes the static answer into mutable per-level state, then repairs it
through a batch instead of re-solving: strengthen 1-3, cut 3-5, and watch
{1,2} get pulled into {3,4}'s community while {5..8} is untouched.
"""

from dynleiden import Graph, build_hit_state, hit_leiden_step, modularity, run_leiden

EDGES = [
    (1, 2, 1.0), (3, 4, 1.0), (3, 5, 1.0),
    (5, 6, 1.0), (6, 7, 1.0), (7, 8, 1.0), (5, 7, 1.0), (6, 8, 1.0),
]

g = Graph.from_edges(EDGES)
state = build_hit_state(g)
print("before:", state.membership())

# one batch = a list of (u, v, weight_delta); negative deltas delete weight
membership, stats = hit_leiden_step(state, [(1, 3, 1.0), (3, 5, -1.0)])

print("after :", membership)
print(f"changed={stats.changed} aff={stats.aff} "
      f"(label changes vs. assignments actually recomputed)")
for v, (old, new) in sorted(stats.membership_changes.items()):
    print(f"  vertex {v}: community {old} -> {new}")

# per-level change feed, the hook downstream consumers subscribe to
for row in stats.feed:
    print("  feed:", row)

# the maintained answer matches a from-scratch rerun on the updated graph
g2 = Graph.from_edges(EDGES)
g2.apply_one((1, 3, 1.0))
g2.apply_one((3, 5, -1.0))
fresh, _ = run_leiden(g2)
print("maintained Q:", round(modularity(state.levels[0].graph, membership), 6),
      " fresh Q:", round(modularity(g2, fresh), 6))

# an empty batch is a strict no-op
_, noop = hit_leiden_step(state, [])
assert noop.changed == 0 and noop.aff == 0 and noop.feed == []
print("empty batch: changed=0 aff=0, state untouched")

# deletions that disconnect a sub-community split it; the larger piece
# keeps the old id and the stranded rest gets a fresh one
tri = Graph.from_edges([(1, 2, 1.0), (2, 3, 1.0), (1, 3, 1.0)])
ts = build_hit_state(tri)
hit_leiden_step(ts, [(1, 2, -1.0), (2, 3, -1.0)])
print("triangle minus two edges, subs:", dict(ts.levels[0].psi.sub_of))
