"""From-scratch hierarchical community detection with a refinement phase.

Each level runs three phases on the current graph: greedy local movement to
a vertex-optimal partition, refinement of every community into well-connected
sub-communities, and aggregation of sub-communities into the next level's
supervertices. Movement seeds the next level with the communities found one
level below, so communities only improve as the hierarchy grows.

Determinism: every loop visits vertices in a fixed order (ascending id for
movement, ascending (degree, id) for refinement), argmax ties go to the
largest candidate community id, and a move out into a fresh community only
wins when strictly better than every existing candidate. Two runs on equal
inputs produce identical hierarchies.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass

from .graph import Graph
from .metrics import GAIN_EPS, EmptyGraph, modularity


@dataclass
class Level:
    """One hierarchy level: the graph it ran on plus its two assignments.

    f maps each vertex of `graph` to its community; s maps each vertex to
    its sub-community, whose id doubles as a vertex id one level up.
    """

    graph: Graph
    f: dict[int, int]
    s: dict[int, int]


@dataclass
class Hierarchy:
    levels: list[Level]
    gamma: float

    def depth(self) -> int:
        return len(self.levels)

    def membership(self) -> dict[int, int]:
        """Base-vertex communities: the composition of all sub-assignments."""
        out = {}
        for v in self.levels[0].graph.vertices():
            t = v
            for lvl in self.levels:
                t = lvl.s[t]
            out[v] = t
        return out


def move_phase(g: Graph, f_init: dict[int, int] | None, gamma: float) -> dict[int, int]:
    """Queue-driven greedy vertex moves until no move improves modularity.

    Starts from f_init (singletons when None; vertices absent from f_init
    get fresh labels so they can't collide with reused ones). Returns the
    final community assignment.
    """
    two_m = 2.0 * g.m
    sq = two_m * two_m
    verts = sorted(g.vertices())
    next_label = (max(verts) if verts else 0) + 1
    if f_init:
        next_label = max(next_label, max(f_init.values()) + 1)
    f: dict[int, int] = {}
    for v in verts:
        if f_init is not None and v in f_init:
            f[v] = f_init[v]
        elif f_init is None:
            f[v] = v
        else:
            f[v] = next_label
            next_label += 1
    comm_deg: dict[int, float] = {}
    for v in verts:
        comm_deg[f[v]] = comm_deg.get(f[v], 0.0) + g.degree(v)

    queue = deque(verts)
    in_queue = {v: True for v in verts}
    while queue:
        v = queue.popleft()
        in_queue[v] = False
        dv = g.degree(v)
        c = f[v]
        wc: dict[int, float] = {}
        for u, w in g.adj.get(v, {}).items():
            if u == v:
                continue
            cu = f[u]
            wc[cu] = wc.get(cu, 0.0) + w
        w_cur = wc.get(c, 0.0)
        d_cur = comm_deg[c]
        # empty-community target first so any real candidate wins the tie
        best_gain = (0.0 - w_cur) / two_m + gamma * dv * (d_cur - dv) / sq
        best = None
        for cand in sorted(wc):
            if cand == c:
                continue
            gain = (wc[cand] - w_cur) / two_m + gamma * dv * (d_cur - dv - comm_deg[cand]) / sq
            if gain >= best_gain:
                best_gain = gain
                best = cand
        if best_gain <= GAIN_EPS:
            continue
        if best is None:
            best = next_label
            next_label += 1
        comm_deg[c] = d_cur - dv
        comm_deg[best] = comm_deg.get(best, 0.0) + dv
        f[v] = best
        wake = [u for u in g.adj.get(v, {}) if u != v and f[u] != best and not in_queue.get(u, False)]
        for u in sorted(wake):
            in_queue[u] = True
            queue.append(u)
    return f


def refine_phase(g: Graph, f: dict[int, int], gamma: float) -> dict[int, int]:
    """Split every community into well-connected sub-communities.

    Starts from singleton sub-communities; a vertex still alone in its own
    sub may merge into a neighboring sub of the same community when both are
    well-connected inside the community (2m * w(X, C\\X) >= gamma * d(X) *
    (d(C) - d(X))) and the merge gain w(v,S)/2m - gamma*d(v)*d(S)/(2m)^2 is
    positive. Single pass in ascending (degree, id) order; sub ids are the
    founding vertex's id.
    """
    two_m = 2.0 * g.m
    sq = two_m * two_m
    comm_deg: dict[int, float] = {}
    for v in g.vertices():
        comm_deg[f[v]] = comm_deg.get(f[v], 0.0) + g.degree(v)
    s = {v: v for v in g.vertices()}
    sub_deg = {v: g.degree(v) for v in g.vertices()}
    sub_size = {v: 1 for v in g.vertices()}
    # weight from the sub to the rest of its community
    sub_wout: dict[int, float] = {}
    for v in g.vertices():
        acc = 0.0
        for u, w in g.adj.get(v, {}).items():
            if u != v and f[u] == f[v]:
                acc += w
        sub_wout[v] = acc

    order = sorted(g.vertices(), key=lambda v: (g.degree(v), v))
    for v in order:
        if sub_size[s[v]] > 1:
            continue
        dv = g.degree(v)
        c = f[v]
        d_c = comm_deg[c]
        if two_m * sub_wout[v] < gamma * dv * (d_c - dv):
            continue
        wts: dict[int, float] = {}
        for u, w in g.adj.get(v, {}).items():
            if u != v and f[u] == c:
                su = s[u]
                wts[su] = wts.get(su, 0.0) + w
        wts.pop(v, None)
        best = None
        best_gain = 0.0
        for cand in sorted(wts):
            ds = sub_deg[cand]
            if two_m * sub_wout[cand] < gamma * ds * (d_c - ds):
                continue
            gain = wts[cand] / two_m - gamma * dv * ds / sq
            if gain > GAIN_EPS and gain >= best_gain:
                best_gain = gain
                best = cand
        if best is None:
            continue
        s[v] = best
        sub_deg[best] += dv
        sub_wout[best] += sub_wout[v] - 2.0 * wts[best]
        sub_size[best] += 1
        sub_size[v] = 0
    return s


def aggregate_phase(g: Graph, f: dict[int, int], s: dict[int, int]) -> tuple[Graph, dict[int, int]]:
    """Contract sub-communities into supervertices.

    Edges inside a sub become self-loop weight (stored once, counted twice
    in the degree), so every supervertex degree equals the sum of its member
    degrees and total weight is preserved. Returns the contracted graph and
    the inherited community seed for the next level.
    """
    h = Graph()
    f_next: dict[int, int] = {}
    for v in g.vertices():
        h.ensure_vertex(s[v])
        f_next[s[v]] = f[v]
    for u, v, w in g.edges():
        h.add_weight(s[u], s[v], w)
    return h, f_next


_MAX_SWEEPS = 10  # cap on whole-stack repeats; convergence is usually 2-3


def _one_sweep(
    g: Graph,
    levels: int,
    gamma: float,
    seed: dict[int, int] | None,
    timings: dict[str, float] | None,
) -> tuple[dict[int, int], Hierarchy]:
    """One bottom-up stack of movement/refinement/aggregation levels."""
    out: list[Level] = []
    cur = g
    for p in range(levels):
        t0 = time.perf_counter()
        f = move_phase(cur, seed, gamma)
        t1 = time.perf_counter()
        s = refine_phase(cur, f, gamma)
        t2 = time.perf_counter()
        out.append(Level(cur, f, s))
        h, f_next = aggregate_phase(cur, f, s)
        t3 = time.perf_counter()
        if timings is not None:
            timings["movement"] = timings.get("movement", 0.0) + (t1 - t0) * 1e3
            timings["refinement"] = timings.get("refinement", 0.0) + (t2 - t1) * 1e3
            timings["aggregation"] = timings.get("aggregation", 0.0) + (t3 - t2) * 1e3
        if h.num_vertices() == cur.num_vertices() or p == levels - 1:
            break
        cur, seed = h, f_next
    hier = Hierarchy(out, gamma)
    return hier.membership(), hier


def run_leiden(
    g: Graph,
    levels: int = 10,
    gamma: float = 1.0,
    f_init: dict[int, int] | None = None,
    timings: dict[str, float] | None = None,
) -> tuple[dict[int, int], Hierarchy]:
    """Full hierarchical run; each stack stops once aggregation stops
    compressing, and the stack is repeated seeded with its own answer until
    modularity stops improving (one sweep rarely exhausts the group moves
    the supergraphs enable).

    Returns (membership, hierarchy) where membership labels every base
    vertex with its top-level sub-community id; the hierarchy is the last
    improving sweep's. When `timings` is a dict, per-phase wall time in ms
    is accumulated into its "movement", "refinement", and "aggregation"
    keys across all sweeps.
    """
    if g.m <= 0:
        raise EmptyGraph("cannot optimize modularity on a graph with zero edge weight")
    if levels < 1:
        raise ValueError("need at least one level")
    memb, hier = _one_sweep(g, levels, gamma, f_init, timings)
    best_q = modularity(g, memb, gamma)
    for _ in range(_MAX_SWEEPS - 1):
        memb2, hier2 = _one_sweep(g, levels, gamma, memb, timings)
        q2 = modularity(g, memb2, gamma)
        if q2 <= best_q + 1e-9:
            break
        memb, hier, best_q = memb2, hier2, q2
    return memb, hier


def hierarchy_to_json(h: Hierarchy) -> dict:
    """JSON-ready snapshot of a hierarchy (used by state dumps)."""
    return {
        "gamma": h.gamma,
        "depth": h.depth(),
        "levels": [
            {
                "num_vertices": lvl.graph.num_vertices(),
                "num_edges": lvl.graph.num_edges(),
                "total_weight": lvl.graph.m,
                "f": {str(v): c for v, c in sorted(lvl.f.items())},
                "s": {str(v): c for v, c in sorted(lvl.s.items())},
                "edges": [[u, v, w] for u, v, w in sorted(lvl.graph.edges())],
            }
            for lvl in h.levels
        ],
    }
