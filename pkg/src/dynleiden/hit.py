"""Incremental maintenance of a community hierarchy under batched updates.

The state keeps every level of a previously built hierarchy alive: the level
graph, its community assignment f, its sub-community structure (owned by a
connectivity index), per-community and per-sub degree totals, and the
reported membership labels g. One maintenance step pushes a batch of edge
deltas up the hierarchy level by level:

  1. apply the level's deltas to the level graph and classify seeds
     (cross-community insertions and intra-community deletions destabilize
     their endpoints; everything else cannot improve any move gain);
  2. re-run queue-driven movement from those seeds only; every mover is
     detached from its sub-community's internal edges so subs stay
     community-pure once splits are processed;
  3. refine: split subs whose internal edges fell apart (largest component
     keeps the sub id, ties to the smallest vertex; the rest get fresh ids)
     and let vertices now alone in a sub merge into the best neighboring sub
     of their community, provided both sides could not profitably detach;
  4. aggregate the level's deltas plus the edge weight carried by every
     vertex whose sub changed into the next level's delta list.

After the last level with work, two top-down passes restore cross-level
consistency: communities follow movers' fibers (f-run) and reported labels
follow sub changes (g-run, labels = top-level sub ids pulled down). Fresh
ids of any kind come from one state-global counter and are never reused.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .ccindex import CCIndex
from .graph import WEIGHT_EPS, EdgeDelta, Graph
from .metrics import GAIN_EPS
from .static_leiden import run_leiden


class SuperedgeDelta(NamedTuple):
    """Aggregated weight change between two supervertices (u <= v)."""

    u: int
    v: int
    alpha: float


@dataclass
class LevelStats:
    level: int
    deltas_in: int
    deltas_out: int
    moved: int
    reassigned: int
    splits: int
    new_vertices: int


@dataclass
class BatchStats:
    ms_movement: float = 0.0
    ms_refinement: float = 0.0
    ms_aggregation: float = 0.0
    ms_total: float = 0.0
    changed: int = 0  # base vertices whose reported community changed
    aff: int = 0  # base vertices whose assignments were recomputed
    levels: list[LevelStats] = field(default_factory=list)
    membership_changes: dict[int, tuple[int | None, int]] = field(default_factory=dict)
    # per-level change feed: community rows {level, vertex, old_community,
    # new_community} and sub rows {level, vertex, old_sub, new_sub}
    feed: list[dict] = field(default_factory=list)


class _Level:
    __slots__ = ("graph", "f", "comm_deg", "psi", "sub_deg", "g_map", "pre_sub", "pre_f")

    def __init__(self, graph: Graph, f: dict[int, int], s: dict[int, int]):
        self.graph = graph
        self.f = dict(f)
        self.comm_deg: dict[int, float] = {}
        for v in graph.vertices():
            self.comm_deg[self.f[v]] = self.comm_deg.get(self.f[v], 0.0) + graph.degree(v)
        self.psi = CCIndex(graph, s)
        self.sub_deg: dict[int, float] = {}
        for v in graph.vertices():
            sub = self.psi.sub_of[v]
            self.sub_deg[sub] = self.sub_deg.get(sub, 0.0) + graph.degree(v)
        self.g_map: dict[int, int] = {}
        # first-touch snapshots of sub/community assignments, cleared after
        # every step; pre_f feeds the change export, pre_sub also drives
        # aggregation (new vertices never enter pre_sub: creation sub is both
        # pre and cur for them)
        self.pre_sub: dict[int, int] = {}
        self.pre_f: dict[int, int | None] = {}

    def s_pre(self, v: int) -> int:
        return self.pre_sub.get(v, self.psi.sub_of[v])


class HitState:
    """All levels of the maintained hierarchy plus the fresh-id counter."""

    def __init__(self, levels: list[_Level], gamma: float, next_id: int):
        self.levels = levels
        self.gamma = gamma
        self.next_id = next_id

    def depth(self) -> int:
        return len(self.levels)

    def fresh_id(self) -> int:
        out = self.next_id
        self.next_id += 1
        return out

    def membership(self) -> dict[int, int]:
        return dict(self.levels[0].g_map)

    def modularity_partition(self) -> dict[int, int]:
        return self.membership()


def build_hit_state(
    g: Graph, levels: int = 10, gamma: float = 1.0, timings: dict[str, float] | None = None
) -> HitState:
    """Run the from-scratch pipeline once and freeze it into mutable state.

    Level graphs are copied so later maintenance never mutates the caller's
    graph. Community assignments are pulled down from the top so every level
    starts consistent with the one above it.
    """
    _, hier = run_leiden(g, levels=levels, gamma=gamma, timings=timings)
    depth = hier.depth()
    # top-down community sync: each vertex inherits its supervertex community
    fs: list[dict[int, int]] = [dict(lvl.f) for lvl in hier.levels]
    for p in range(depth - 2, -1, -1):
        s = hier.levels[p].s
        fs[p] = {v: fs[p + 1][s[v]] for v in hier.levels[p].graph.vertices()}
    out: list[_Level] = []
    for p in range(depth):
        out.append(_Level(hier.levels[p].graph.copy(), fs[p], hier.levels[p].s))
    # reported labels: top-level sub ids composed down
    top = out[-1]
    for v in top.graph.vertices():
        top.g_map[v] = top.psi.sub_of[v]
    for p in range(depth - 2, -1, -1):
        lvl, up = out[p], out[p + 1]
        for v in lvl.graph.vertices():
            lvl.g_map[v] = up.g_map[lvl.psi.sub_of[v]]
    ids = [0]
    for lvl in out:
        ids.extend(lvl.graph.vertices())
        ids.extend(lvl.f.values())
        ids.extend(lvl.psi.sub_of.values())
        ids.extend(lvl.g_map.values())
    return HitState(out, gamma, max(ids) + 1)


def hit_state_to_json(state: HitState) -> dict:
    """JSON-ready snapshot of the live hierarchy (same shape as the static
    dump, plus per-level reported labels)."""
    return {
        "gamma": state.gamma,
        "depth": state.depth(),
        "levels": [
            {
                "num_vertices": lvl.graph.num_vertices(),
                "num_edges": lvl.graph.num_edges(),
                "total_weight": lvl.graph.m,
                "f": {str(v): c for v, c in sorted(lvl.f.items())},
                "s": {str(v): c for v, c in sorted(lvl.psi.sub_of.items())},
                "g": {str(v): c for v, c in sorted(lvl.g_map.items())},
                "edges": [[u, v, w] for u, v, w in sorted(lvl.graph.edges())],
            }
            for lvl in state.levels
        ],
    }


def _norm_delta(d) -> tuple[int, int, float]:
    if isinstance(d, EdgeDelta):
        return (d.u, d.v, d.alpha)
    u, v, alpha = d
    return (u, v, alpha) if u <= v else (v, u, alpha)


def apply_level_deltas(
    state: HitState, p: int, deltas, extra_vertices=()
) -> tuple[list[int], set[int], set[int]]:
    """Apply one level's delta list to its graph, index, and degree totals.

    Returns (seeds, new_vertices, split_subs). Seeds keep delta order with
    duplicates dropped; an endpoint is a seed when the delta could lower its
    attachment (intra-community deletion) or offer a better home elsewhere
    (cross-community insertion). extra_vertices are materialized up front:
    fresh subs of the level below whose aggregated weight is zero still need
    a supervertex here.
    """
    lvl = state.levels[p]
    g, psi, f = lvl.graph, lvl.psi, lvl.f
    seeds: list[int] = []
    seen: set[int] = set()
    new_vertices: set[int] = set()
    split_subs: set[int] = set()

    def ensure(x: int) -> None:
        if g.has_vertex(x):
            return
        g.ensure_vertex(x)
        new_vertices.add(x)
        psi.add_vertex(x, state.fresh_id())
        lvl.sub_deg[psi.sub_of[x]] = 0.0
        if p == 0:
            label = state.fresh_id()
        else:
            fiber = state.levels[p - 1].psi.sub_members.get(x)
            label = state.levels[p - 1].f[min(fiber)] if fiber else state.fresh_id()
        lvl.pre_f.setdefault(x, None)
        f[x] = label
        lvl.comm_deg.setdefault(label, 0.0)

    for x in sorted(extra_vertices):
        ensure(x)
    for d in deltas:
        u, v, alpha = _norm_delta(d)
        for x in ((u,) if u == v else (u, v)):
            ensure(x)
        w0 = g.weight(u, v)
        g.apply_one(SuperedgeDelta(u, v, alpha))
        w1 = g.weight(u, v)
        applied = w1 - w0  # may differ from alpha by removal dust
        if u == v:
            lvl.sub_deg[psi.sub_of[u]] += 2.0 * applied
            lvl.comm_deg[f[u]] += 2.0 * applied
            if alpha < 0 and u not in seen:
                seen.add(u)
                seeds.append(u)
            continue
        for x in (u, v):
            lvl.sub_deg[psi.sub_of[x]] += applied
            lvl.comm_deg[f[x]] += applied
        same_comm = f[u] == f[v]
        if (alpha > 0 and not same_comm) or (alpha < 0 and same_comm):
            for x in (u, v):
                if x not in seen:
                    seen.add(x)
                    seeds.append(x)
        if psi.sub_of[u] == psi.sub_of[v]:
            if w0 > 0.0 and w1 == 0.0:
                if psi.delete_edge(u, v):
                    split_subs.add(psi.sub_of[u])
            elif w0 == 0.0 and w1 > 0.0:
                psi.insert_edge(u, v)
    return seeds, new_vertices, split_subs


def inc_movement(state: HitState, p: int, seeds: list[int]) -> tuple[set[int], set[int]]:
    """Queue-driven movement from the seed set only.

    Same gains, tie-breaks, and acceptance threshold as the from-scratch
    movement phase. Every accepted mover is detached from its sub's internal
    edges on the spot (the assignment itself is corrected by refinement).
    Returns (movers, split_subs).
    """
    lvl = state.levels[p]
    g, psi, f = lvl.graph, lvl.psi, lvl.f
    gamma = state.gamma
    movers: set[int] = set()
    split_subs: set[int] = set()
    if g.m <= 0:
        return movers, split_subs
    two_m = 2.0 * g.m
    sq = two_m * two_m
    queue = deque(seeds)
    in_q = {v: True for v in seeds}
    while queue:
        v = queue.popleft()
        in_q[v] = False
        dv = g.degree(v)
        c = f[v]
        wc: dict[int, float] = {}
        for u, w in g.adj.get(v, {}).items():
            if u == v:
                continue
            cu = f[u]
            wc[cu] = wc.get(cu, 0.0) + w
        w_cur = wc.get(c, 0.0)
        d_cur = lvl.comm_deg[c]
        best_gain = (0.0 - w_cur) / two_m + gamma * dv * (d_cur - dv) / sq
        best = None
        for cand in sorted(wc):
            if cand == c:
                continue
            gain = (wc[cand] - w_cur) / two_m + gamma * dv * (d_cur - dv - lvl.comm_deg[cand]) / sq
            if gain >= best_gain:
                best_gain = gain
                best = cand
        if best_gain <= GAIN_EPS:
            continue
        if best is None:
            best = state.fresh_id()
        lvl.comm_deg[c] = d_cur - dv
        lvl.comm_deg[best] = lvl.comm_deg.get(best, 0.0) + dv
        lvl.pre_f.setdefault(v, c)
        f[v] = best
        movers.add(v)
        for u in sorted(psi.neighbors(v)):
            if psi.delete_edge(v, u):
                split_subs.add(psi.sub_of[v])
        wake = [u for u in g.adj.get(v, {}) if u != v and f[u] != best and not in_q.get(u, False)]
        for u in sorted(wake):
            in_q[u] = True
            queue.append(u)
    return movers, split_subs


def _sub_boundary_weight(lvl: _Level, sub: int) -> float:
    """Weight from a sub to the rest of its community."""
    psi, g, f = lvl.psi, lvl.graph, lvl.f
    members = psi.sub_members.get(sub, ())
    acc = 0.0
    for x in members:
        fx = f[x]
        for y, w in g.adj.get(x, {}).items():
            if y != x and f.get(y) == fx and psi.sub_of[y] != sub:
                acc += w
    return acc


def inc_refinement(
    state: HitState,
    p: int,
    split_subs: set[int],
    movers: set[int],
    new_vertices: set[int],
) -> tuple[set[int], int]:
    """Repair the sub-community structure after movement.

    Split every flagged sub along its surviving components, then give each
    vertex now alone in a sub one chance to merge into the best neighboring
    sub of its (possibly new) community. Returns (reassigned, n_splits):
    the vertices whose sub differs from the start of the step, and how many
    fresh subs the splits produced.
    """
    lvl = state.levels[p]
    g, psi, f = lvl.graph, lvl.psi, lvl.f
    gamma = state.gamma
    n_splits = 0
    candidates: set[int] = set(movers) | set(new_vertices)
    for sub in sorted(split_subs):
        comps = psi.split_components(sub)
        for comp, keeps in comps:
            candidates |= comp
            if keeps:
                continue
            fresh = state.fresh_id()
            dsum = 0.0
            for x in comp:
                lvl.pre_sub.setdefault(x, psi.sub_of[x])
                dsum += g.degree(x)
            psi.reassign(comp, fresh)
            lvl.sub_deg[fresh] = dsum
            lvl.sub_deg[sub] -= dsum
            n_splits += 1

    if g.m > 0:
        two_m = 2.0 * g.m
        sq = two_m * two_m
        boundary_cache: dict[int, float] = {}
        for v in sorted(candidates, key=lambda x: (g.degree(x), x)):
            sv = psi.sub_of[v]
            if len(psi.sub_members[sv]) != 1:
                continue
            dv = g.degree(v)
            c = f[v]
            d_c = lvl.comm_deg[c]
            w_self = 0.0
            wts: dict[int, float] = {}
            for u, w in g.adj.get(v, {}).items():
                if u == v or f.get(u) != c:
                    continue
                w_self += w
                su = psi.sub_of[u]
                wts[su] = wts.get(su, 0.0) + w
            wts.pop(sv, None)
            if two_m * w_self < gamma * dv * (d_c - dv):
                continue
            best = None
            best_gain = 0.0
            for cand in sorted(wts):
                ds = lvl.sub_deg[cand]
                if cand not in boundary_cache:
                    boundary_cache[cand] = _sub_boundary_weight(lvl, cand)
                if two_m * boundary_cache[cand] < gamma * ds * (d_c - ds):
                    continue
                gain = wts[cand] / two_m - gamma * dv * ds / sq
                if gain > GAIN_EPS and gain >= best_gain:
                    best_gain = gain
                    best = cand
            if best is None:
                continue
            lvl.pre_sub.setdefault(v, sv)
            psi.reassign([v], best)
            for u in sorted(g.adj.get(v, {})):
                if u != v and psi.sub_of[u] == best:
                    psi.insert_edge(v, u)
            lvl.sub_deg[best] += dv
            if sv not in psi.sub_members:
                lvl.sub_deg.pop(sv, None)
            boundary_cache.pop(best, None)
            boundary_cache.pop(sv, None)

    reassigned = {v for v, old in lvl.pre_sub.items() if psi.sub_of.get(v) != old}
    return reassigned, n_splits


def inc_aggregation(state: HitState, p: int, deltas, reassigned: set[int]) -> list[SuperedgeDelta]:
    """Turn this level's activity into the next level's delta list.

    The level's own deltas map through start-of-step sub assignments; every
    vertex whose sub changed then carries each of its current edges from the
    old pair to the new one (an edge between two such vertices moves once).
    Net-zero pairs are dropped; output is sorted for determinism.
    """
    lvl = state.levels[p]
    psi = lvl.psi
    agg: dict[tuple[int, int], float] = {}

    def add(a: int, b: int, val: float) -> None:
        key = (a, b) if a <= b else (b, a)
        agg[key] = agg.get(key, 0.0) + val

    for d in deltas:
        u, v, alpha = _norm_delta(d)
        add(lvl.s_pre(u), lvl.s_pre(v), alpha)
    for v in sorted(reassigned):
        for u, w in lvl.graph.adj.get(v, {}).items():
            if u == v:
                add(lvl.s_pre(v), lvl.s_pre(v), -w)
                add(psi.sub_of[v], psi.sub_of[v], w)
            elif u not in reassigned or v < u:
                add(lvl.s_pre(v), lvl.s_pre(u), -w)
                add(psi.sub_of[v], psi.sub_of[u], w)
    return [
        SuperedgeDelta(a, b, val)
        for (a, b), val in sorted(agg.items())
        if abs(val) > WEIGHT_EPS
    ]


def def_update(
    state: HitState,
    movers: list[set[int]],
    reassigned: list[set[int]],
    new_vertices: list[set[int]],
) -> tuple[set[int], set[int], dict[int, tuple[int | None, int]]]:
    """Two top-down consistency passes after the upward sweep.

    f-run: every vertex whose community or parent pointer changed (movers,
    reassignments, fresh vertices) re-pulls its community from the level
    above, and so do the fibers of changed supervertices, so whole subtrees
    follow. g-run: reported labels are top-level sub ids; every vertex whose
    sub changed (plus the fibers of every relabeled supervertex) re-pulls its
    label. Returns the base-level recompute sets of both runs and the
    {vertex: (old, new)} label changes.
    """
    depth = state.depth()
    # community pass
    changed_f = [movers[p] | reassigned[p] | new_vertices[p] for p in range(depth)]
    for p in range(depth - 2, -1, -1):
        lvl, up = state.levels[p], state.levels[p + 1]
        for sup in changed_f[p + 1]:
            fiber = lvl.psi.sub_members.get(sup)
            if fiber:
                changed_f[p] |= fiber
        for v in changed_f[p]:
            new_f = up.f.get(lvl.psi.sub_of[v])
            if new_f is None:
                continue  # parent never materialized; keep movement's verdict
            old = lvl.f[v]
            if old != new_f:
                dv = lvl.graph.degree(v)
                lvl.comm_deg[old] -= dv
                lvl.comm_deg[new_f] = lvl.comm_deg.get(new_f, 0.0) + dv
                lvl.pre_f.setdefault(v, old)
                lvl.f[v] = new_f
    # reported-label pass
    changed_g = [reassigned[p] | new_vertices[p] for p in range(depth)]
    member_changes: dict[int, tuple[int | None, int]] = {}
    top = state.levels[-1]
    for v in changed_g[-1]:
        new_g = top.psi.sub_of[v]
        if depth == 1:
            old = top.g_map.get(v)
            if old != new_g:
                member_changes[v] = (old, new_g)
        top.g_map[v] = new_g
    for p in range(depth - 2, -1, -1):
        lvl, up = state.levels[p], state.levels[p + 1]
        for sup in changed_g[p + 1]:
            fiber = lvl.psi.sub_members.get(sup)
            if fiber:
                changed_g[p] |= fiber
        for v in changed_g[p]:
            new_g = up.g_map.get(lvl.psi.sub_of[v], lvl.psi.sub_of[v])
            if p == 0:
                old = lvl.g_map.get(v)
                if old != new_g:
                    member_changes[v] = (old, new_g)
            lvl.g_map[v] = new_g
    return changed_f[0], changed_g[0], member_changes


def hit_leiden_step(state: HitState, batch) -> tuple[dict[int, int], BatchStats]:
    """One maintenance step: apply a batch of base-graph edge deltas.

    Accepts EdgeDelta instances or (u, v, alpha) tuples. Returns the updated
    base membership (a copy) and the step's statistics.
    """
    t_start = time.perf_counter()
    stats = BatchStats()
    depth = state.depth()
    cur = [_norm_delta(d) for d in batch]
    movers = [set() for _ in range(depth)]
    reassigned = [set() for _ in range(depth)]
    created = [set() for _ in range(depth)]
    pending: set[int] = set()  # fresh subs below with no aggregated weight
    for p in range(depth):
        if not cur and not pending:
            break
        t0 = time.perf_counter()
        seeds, new_p, k_apply = apply_level_deltas(state, p, cur, pending)
        created[p] = new_p
        moved, k_move = inc_movement(state, p, seeds)
        movers[p] = moved
        t1 = time.perf_counter()
        reassigned[p], n_splits = inc_refinement(state, p, k_apply | k_move, moved, new_p)
        t2 = time.perf_counter()
        nxt: list[SuperedgeDelta] = []
        pending = set()
        if p + 1 < depth:
            nxt = inc_aggregation(state, p, cur, reassigned[p])
            lvl = state.levels[p]
            up_g = state.levels[p + 1].graph
            # A sub whose members carry no weight emits no superedge deltas,
            # so its supervertex has to be forced into existence above.
            for v in reassigned[p] | created[p]:
                sv = lvl.psi.sub_of[v]
                if not up_g.has_vertex(sv):
                    pending.add(sv)
        t3 = time.perf_counter()
        stats.ms_movement += (t1 - t0) * 1e3
        stats.ms_refinement += (t2 - t1) * 1e3
        stats.ms_aggregation += (t3 - t2) * 1e3
        stats.levels.append(
            LevelStats(
                level=p + 1,
                deltas_in=len(cur),
                deltas_out=len(nxt),
                moved=len(moved),
                reassigned=len(reassigned[p]),
                splits=n_splits,
                new_vertices=len(new_p),
            )
        )
        cur = nxt
    aff_f, aff_g, member_changes = def_update(state, movers, reassigned, created)
    for p, lvl in enumerate(state.levels):
        for v in sorted(lvl.pre_f):
            new_f = lvl.f.get(v)
            if lvl.pre_f[v] != new_f:
                stats.feed.append(
                    {"level": p + 1, "vertex": v, "old_community": lvl.pre_f[v], "new_community": new_f}
                )
        for v in sorted(lvl.pre_sub):
            new_s = lvl.psi.sub_of.get(v)
            if lvl.pre_sub[v] != new_s:
                stats.feed.append(
                    {"level": p + 1, "vertex": v, "old_sub": lvl.pre_sub[v], "new_sub": new_s}
                )
        lvl.pre_sub.clear()
        lvl.pre_f.clear()
    stats.changed = len(member_changes)
    stats.aff = len(aff_f | aff_g)
    stats.membership_changes = member_changes
    stats.ms_total = (time.perf_counter() - t_start) * 1e3
    return state.membership(), stats
