"""Subpartition density verification via explicit merge-order witnesses.

A community is subpartition gamma-dense when it can be assembled from its
singletons by pairwise merges where every merged pair (X, Y) has positive
connecting weight w(X, Y) >= gamma * d(X) * d(Y) / (2m), and every set that
appears along the way (singletons included) is locally optimized: detaching
it from its community into a community of its own would not raise modularity.

Small communities are certified exactly by exhaustive search over merge
states; larger ones by a greedy max-margin pass plus randomized restarts, so
a False answer for a large community means "no witness found", not a proof
of absence.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .metrics import EmptyGraph, Partition

# slack on the 2m-scaled inequalities; comparisons favor acceptance
DENSITY_EPS = 1e-9


@dataclass(frozen=True)
class GammaOrder:
    """A merge-order witness: each step merges two currently-present sets."""

    members: tuple[int, ...]
    merges: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    def __len__(self) -> int:
        return len(self.merges)


@dataclass
class DensityBudget:
    """Effort knobs for the verifier.

    Communities up to exhaustive_limit vertices get an exact search; larger
    ones get one greedy pass and up to `restarts` randomized completions.
    """

    exhaustive_limit: int = 8
    restarts: int = 32
    seed: int = 0


def _community_view(g: Graph, mem: list[int]):
    """Intra-community adjacency plus per-vertex degree and boundary weight."""
    memset = set(mem)
    intra: dict[int, dict[int, float]] = {v: {} for v in mem}
    d: dict[int, float] = {}
    w_out: dict[int, float] = {}
    for v in mem:
        d[v] = g.degree(v)
        acc = 0.0
        row = g.adj.get(v, {})
        iv = intra[v]
        for u, w in row.items():
            if u != v and u in memset:
                iv[u] = w
                acc += w
        w_out[v] = acc
    return intra, d, w_out


def verify_gamma_density(g: Graph, members, gamma: float = 1.0, budget: DensityBudget | None = None):
    """Decide whether the vertex set `members` is subpartition gamma-dense.

    Returns (dense, witness): witness is a GammaOrder on success, None on
    failure. The set is treated as one community of the ambient graph g.
    """
    if g.m <= 0:
        raise EmptyGraph("density undefined: total edge weight is zero")
    if budget is None:
        budget = DensityBudget()
    mem = sorted(set(members))
    if not mem:
        raise ValueError("empty community")
    if len(mem) == 1:
        return True, GammaOrder(members=(mem[0],), merges=())

    intra, d, w_out = _community_view(g, mem)
    two_m = 2.0 * g.m
    d_c = sum(d.values())

    def local_opt(d_x: float, w_out_x: float) -> bool:
        return two_m * w_out_x + DENSITY_EPS >= gamma * d_x * (d_c - d_x)

    # every singleton appears in any witness, so this is a sound early reject
    for v in mem:
        if not local_opt(d[v], w_out[v]):
            return False, None

    if len(mem) <= budget.exhaustive_limit:
        merges = _exhaustive_order(mem, intra, d, w_out, two_m, d_c, gamma)
    else:
        merges = _greedy_order(mem, intra, d, w_out, two_m, d_c, gamma, budget)
    if merges is None:
        return False, None
    return True, GammaOrder(members=tuple(mem), merges=tuple(merges))


def _pair_weight(intra, xs, ys) -> float:
    w = 0.0
    for x in xs:
        row = intra[x]
        for y in ys:
            w += row.get(y, 0.0)
    return w


def _exhaustive_order(mem, intra, d, w_out, two_m, d_c, gamma):
    """Exact search over merge states (partitions of the community)."""
    dead: set[frozenset] = set()

    def d_set(xs) -> float:
        return sum(d[x] for x in xs)

    def w_out_set(xs) -> float:
        acc = 0.0
        for x in xs:
            for u, w in intra[x].items():
                if u not in xs:
                    acc += w
        return acc

    def dfs(state: frozenset):
        if len(state) == 1:
            return ()
        if state in dead:
            return None
        parts = sorted(state, key=sorted)
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                xs, ys = parts[i], parts[j]
                w = _pair_weight(intra, xs, ys)
                if w <= 0:
                    continue
                if two_m * w + DENSITY_EPS < gamma * d_set(xs) * d_set(ys):
                    continue
                zs = xs | ys
                if not (two_m * w_out_set(zs) + DENSITY_EPS >= gamma * d_set(zs) * (d_c - d_set(zs))):
                    continue
                rest = dfs((state - {xs, ys}) | {zs})
                if rest is not None:
                    return ((tuple(sorted(xs)), tuple(sorted(ys))),) + rest
        dead.add(state)
        return None

    start = frozenset(frozenset((v,)) for v in mem)
    return dfs(start)


def _greedy_order(mem, intra, d, w_out, two_m, d_c, gamma, budget: DensityBudget):
    """Greedy max-margin contraction, then randomized restarts on failure."""
    order = _contract_greedy(mem, intra, d, w_out, two_m, d_c, gamma)
    if order is not None:
        return order
    for attempt in range(budget.restarts):
        rng = np.random.default_rng((budget.seed, attempt))
        order = _contract_random(mem, intra, d, w_out, two_m, d_c, gamma, rng)
        if order is not None:
            return order
    return None


class _Contraction:
    """Shared supergraph state for the contraction strategies."""

    def __init__(self, mem, intra, d, w_out):
        self.members = {v: (v,) for v in mem}
        self.d = dict(d)
        self.w_out = dict(w_out)
        self.edges: dict[int, dict[int, float]] = {v: dict(intra[v]) for v in mem}
        self.alive = set(mem)
        self.next_id = max(mem) + 1
        self.merges: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

    def merge(self, x: int, y: int) -> int:
        z = self.next_id
        self.next_id += 1
        w_xy = self.edges[x].get(y, 0.0)
        self.merges.append((self.members[x], self.members[y]))
        self.members[z] = tuple(sorted(self.members[x] + self.members[y]))
        self.d[z] = self.d[x] + self.d[y]
        self.w_out[z] = self.w_out[x] + self.w_out[y] - 2.0 * w_xy
        row: dict[int, float] = {}
        for s in (x, y):
            for n, w in self.edges[s].items():
                if n == x or n == y:
                    continue
                row[n] = row.get(n, 0.0) + w
                nrow = self.edges[n]
                nrow.pop(x, None)
                nrow.pop(y, None)
                nrow[z] = row[n]
        self.edges[z] = row
        del self.edges[x], self.edges[y]
        del self.members[x], self.members[y]
        self.alive.discard(x)
        self.alive.discard(y)
        self.alive.add(z)
        return z


def _contract_greedy(mem, intra, d, w_out, two_m, d_c, gamma):
    st = _Contraction(mem, intra, d, w_out)

    def margin(x, y, w):
        return two_m * w - gamma * st.d[x] * st.d[y]

    def ok(x, y, w):
        if w <= 0 or margin(x, y, w) < -DENSITY_EPS:
            return False
        dz = st.d[x] + st.d[y]
        wz = st.w_out[x] + st.w_out[y] - 2.0 * w
        return two_m * wz + DENSITY_EPS >= gamma * dz * (d_c - dz)

    heap = []
    counter = 0
    for x in mem:
        for y, w in intra[x].items():
            if x < y:
                heapq.heappush(heap, (-margin(x, y, w), counter, x, y))
                counter += 1
    while len(st.alive) > 1:
        found = None
        while heap:
            _, _, x, y = heapq.heappop(heap)
            if x not in st.alive or y not in st.alive:
                continue
            w = st.edges[x].get(y, 0.0)
            # a pair that fails now fails for this exact composition forever
            if ok(x, y, w):
                found = (x, y)
                break
        if found is None:
            return None
        x, y = found
        z = st.merge(x, y)
        for n, w in st.edges[z].items():
            heapq.heappush(heap, (-margin(z, n, w), counter, z, n))
            counter += 1
    return st.merges


def _contract_random(mem, intra, d, w_out, two_m, d_c, gamma, rng):
    st = _Contraction(mem, intra, d, w_out)
    while len(st.alive) > 1:
        pairs = []
        for x in st.alive:
            for y in st.edges[x]:
                if x < y:
                    pairs.append((x, y))
        if not pairs:
            return None
        rng.shuffle(pairs)
        found = None
        for x, y in pairs:
            w = st.edges[x].get(y, 0.0)
            if w <= 0 or two_m * w + DENSITY_EPS < gamma * st.d[x] * st.d[y]:
                continue
            dz = st.d[x] + st.d[y]
            wz = st.w_out[x] + st.w_out[y] - 2.0 * w
            if two_m * wz + DENSITY_EPS >= gamma * dz * (d_c - dz):
                found = (x, y)
                break
        if found is None:
            return None
        st.merge(*found)
    return st.merges


def check_witness(g: Graph, members, order: GammaOrder, gamma: float = 1.0) -> bool:
    """Replay a witness independently; True iff every step is a legal merge."""
    mem = sorted(set(members))
    if tuple(sorted(order.members)) != tuple(mem):
        return False
    if len(mem) == 1:
        return len(order.merges) == 0
    intra, d, w_out = _community_view(g, mem)
    two_m = 2.0 * g.m
    d_c = sum(d.values())
    current: set[frozenset] = {frozenset((v,)) for v in mem}
    for tx, ty in order.merges:
        xs, ys = frozenset(tx), frozenset(ty)
        if xs not in current or ys not in current:
            return False
        w = _pair_weight(intra, xs, ys)
        dx = sum(d[v] for v in xs)
        dy = sum(d[v] for v in ys)
        if w <= 0 or two_m * w + DENSITY_EPS < gamma * dx * dy:
            return False
        zs = xs | ys
        wz = sum(w2 for v in zs for u, w2 in intra[v].items() if u not in zs)
        if two_m * wz + DENSITY_EPS < gamma * (dx + dy) * (d_c - dx - dy):
            return False
        current = (current - {xs, ys}) | {zs}
    return current == {frozenset(mem)}


def sample_density_fraction(
    g: Graph,
    p,
    gamma: float = 1.0,
    budget: DensityBudget | None = None,
    max_communities: int = 500,
    seed: int = 0,
):
    """Fraction of (sampled) communities that verify as gamma-dense.

    Checks every community when there are at most max_communities, otherwise
    a seeded uniform sample without replacement. Returns (fraction, checked).
    """
    part = p if isinstance(p, Partition) else Partition(g, p)
    comm_ids = part.communities()
    if len(comm_ids) > max_communities:
        rng = np.random.default_rng(seed)
        idx = rng.choice(len(comm_ids), size=max_communities, replace=False)
        comm_ids = [comm_ids[i] for i in sorted(idx)]
    dense = 0
    for c in comm_ids:
        ok, _ = verify_gamma_density(g, part.members[c], gamma, budget)
        if ok:
            dense += 1
    return dense / len(comm_ids), len(comm_ids)
