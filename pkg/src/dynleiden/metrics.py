"""Quality oracles: modularity, move gains, connectivity, threshold predicates.

All formulas share one convention set with graph.Graph: self-loop weight c
contributes 2c to d(v), 2c to w(v, C) when v belongs to C, and c to m. Under
these conventions modularity is invariant across aggregation levels, and the
exact modularity change of a single-vertex move equals exactly twice the
incremental gain returned by modularity_gain.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graph import Graph

# A vertex is "optimal" when no candidate move improves Q by more than this.
GAIN_EPS = 1e-12

# Sentinel target: move the vertex out into a fresh community of its own.
EMPTY = None


class MetricsError(Exception):
    pass


class EmptyGraph(MetricsError):
    """Modularity is undefined on a graph with zero total edge weight."""


class Partition:
    """A community assignment with cached per-community aggregates.

    membership maps every vertex of the graph to a community id. members is
    the reverse index, comm_degree holds d(C) = sum of member degrees, and
    comm_internal holds the in-community weight sum_{v in C} w(v, C).
    """

    __slots__ = ("membership", "members", "comm_degree", "comm_internal")

    def __init__(self, g: Graph, membership: dict[int, int]):
        self.membership = dict(membership)
        for v in g.vertices():
            if v not in self.membership:
                raise MetricsError(f"vertex {v} missing from membership")
        self.members: dict[int, set[int]] = {}
        self.comm_degree: dict[int, float] = {}
        for v, c in self.membership.items():
            self.members.setdefault(c, set()).add(v)
            self.comm_degree[c] = self.comm_degree.get(c, 0.0) + g.degree(v)
        self.comm_internal: dict[int, float] = {c: 0.0 for c in self.members}
        for u, v, w in g.edges():
            if self.membership[u] == self.membership[v]:
                # both endpoints count the edge, self-loops included
                self.comm_internal[self.membership[u]] += 2.0 * w

    @classmethod
    def singletons(cls, g: Graph) -> "Partition":
        return cls(g, {v: v for v in g.vertices()})

    def community_of(self, v: int) -> int:
        return self.membership[v]

    def communities(self) -> list[int]:
        return sorted(self.members)


def _as_partition(g: Graph, p) -> Partition:
    return p if isinstance(p, Partition) else Partition(g, p)


def modularity(g: Graph, p, gamma: float = 1.0) -> float:
    """Q = sum_C [ in(C)/(2m) - gamma * (d(C)/(2m))^2 ]."""
    if g.m <= 0:
        raise EmptyGraph("modularity undefined: total edge weight is zero")
    part = _as_partition(g, p)
    two_m = 2.0 * g.m
    q = 0.0
    for c, members in part.members.items():
        q += part.comm_internal[c] / two_m
        dc = part.comm_degree[c]
        q -= gamma * (dc / two_m) ** 2
    return q


def modularity_gain(g: Graph, p, v: int, target, gamma: float = 1.0) -> float:
    """Incremental gain of moving v to `target` (EMPTY for a fresh community).

    The exact modularity difference of performing the move equals twice this
    value. Moving to the current community returns 0.
    """
    if g.m <= 0:
        raise EmptyGraph("modularity undefined: total edge weight is zero")
    part = _as_partition(g, p)
    c = part.membership[v]
    if target == c:
        return 0.0
    two_m = 2.0 * g.m
    dv = g.degree(v)
    w_cur = 0.0
    w_tgt = 0.0
    nbrs = g.adj.get(v, {})
    for u, w in nbrs.items():
        if u == v:
            continue
        cu = part.membership[u]
        if cu == c:
            w_cur += w
        if target is not EMPTY and cu == target:
            w_tgt += w
    d_cur = part.comm_degree[c]
    d_tgt = 0.0 if target is EMPTY else part.comm_degree.get(target, 0.0)
    return (w_tgt - w_cur) / two_m + gamma * dv * (d_cur - dv - d_tgt) / (two_m * two_m)


def set_removal_gain(g: Graph, membership: dict[int, int], subset, gamma: float = 1.0) -> float:
    """Gain of moving the whole vertex set `subset` out to an empty community.

    Uses the single-vertex gain formula with the set's aggregates: the weight
    from the set to the rest of its community and the set's total degree. All
    subset members must share one community. A value <= 0 means the set is
    locally optimized in place.
    """
    if g.m <= 0:
        raise EmptyGraph("modularity undefined: total edge weight is zero")
    sub = set(subset)
    comms = {membership[v] for v in sub}
    if len(comms) != 1:
        raise MetricsError("set_removal_gain: subset spans multiple communities")
    c = comms.pop()
    two_m = 2.0 * g.m
    d_set = 0.0
    w_out = 0.0
    d_comm = 0.0
    for v, cv in membership.items():
        if cv == c:
            d_comm += g.degree(v)
    for v in sub:
        d_set += g.degree(v)
        for u, w in g.adj.get(v, {}).items():
            if u == v or u in sub:
                continue
            if membership.get(u) == c:
                w_out += w
    return -w_out / two_m + gamma * d_set * (d_comm - d_set) / (two_m * two_m)


def check_connectivity(g: Graph, p) -> dict[int, bool]:
    """Exact per-community connectivity via BFS restricted to the community."""
    part = _as_partition(g, p)
    out: dict[int, bool] = {}
    for c, members in part.members.items():
        if len(members) <= 1:
            out[c] = True
            continue
        start = next(iter(members))
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for u in g.adj.get(x, {}):
                if u != x and u in members and u not in seen:
                    seen.add(u)
                    queue.append(u)
        out[c] = len(seen) == len(members)
    return out


def vertex_optimality_fraction(g: Graph, p, gamma: float = 1.0) -> float:
    """Fraction of vertices with no positive-gain move (tolerance GAIN_EPS)."""
    part = _as_partition(g, p)
    n = g.num_vertices()
    if n == 0:
        return 1.0
    optimal = 0
    for v in g.vertices():
        best = modularity_gain(g, part, v, EMPTY, gamma)
        cv = part.membership[v]
        cands = {part.membership[u] for u in g.adj.get(v, {}) if u != v}
        cands.discard(cv)
        for c in cands:
            gain = modularity_gain(g, part, v, c, gamma)
            if gain > best:
                best = gain
        if best <= GAIN_EPS:
            optimal += 1
    return optimal / n


# -- closed-form update-impact thresholds ------------------------------------
#
# Predicates answering "can an update of magnitude alpha possibly change
# memberships in this configuration". Each kind/case pair is a closed form
# over the pre-update quantities; zero denominators mean the condition is
# unsatisfiable and the predicate returns False.

_LEMMA_KINDS = ("intra-deletion", "cross-deletion", "insertion")


def lemma_threshold(
    kind: str,
    case: int,
    *,
    alpha: float,
    m: float,
    d_v: float = 0.0,
    d_u: float = 0.0,
    w_vu: float = 0.0,
    d_i: float = 0.0,
    gamma: float = 1.0,
) -> bool:
    """Evaluate one update-impact threshold predicate.

    kind is one of "intra-deletion" (deleted edge inside a sub-community),
    "cross-deletion" (deleted edge between sub-communities), or "insertion";
    case is the 1-based configuration case. d_v/d_u are the degrees of the
    affected vertex and its sub-community, w_vu the weight between them, and
    d_i the degree of the merged sequence (insertion case 1 only).
    """
    if kind not in _LEMMA_KINDS:
        raise ValueError(f"unknown lemma kind {kind!r}")
    if case not in (1, 2, 3, 4):
        raise ValueError(f"case must be 1..4, got {case}")
    if gamma <= 0 or m <= 0:
        raise ValueError("gamma and m must be positive")

    if kind == "intra-deletion":
        if case == 1:
            rhs = (2.0 * m * w_vu - gamma * d_v * d_u) / (4.0 * m + 2.0 * w_vu)
            return alpha > rhs
        if w_vu == 0:
            return False
        return alpha > m - gamma * d_v * d_u / (2.0 * w_vu)

    if kind == "cross-deletion":
        if w_vu == 0:
            return False
        return alpha > m - gamma * d_v * d_u / (2.0 * w_vu)

    # insertion
    if case == 1:
        first = alpha > (4.0 / gamma) * m - d_i
        second = d_u > 0 and alpha > (2.0 * w_vu / (gamma * d_u)) * m - d_v
        return first or second
    if case == 2:
        if d_u == 0:
            return False
        return alpha > (2.0 * w_vu / (gamma * d_u)) * m - d_v
    if case == 3:
        if d_v == 0:
            return False
        return alpha > (w_vu / (gamma * d_v)) * m - 0.5 * d_u
    return False  # case 4: never affected


@dataclass
class CommunityReport:
    community_id: int
    size: int
    connected: bool
    gamma_dense: bool
    witness_length: int | None

    def to_dict(self) -> dict:
        return {
            "community_id": self.community_id,
            "size": self.size,
            "connected": self.connected,
            "gamma_dense": self.gamma_dense,
            "witness_length": self.witness_length,
        }
