"""Weighted undirected graph with batched edge-delta updates.

Conventions used across the package:

- Edge weights are strictly positive; an edge whose weight reaches zero is
  removed from the adjacency.
- A self-loop on v is stored once with weight c, contributes 2c to the degree
  d(v) and c to the total edge weight m.
- d(v) is the sum of incident edge weights (self-loops doubled), and
  m == sum(d(v)) / 2 at all times.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator

# Weights within this tolerance of zero are treated as zero (edge removal).
WEIGHT_EPS = 1e-12


class GraphError(Exception):
    pass


class DeletionExceedsWeight(GraphError):
    """A net deletion tried to drive an edge weight below zero."""


class NegativeWeight(GraphError):
    """An input edge carried a negative or zero weight."""


class ParseError(GraphError):
    """An edge-stream line could not be parsed."""


@dataclass(frozen=True)
class EdgeDelta:
    """A single signed edge update: alpha > 0 inserts weight, alpha < 0 removes it.

    Endpoints are normalized so u <= v. Self-loops (u == v) are legal; they
    occur naturally in supergraph deltas.
    """

    u: int
    v: int
    alpha: float

    def __post_init__(self):
        if self.alpha == 0:
            raise ValueError("EdgeDelta.alpha must be nonzero")
        if self.u > self.v:
            u, v = self.u, self.v
            object.__setattr__(self, "u", v)
            object.__setattr__(self, "v", u)


def make_delta(u: int, v: int, alpha: float) -> EdgeDelta:
    """Build a normalized EdgeDelta (u <= v)."""
    return EdgeDelta(u, v, alpha)


def _unpack(d) -> tuple[int, int, float]:
    # deltas travel as EdgeDelta-likes or bare (u, v, alpha) triples
    try:
        return d.u, d.v, d.alpha
    except AttributeError:
        u, v, alpha = d
        return u, v, alpha


@dataclass
class DeltaBatch:
    """An ordered list of edge deltas applied as one logical update."""

    deltas: list[EdgeDelta]
    index: int | None = None
    ts_span: tuple[float, float] | None = None

    def __iter__(self) -> Iterator[EdgeDelta]:
        return iter(self.deltas)

    def __len__(self) -> int:
        return len(self.deltas)


class Graph:
    """Undirected weighted graph over integer vertex ids.

    Adjacency is dict-of-dict; self.adj[v][v] holds the self-loop weight when
    present. Degrees and m are maintained incrementally and kept exact.
    """

    __slots__ = ("adj", "deg", "m")

    def __init__(self):
        self.adj: dict[int, dict[int, float]] = {}
        self.deg: dict[int, float] = {}
        self.m: float = 0.0

    # -- construction -------------------------------------------------------

    @classmethod
    def from_edges(cls, edges: Iterable[tuple]) -> "Graph":
        """Build from (u, v, w) triples; duplicate pairs sum their weights."""
        g = cls()
        for e in edges:
            u, v, w = e[0], e[1], e[2]
            if w <= 0:
                raise NegativeWeight(f"edge ({u},{v}) has non-positive weight {w}")
            g.add_weight(u, v, w)
        return g

    def copy(self) -> "Graph":
        g = Graph()
        g.adj = {v: dict(nbrs) for v, nbrs in self.adj.items()}
        g.deg = dict(self.deg)
        g.m = self.m
        return g

    # -- queries ------------------------------------------------------------

    def vertices(self) -> Iterable[int]:
        return self.adj.keys()

    def num_vertices(self) -> int:
        return len(self.adj)

    def num_edges(self) -> int:
        return sum(1 for _ in self.edges())

    def has_vertex(self, v: int) -> bool:
        return v in self.adj

    def weight(self, u: int, v: int) -> float:
        return self.adj.get(u, {}).get(v, 0.0)

    def selfloop(self, v: int) -> float:
        return self.adj.get(v, {}).get(v, 0.0)

    def degree(self, v: int) -> float:
        return self.deg.get(v, 0.0)

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Yield each edge once as (u, v, w) with u <= v; includes self-loops."""
        for u, nbrs in self.adj.items():
            for v, w in nbrs.items():
                if u <= v:
                    yield (u, v, w)

    def weight_to_set(self, v: int, S) -> float:
        """Total weight from v into vertex set S, self-loop doubled when v in S.

        weight_to_set(v, V) == d(v) for the full vertex set V.
        """
        nbrs = self.adj.get(v)
        if not nbrs:
            return 0.0
        total = 0.0
        if len(nbrs) <= len(S):
            for u, w in nbrs.items():
                if u in S and u != v:
                    total += w
        else:
            for u in S:
                if u != v:
                    w = nbrs.get(u)
                    if w is not None:
                        total += w
        if v in S:
            total += 2.0 * nbrs.get(v, 0.0)
        return total

    # -- mutation -----------------------------------------------------------

    def ensure_vertex(self, v: int) -> bool:
        """Add v as an isolated vertex if unseen; True when newly created."""
        if v in self.adj:
            return False
        self.adj[v] = {}
        self.deg[v] = 0.0
        return True

    def add_weight(self, u: int, v: int, w: float) -> None:
        """Unchecked weight accumulation (construction path)."""
        self.ensure_vertex(u)
        self.ensure_vertex(v)
        if u == v:
            self.adj[u][u] = self.adj[u].get(u, 0.0) + w
            self.deg[u] += 2.0 * w
            self.m += w
        else:
            self.adj[u][v] = self.adj[u].get(v, 0.0) + w
            self.adj[v][u] = self.adj[u][v]
            self.deg[u] += w
            self.deg[v] += w
            self.m += w

    def apply_one(self, d) -> None:
        """Apply one delta (EdgeDelta or (u, v, alpha)); raises DeletionExceedsWeight on over-delete."""
        u, v, alpha = _unpack(d)
        self.ensure_vertex(u)
        self.ensure_vertex(v)
        old = self.adj[u].get(v, 0.0)
        new = old + alpha
        if new < -WEIGHT_EPS:
            raise DeletionExceedsWeight(
                f"edge ({u},{v}) has weight {old}, delta {alpha} drives it negative"
            )
        if abs(new) <= WEIGHT_EPS:
            if old != 0.0:
                del self.adj[u][v]
                if u != v:
                    del self.adj[v][u]
            applied = -old
        else:
            self.adj[u][v] = new
            if u != v:
                self.adj[v][u] = new
            applied = alpha
        if u == v:
            self.deg[u] += 2.0 * applied
            self.m += applied
        else:
            self.deg[u] += applied
            self.deg[v] += applied
            self.m += applied

    def apply_batch_inplace(self, batch) -> set[int]:
        """Apply deltas sequentially in order; returns the touched vertex set."""
        touched: set[int] = set()
        for d in batch:
            u, v, _ = _unpack(d)
            self.apply_one(d)
            touched.add(u)
            touched.add(v)
        return touched


def apply_delta(g: Graph, batch) -> Graph:
    """Pure form: return a new graph with the batch applied."""
    out = g.copy()
    out.apply_batch_inplace(batch)
    return out


def weight_to_set(g: Graph, v: int, S) -> float:
    return g.weight_to_set(v, S)


@dataclass
class LoadStats:
    """Summary of an edge-stream ingestion."""

    lines: int = 0
    comments: int = 0
    edges: int = 0
    has_timestamps: bool = False
    id_map: dict[str, int] | None = None
    vertices: int = 0


def load_edge_stream(source) -> tuple[list[tuple], LoadStats]:
    """Parse an edge stream of "u v [w] [timestamp]" lines.

    '#'-prefixed lines are comments. Weight defaults to 1.0. Endpoints are
    normalized u <= v. Integer ids pass through verbatim; if any non-integer
    id appears, all ids are remapped densely in first-seen order and the map
    is returned in the stats. Duplicate pairs are kept (weights sum when a
    graph is built from the list).

    Returns (edges, stats) where each edge is (u, v, w, ts_or_None).
    """
    if isinstance(source, Path):
        fh: IO = open(source, "r")
        close = True
    elif isinstance(source, str):
        if "\n" not in source and Path(source).exists():
            fh = open(source, "r")
            close = True
        else:
            fh = io.StringIO(source)
            close = False
    else:
        fh = source
        close = False

    raw: list[tuple] = []
    stats = LoadStats()
    needs_remap = False
    try:
        for lineno, line in enumerate(fh, start=1):
            stats.lines += 1
            text = line.strip()
            if not text:
                continue
            if text.startswith("#"):
                stats.comments += 1
                continue
            parts = text.split()
            if len(parts) < 2 or len(parts) > 4:
                raise ParseError(f"line {lineno}: expected 'u v [w] [ts]', got {text!r}")
            su, sv = parts[0], parts[1]
            try:
                w = float(parts[2]) if len(parts) >= 3 else 1.0
            except ValueError:
                raise ParseError(f"line {lineno}: bad weight {parts[2]!r}") from None
            if w <= 0:
                raise NegativeWeight(f"line {lineno}: non-positive weight {w}")
            ts = None
            if len(parts) == 4:
                try:
                    ts = float(parts[3])
                except ValueError:
                    raise ParseError(f"line {lineno}: bad timestamp {parts[3]!r}") from None
            if not (su.lstrip("-").isdigit() and sv.lstrip("-").isdigit()):
                needs_remap = True
            raw.append((su, sv, w, ts))
    finally:
        if close:
            fh.close()

    edges: list[tuple] = []
    seen: set[int] = set()
    if needs_remap:
        id_map: dict[str, int] = {}
        for su, sv, w, ts in raw:
            u = id_map.setdefault(su, len(id_map))
            v = id_map.setdefault(sv, len(id_map))
            if u > v:
                u, v = v, u
            edges.append((u, v, w, ts))
            seen.add(u)
            seen.add(v)
        stats.id_map = id_map
    else:
        for su, sv, w, ts in raw:
            u, v = int(su), int(sv)
            if u > v:
                u, v = v, u
            edges.append((u, v, w, ts))
            seen.add(u)
            seen.add(v)

    stats.edges = len(edges)
    stats.vertices = len(seen)
    stats.has_timestamps = bool(edges) and all(e[3] is not None for e in edges)
    return edges, stats
