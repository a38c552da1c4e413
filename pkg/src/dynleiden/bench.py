"""Benchmark harness: batch construction, metric collection, report output.

The protocol: the first `initial_fraction` of the edge stream builds the
starting graph (stream order = timestamp order when every edge carries one,
otherwise a seeded shuffle); the rest arrives as fixed-size batches of unit
insertions, optionally interleaved with deletions of the oldest live edges.
After every batch the harness records quality (modularity, connectivity,
sampled subpartition density) and cost (per-phase wall time, change counts).
The first `warmup` maintenance batches are flagged so efficiency summaries
can exclude them; the flag is not a report column.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field

import numpy as np

from .baselines import MaintainerKind, make_maintainer
from .density import DensityBudget, sample_density_fraction
from .graph import EdgeDelta, Graph
from .metrics import Partition, check_connectivity, modularity


class BenchError(Exception):
    pass


class NotEnoughEdges(BenchError):
    """The stream cannot supply the requested batch schedule."""


CSV_COLUMNS = [
    "batch",
    "algorithm",
    "modularity",
    "communities",
    "pct_connected",
    "pct_gamma_dense",
    "ms_movement",
    "ms_refinement",
    "ms_aggregation",
    "ms_total",
    "changed",
    "aff",
]


@dataclass
class BenchConfig:
    algorithm: str = "hit"
    batch_size: int = 1000
    batches: int = 9
    gamma: float = 1.0
    levels: int = 10
    initial_fraction: float = 0.8
    seed: int = 0
    with_deletions: bool = False
    warmup: int = 2
    density_sample: int = 500
    density_budget: DensityBudget | None = None

    def validate(self) -> None:
        if not (0.0 < self.initial_fraction < 1.0):
            raise BenchError("initial_fraction must be in (0, 1)")
        if self.batch_size < 1 or self.batches < 1 or self.levels < 1:
            raise BenchError("batch_size, batches, and levels must be >= 1")
        if self.gamma <= 0:
            raise BenchError("gamma must be positive")
        MaintainerKind(self.algorithm)  # raises ValueError on unknown names


@dataclass
class BatchReport:
    batch: int  # 0 is the initial build
    algorithm: str
    modularity: float
    communities: int
    pct_connected: float
    pct_gamma_dense: float
    ms_movement: float
    ms_refinement: float
    ms_aggregation: float
    ms_total: float
    changed: int
    aff: int
    warmup: bool = False  # advisory; never serialized

    def row(self, no_timings: bool = False) -> dict:
        z = no_timings
        return {
            "batch": self.batch,
            "algorithm": self.algorithm,
            "modularity": f"{self.modularity:.6f}",
            "communities": self.communities,
            "pct_connected": f"{self.pct_connected:.4f}",
            "pct_gamma_dense": f"{self.pct_gamma_dense:.4f}",
            "ms_movement": "0.000" if z else f"{self.ms_movement:.3f}",
            "ms_refinement": "0.000" if z else f"{self.ms_refinement:.3f}",
            "ms_aggregation": "0.000" if z else f"{self.ms_aggregation:.3f}",
            "ms_total": "0.000" if z else f"{self.ms_total:.3f}",
            "changed": self.changed,
            "aff": self.aff,
        }


# -- synthetic input ---------------------------------------------------------


def _decode_pair(k: int) -> tuple[int, int]:
    # index of an unordered pair (i < j) laid out by increasing j
    j = int((1.0 + (1.0 + 8.0 * k) ** 0.5) / 2.0)
    i = k - j * (j - 1) // 2
    return i, j


def generate_planted_partition(
    blocks: int, block_size: int, p_in: float, p_out: float, seed: int = 0
) -> list[tuple[int, int]]:
    """Equal-sized blocks, dense inside, sparse across; unit-weight edges.

    Per block pair the edge count is binomial and the edges themselves are
    index-decoded samples without replacement, so generation is linear in
    the output rather than quadratic in the vertex count.
    """
    rng = np.random.default_rng(seed)
    n = block_size
    edges: list[tuple[int, int]] = []
    for b in range(blocks):
        base = b * n
        pairs = n * (n - 1) // 2
        cnt = int(rng.binomial(pairs, p_in))
        if cnt:
            ks = rng.choice(pairs, size=cnt, replace=False)
            for k in sorted(int(x) for x in ks):
                i, j = _decode_pair(k)
                edges.append((base + i, base + j))
    for a in range(blocks):
        for b in range(a + 1, blocks):
            cnt = int(rng.binomial(n * n, p_out))
            if cnt:
                ks = rng.choice(n * n, size=cnt, replace=False)
                for k in sorted(int(x) for x in ks):
                    i, j = divmod(k, n)
                    edges.append((a * n + i, b * n + j))
    return edges


def graph_from_edges(edges) -> Graph:
    """Unit-weight graph from (u, v) pairs or (u, v, w[, ts]) tuples."""
    return Graph.from_edges(
        (e[0], e[1], e[2] if len(e) > 2 else 1.0) for e in edges
    )


# -- batch construction ------------------------------------------------------


def make_batches(
    edges,
    batches: int,
    batch_size: int,
    initial_fraction: float = 0.8,
    seed: int = 0,
    with_deletions: bool = False,
) -> tuple[list[tuple], list[list[EdgeDelta]]]:
    """Split an edge stream into an initial graph and a batch schedule.

    Edges are (u, v[, w[, ts]]) tuples. When every edge has a timestamp the
    stream is ordered by it (stable); otherwise it is shuffled by seed. The
    first initial_fraction of the stream is the starting graph; insertions
    are drawn from the remainder in order. With deletions on, each batch
    also removes batch_size of the oldest still-present initial edges.
    """
    norm = []
    for e in edges:
        u, v = e[0], e[1]
        w = e[2] if len(e) > 2 else 1.0
        ts = e[3] if len(e) > 3 else None
        norm.append((u, v, w, ts))
    if norm and all(e[3] is not None for e in norm):
        order = sorted(range(len(norm)), key=lambda i: (norm[i][3], i))
    else:
        rng = np.random.default_rng(seed)
        order = list(rng.permutation(len(norm)))
    stream = [norm[i] for i in order]
    cut = int(len(stream) * initial_fraction)
    initial = stream[:cut]
    rest = stream[cut:]

    # sliding window: each batch inserts the next batch_size stream edges and,
    # with deletions on, also removes the batch_size oldest still-present ones
    ins_per = batch_size
    del_per = batch_size if with_deletions else 0
    if batches * ins_per > len(rest):
        raise NotEnoughEdges(
            f"need {batches * ins_per} insertable edges after the initial cut, have {len(rest)}"
        )
    if batches * del_per > len(initial):
        raise NotEnoughEdges(
            f"need {batches * del_per} deletions, initial graph has {len(initial)} edges"
        )

    out: list[list[EdgeDelta]] = []
    ins_ptr = 0
    del_ptr = 0
    for _ in range(batches):
        deltas: list[EdgeDelta] = []
        for _ in range(ins_per):
            u, v, w, _ts = rest[ins_ptr]
            ins_ptr += 1
            deltas.append(EdgeDelta(u, v, w))
        for _ in range(del_per):
            u, v, w, _ts = initial[del_ptr]
            del_ptr += 1
            deltas.append(EdgeDelta(u, v, -w))
        out.append(deltas)
    return initial, out


# -- the run itself ----------------------------------------------------------


def _quality(g: Graph, membership: dict[int, int], cfg: BenchConfig) -> tuple[float, int, float, float]:
    part = Partition(g, membership)
    q = modularity(g, part, cfg.gamma)
    conn = check_connectivity(g, part)
    pct_conn = 100.0 * sum(conn.values()) / len(conn) if conn else 100.0
    frac, _checked = sample_density_fraction(
        g,
        part,
        gamma=cfg.gamma,
        budget=cfg.density_budget,
        max_communities=cfg.density_sample,
        seed=cfg.seed,
    )
    return q, len(part.members), pct_conn, 100.0 * frac


def run_benchmark(initial_edges, batches, cfg: BenchConfig):
    """Build, then maintain through the batch schedule.

    Returns (reports, change_feed, maintainer). The change feed has one row
    per reported membership change: {batch, vertex, old, new}.
    """
    cfg.validate()
    g0 = graph_from_edges(initial_edges)
    build_timings: dict[str, float] = {}
    t0 = time.perf_counter()
    maintainer = make_maintainer(cfg.algorithm, g0, levels=cfg.levels, gamma=cfg.gamma, timings=build_timings)
    build_ms = (time.perf_counter() - t0) * 1e3
    reports: list[BatchReport] = []
    change_feed: list[dict] = []

    q, ncomm, pct_conn, pct_dense = _quality(maintainer.graph, maintainer.membership, cfg)
    reports.append(
        BatchReport(
            batch=0,
            algorithm=MaintainerKind(cfg.algorithm).value,
            modularity=q,
            communities=ncomm,
            pct_connected=pct_conn,
            pct_gamma_dense=pct_dense,
            ms_movement=build_timings.get("movement", 0.0),
            ms_refinement=build_timings.get("refinement", 0.0),
            ms_aggregation=build_timings.get("aggregation", 0.0),
            ms_total=build_ms,
            changed=0,
            aff=0,
            warmup=False,
        )
    )
    for i, batch in enumerate(batches, start=1):
        res = maintainer.step(batch)
        q, ncomm, pct_conn, pct_dense = _quality(maintainer.graph, res.membership, cfg)
        reports.append(
            BatchReport(
                batch=i,
                algorithm=MaintainerKind(cfg.algorithm).value,
                modularity=q,
                communities=ncomm,
                pct_connected=pct_conn,
                pct_gamma_dense=pct_dense,
                ms_movement=res.ms_movement,
                ms_refinement=res.ms_refinement,
                ms_aggregation=res.ms_aggregation,
                ms_total=res.ms_total,
                changed=res.changed,
                aff=res.aff,
                warmup=i <= cfg.warmup,
            )
        )
        for row in res.feed:
            change_feed.append({"batch": i, **row})
    return reports, change_feed, maintainer


# -- output ------------------------------------------------------------------


def render_csv(reports, no_timings: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in reports:
        writer.writerow(r.row(no_timings))
    return buf.getvalue()


def render_json(reports, no_timings: bool = False) -> str:
    return json.dumps([r.row(no_timings) for r in reports], indent=2, sort_keys=True) + "\n"


def emit_report(reports, fmt: str = "csv", out=None, no_timings: bool = False) -> str:
    """Serialize reports; write to `out` (path or file object) when given."""
    if fmt == "csv":
        text = render_csv(reports, no_timings)
    elif fmt == "json":
        text = render_json(reports, no_timings)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if out is not None:
        if hasattr(out, "write"):
            out.write(text)
        else:
            with open(out, "w") as fh:
                fh.write(text)
    return text


def median(values) -> float:
    vals = sorted(values)
    if not vals:
        raise ValueError("median of empty sequence")
    mid = len(vals) // 2
    if len(vals) % 2:
        return vals[mid]
    return 0.5 * (vals[mid - 1] + vals[mid])
