"""Reference maintainers the incremental engine is judged against.

Both baselines answer every batch by running the full from-scratch pipeline
on the updated graph; they differ only in how the run is seeded. The scratch
maintainer starts from singletons every time. The warm-start maintainer
seeds movement with the previous answer, which usually converges in fewer
sweeps but still pays full-graph cost per batch.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum

from .graph import Graph
from .hit import HitState, build_hit_state, hit_leiden_step, hit_state_to_json
from .static_leiden import hierarchy_to_json, run_leiden


class MaintainerKind(str, Enum):
    STATIC = "static"  # from-scratch rerun per batch
    ND = "nd"  # rerun seeded with the previous membership
    HIT = "hit"  # incremental hierarchy maintenance


@dataclass
class StepResult:
    membership: dict[int, int]
    ms_movement: float = 0.0
    ms_refinement: float = 0.0
    ms_aggregation: float = 0.0
    ms_total: float = 0.0
    changed: int = 0
    aff: int = 0
    membership_changes: dict[int, tuple[int | None, int]] = field(default_factory=dict)
    feed: list[dict] = field(default_factory=list)  # per-level change rows (incremental only)


def st_leiden_step(g: Graph, batch, levels: int = 10, gamma: float = 1.0) -> StepResult:
    """Apply the batch to g in place, then resolve it from scratch."""
    t0 = time.perf_counter()
    g.apply_batch_inplace(batch)
    timings: dict[str, float] = {}
    membership, _ = run_leiden(g, levels=levels, gamma=gamma, timings=timings)
    return StepResult(
        membership=membership,
        ms_movement=timings.get("movement", 0.0),
        ms_refinement=timings.get("refinement", 0.0),
        ms_aggregation=timings.get("aggregation", 0.0),
        ms_total=(time.perf_counter() - t0) * 1e3,
    )


def nd_leiden_step(
    g: Graph, batch, prev: dict[int, int], levels: int = 10, gamma: float = 1.0
) -> StepResult:
    """Apply the batch in place, then rerun seeded with the previous answer."""
    t0 = time.perf_counter()
    g.apply_batch_inplace(batch)
    timings: dict[str, float] = {}
    membership, _ = run_leiden(g, levels=levels, gamma=gamma, f_init=prev, timings=timings)
    return StepResult(
        membership=membership,
        ms_movement=timings.get("movement", 0.0),
        ms_refinement=timings.get("refinement", 0.0),
        ms_aggregation=timings.get("aggregation", 0.0),
        ms_total=(time.perf_counter() - t0) * 1e3,
    )


class ScratchMaintainer:
    """Answers every batch with a cold full rerun (the quality yardstick)."""

    kind = MaintainerKind.STATIC

    def __init__(self, g: Graph, levels: int = 10, gamma: float = 1.0, timings: dict | None = None):
        self.graph = g.copy()
        self.levels = levels
        self.gamma = gamma
        self.membership, _ = run_leiden(self.graph, levels=levels, gamma=gamma, timings=timings)

    def step(self, batch) -> StepResult:
        out = st_leiden_step(self.graph, batch, self.levels, self.gamma)
        self.membership = out.membership
        return out

    def snapshot(self) -> dict:
        _, hier = run_leiden(self.graph, levels=self.levels, gamma=self.gamma)
        return hierarchy_to_json(hier)


class WarmStartMaintainer:
    """Full rerun per batch, movement seeded with the previous membership."""

    kind = MaintainerKind.ND

    def __init__(self, g: Graph, levels: int = 10, gamma: float = 1.0, timings: dict | None = None):
        self.graph = g.copy()
        self.levels = levels
        self.gamma = gamma
        self.membership, _ = run_leiden(self.graph, levels=levels, gamma=gamma, timings=timings)

    def step(self, batch) -> StepResult:
        out = nd_leiden_step(self.graph, batch, self.membership, self.levels, self.gamma)
        self.membership = out.membership
        return out

    def snapshot(self) -> dict:
        _, hier = run_leiden(self.graph, levels=self.levels, gamma=self.gamma, f_init=self.membership)
        return hierarchy_to_json(hier)


class IncrementalMaintainer:
    """Maintains the full hierarchy; per batch touches only affected parts."""

    kind = MaintainerKind.HIT

    def __init__(self, g: Graph, levels: int = 10, gamma: float = 1.0, timings: dict | None = None):
        self.state: HitState = build_hit_state(g, levels=levels, gamma=gamma, timings=timings)
        self.graph = self.state.levels[0].graph  # authoritative, updated by steps
        self.membership = self.state.membership()

    def step(self, batch) -> StepResult:
        membership, stats = hit_leiden_step(self.state, batch)
        self.membership = membership
        return StepResult(
            membership=membership,
            ms_movement=stats.ms_movement,
            ms_refinement=stats.ms_refinement,
            ms_aggregation=stats.ms_aggregation,
            ms_total=stats.ms_total,
            changed=stats.changed,
            aff=stats.aff,
            membership_changes=stats.membership_changes,
            feed=stats.feed,
        )

    def snapshot(self) -> dict:
        return hit_state_to_json(self.state)


_FACTORIES = {
    MaintainerKind.STATIC: ScratchMaintainer,
    MaintainerKind.ND: WarmStartMaintainer,
    MaintainerKind.HIT: IncrementalMaintainer,
}


def make_maintainer(kind, g: Graph, levels: int = 10, gamma: float = 1.0, timings: dict | None = None):
    kind = MaintainerKind(kind)
    return _FACTORIES[kind](g, levels=levels, gamma=gamma, timings=timings)
