"""Dynamic community maintenance on weighted undirected graphs.

The package keeps a Leiden community hierarchy alive under batched edge
insertions and deletions: a from-scratch pipeline builds it, an incremental
engine repairs exactly the affected parts per batch, and independent oracles
check the results (modularity, intra-community connectivity, subpartition
density). A small benchmark harness replays edge streams batch by batch and
reports quality and cost per batch.
"""

from .baselines import (
    IncrementalMaintainer,
    MaintainerKind,
    ScratchMaintainer,
    StepResult,
    WarmStartMaintainer,
    make_maintainer,
    nd_leiden_step,
    st_leiden_step,
)
from .bench import (
    BatchReport,
    BenchConfig,
    BenchError,
    NotEnoughEdges,
    emit_report,
    generate_planted_partition,
    make_batches,
    run_benchmark,
)
from .ccindex import CCIndex, EdgeNotInIndex, build_cc_index, cc_update_edge
from .density import (
    DensityBudget,
    GammaOrder,
    check_witness,
    sample_density_fraction,
    verify_gamma_density,
)
from .graph import (
    WEIGHT_EPS,
    DeletionExceedsWeight,
    DeltaBatch,
    EdgeDelta,
    Graph,
    GraphError,
    LoadStats,
    load_edge_stream,
)
from .hit import (
    BatchStats,
    HitState,
    LevelStats,
    SuperedgeDelta,
    build_hit_state,
    hit_leiden_step,
    hit_state_to_json,
)
from .metrics import (
    EMPTY,
    GAIN_EPS,
    EmptyGraph,
    MetricsError,
    Partition,
    check_connectivity,
    lemma_threshold,
    modularity,
    modularity_gain,
    set_removal_gain,
    vertex_optimality_fraction,
)
from .static_leiden import (
    Hierarchy,
    Level,
    hierarchy_to_json,
    run_leiden,
)

__version__ = "0.1.0"

__all__ = [
    "BatchReport",
    "BatchStats",
    "BenchConfig",
    "BenchError",
    "CCIndex",
    "DeletionExceedsWeight",
    "DeltaBatch",
    "DensityBudget",
    "EMPTY",
    "EdgeDelta",
    "EdgeNotInIndex",
    "EmptyGraph",
    "GAIN_EPS",
    "GammaOrder",
    "Graph",
    "GraphError",
    "Hierarchy",
    "HitState",
    "IncrementalMaintainer",
    "Level",
    "LevelStats",
    "LoadStats",
    "MaintainerKind",
    "MetricsError",
    "NotEnoughEdges",
    "Partition",
    "ScratchMaintainer",
    "StepResult",
    "SuperedgeDelta",
    "WEIGHT_EPS",
    "WarmStartMaintainer",
    "build_cc_index",
    "build_hit_state",
    "cc_update_edge",
    "check_connectivity",
    "check_witness",
    "emit_report",
    "generate_planted_partition",
    "hierarchy_to_json",
    "hit_leiden_step",
    "hit_state_to_json",
    "lemma_threshold",
    "load_edge_stream",
    "make_batches",
    "make_maintainer",
    "modularity",
    "modularity_gain",
    "nd_leiden_step",
    "run_benchmark",
    "run_leiden",
    "sample_density_fraction",
    "set_removal_gain",
    "st_leiden_step",
    "verify_gamma_density",
    "vertex_optimality_fraction",
]
