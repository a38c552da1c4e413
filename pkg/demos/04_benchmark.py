"""
Benchmarking the three maintainers on one stream
================================================

Same planted-partition stream, three ways to keep the answer fresh: full
rerun per batch (static), rerun seeded with the previous answer (nd), and
incremental repair (hit). The harness replays the stream and reports
quality and cost per batch.
"""

from dynleiden import BenchConfig, emit_report, generate_planted_partition, make_batches, run_benchmark

edges = generate_planted_partition(blocks=10, block_size=60, p_in=0.12, p_out=0.002, seed=1)
print(f"stream: {len(edges)} edges over {10 * 60} vertices")

for algorithm in ("static", "nd", "hit"):
    cfg = BenchConfig(algorithm=algorithm, batch_size=50, batches=5,
                      initial_fraction=0.8, seed=1)
    initial, batches = make_batches(edges, cfg.batches, cfg.batch_size,
                                    cfg.initial_fraction, cfg.seed)
    reports, feed, maintainer = run_benchmark(initial, batches, cfg)
    med = sorted(r.ms_total for r in reports[1:])[len(reports[1:]) // 2]
    print(f"\n--- {algorithm}: median step {med:.1f} ms, "
          f"{len(feed)} change-feed rows ---")
    print(emit_report(reports, fmt="csv"))
