"""Command-line front end: `dyn-leiden bench` and `dyn-leiden gen`."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import (
    BenchConfig,
    BenchError,
    emit_report,
    generate_planted_partition,
    make_batches,
    run_benchmark,
)
from .graph import GraphError, load_edge_stream


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dyn-leiden",
        description="Community maintenance benchmark on streaming graph updates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="replay an edge stream in batches and report per-batch metrics")
    b.add_argument("--input", required=True, help="edge stream: 'u v [w] [timestamp]' per line, '#' comments")
    b.add_argument("--algorithm", choices=["static", "nd", "hit"], default="hit")
    b.add_argument("--batch-size", type=int, default=1000, metavar="B")
    b.add_argument("--batches", type=int, default=9, metavar="R")
    b.add_argument("--gamma", type=float, default=1.0, metavar="G")
    b.add_argument("--levels", type=int, default=10, metavar="P")
    b.add_argument("--initial-fraction", type=float, default=0.8, metavar="F")
    b.add_argument("--seed", type=int, default=0, metavar="S")
    b.add_argument("--with-deletions", action="store_true",
                   help="each batch also deletes the oldest B still-present edges")
    b.add_argument("--out", default=None, help="report path (default: stdout)")
    b.add_argument("--format", choices=["csv", "json"], default="csv")
    b.add_argument("--no-timings", action="store_true",
                   help="zero the ms_* columns so repeat runs compare byte-for-byte")
    b.add_argument("--dump-state", default=None, metavar="PATH",
                   help="write a JSON snapshot of the final hierarchy")
    b.add_argument("--change-feed", default=None, metavar="PATH",
                   help="write JSON lines of per-level membership/sub changes")

    g = sub.add_parser("gen", help="generate a planted-partition edge stream")
    g.add_argument("--blocks", type=int, required=True, metavar="K")
    g.add_argument("--size", type=int, required=True, metavar="N")
    g.add_argument("--p-in", type=float, default=0.08, metavar="X")
    g.add_argument("--p-out", type=float, default=0.001, metavar="Y")
    g.add_argument("--seed", type=int, default=0, metavar="S")
    g.add_argument("--out", default=None, help="output path (default: stdout)")
    return parser


def _cmd_bench(args) -> int:
    cfg = BenchConfig(
        algorithm=args.algorithm,
        batch_size=args.batch_size,
        batches=args.batches,
        gamma=args.gamma,
        levels=args.levels,
        initial_fraction=args.initial_fraction,
        seed=args.seed,
        with_deletions=args.with_deletions,
    )
    cfg.validate()
    edges, _stats = load_edge_stream(Path(args.input))
    initial, batches = make_batches(
        edges,
        batches=cfg.batches,
        batch_size=cfg.batch_size,
        initial_fraction=cfg.initial_fraction,
        seed=cfg.seed,
        with_deletions=cfg.with_deletions,
    )
    reports, feed, maintainer = run_benchmark(initial, batches, cfg)
    if args.out is None:
        emit_report(reports, fmt=args.format, out=sys.stdout, no_timings=args.no_timings)
    else:
        emit_report(reports, fmt=args.format, out=args.out, no_timings=args.no_timings)
    if args.dump_state is not None:
        with open(args.dump_state, "w") as fh:
            json.dump(maintainer.snapshot(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.change_feed is not None:
        with open(args.change_feed, "w") as fh:
            for row in feed:
                fh.write(json.dumps(row, sort_keys=True) + "\n")
    return 0


def _cmd_gen(args) -> int:
    if args.blocks < 1 or args.size < 1:
        raise BenchError("blocks and size must be >= 1")
    if not (0.0 <= args.p_in <= 1.0 and 0.0 <= args.p_out <= 1.0):
        raise BenchError("p-in and p-out must be probabilities")
    edges = generate_planted_partition(args.blocks, args.size, args.p_in, args.p_out, args.seed)
    lines = [f"# planted partition: blocks={args.blocks} size={args.size} "
             f"p_in={args.p_in} p_out={args.p_out} seed={args.seed}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "bench":
            return _cmd_bench(args)
        return _cmd_gen(args)
    except (BenchError, GraphError, OSError) as exc:
        print(f"dyn-leiden: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
