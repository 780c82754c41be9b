"""Command-line surface: ``segcom detect | eval | bench``.

Exit codes are a stable contract for harnesses: 0 success, 1 I/O failure,
2 usage or input-validation error.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from typing import Optional

from .entropy import EntropyDomainError, entropy_2d
from .game import DetectorConfig, detect_nonoverlapping
from .graph import (Cover, EdgeListParseError, Graph, GraphValidationError,
                    load_cover, parse_edge_list, write_cover)
from .metrics import MetricError, avg_f1, nmi, onmi
from .overlap import detect_overlapping
from .report import RunReport

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2


def _add_detect_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--directed", action="store_true",
                        help="treat the edge list as directed")
    parser.add_argument("--weighted", action="store_true",
                        help="expect 'u v w' lines with edge weights")
    parser.add_argument("--tau-n", type=float, default=0.3, metavar="F",
                        help="termination threshold in (0,1) (default 0.3)")
    parser.add_argument("--rule", choices=("algorithm1", "eq7"),
                        default="algorithm1",
                        help="transfer acceptance rule (default algorithm1)")
    parser.add_argument("--max-iters", type=int, default=100, metavar="N",
                        help="sweep cap (default 100)")
    parser.add_argument("--seed", type=int, default=None, metavar="N",
                        help="shuffle node visiting order with this seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="segcom",
        description="Community detection by structural-entropy game, plus "
                    "evaluation and benchmarking utilities.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_detect = sub.add_parser("detect", help="detect communities in an edge list")
    p_detect.add_argument("input", help="edge-list file ('u v' or 'u v w' lines)")
    _add_detect_flags(p_detect)
    p_detect.add_argument("--overlapping", action="store_true",
                          help="run the node-replication phase after the game")
    p_detect.add_argument("--gamma", type=float, default=1.0, metavar="F",
                          help="overlap threshold factor (default 1.0)")
    p_detect.add_argument("--threads", type=int, default=1, metavar="N",
                          help="worker threads (default 1, fully deterministic)")
    p_detect.add_argument("--output", metavar="PATH",
                          help="write communities here instead of stdout")
    p_detect.add_argument("--report", metavar="PATH",
                          help="write a run report here")
    p_detect.set_defaults(func=cmd_detect)

    p_eval = sub.add_parser("eval", help="score detected communities against ground truth")
    p_eval.add_argument("--detected", required=True, metavar="PATH")
    p_eval.add_argument("--truth", required=True, metavar="PATH")
    p_eval.add_argument("--metric", choices=("f1", "nmi", "onmi", "all"),
                        default="all")
    p_eval.set_defaults(func=cmd_eval)

    p_bench = sub.add_parser("bench", help="time detection over inputs and thread counts")
    p_bench.add_argument("--input", action="append", required=True, metavar="PATH",
                         help="edge-list file (repeatable)")
    _add_detect_flags(p_bench)
    p_bench.add_argument("--threads", default="1", metavar="LIST",
                         help="comma-separated worker counts (default '1')")
    p_bench.add_argument("--repeats", type=int, default=1, metavar="N",
                         help="runs per cell; the median time is reported")
    p_bench.set_defaults(func=cmd_bench)
    return parser


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _config_from(args, threads: int) -> DetectorConfig:
    return DetectorConfig(tau_n=args.tau_n, gamma=getattr(args, "gamma", 1.0),
                          max_iterations=args.max_iters, workers=threads,
                          rule=args.rule, ordering_seed=args.seed)


def _run_detection(path: str, args, threads: int) -> tuple[Graph, Cover, RunReport]:
    graph = parse_edge_list(_read_text(path), directed=args.directed,
                            weighted=args.weighted)
    config = _config_from(args, threads)
    overlapping = getattr(args, "overlapping", False)

    started = time.perf_counter()
    state = detect_nonoverlapping(graph, config)
    detect_seconds = time.perf_counter() - started

    overlap_seconds = 0.0
    if overlapping:
        started = time.perf_counter()
        cover = detect_overlapping(graph, state, config)
        overlap_seconds = time.perf_counter() - started
    else:
        cover = state.to_cover()

    report = RunReport(
        input_path=path, nodes=graph.node_count, edges=graph.edge_count,
        directed=graph.directed, weighted=args.weighted, rule=config.rule,
        tau_n=config.tau_n, gamma=config.gamma, workers=threads,
        max_iterations=config.max_iterations, seed=config.ordering_seed,
        overlapping=overlapping, iterations=state.iterations,
        communities=len(cover), detect_seconds=detect_seconds,
        overlap_seconds=overlap_seconds, sweeps=state.sweeps)
    return graph, cover, report


def cmd_detect(args) -> int:
    graph, cover, report = _run_detection(args.input, args, args.threads)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            write_cover(cover, graph.labels, handle)
    else:
        write_cover(cover, graph.labels, sys.stdout)
    if args.report:
        try:
            report.final_entropy = entropy_2d(graph, cover)
        except EntropyDomainError:
            report.final_entropy = None
        with open(args.report, "w", encoding="utf-8") as handle:
            handle.write(report.render())
    return EXIT_OK


def _load_cover_pair(detected_path: str, truth_path: str) -> tuple[Cover, Cover]:
    detected_text = _read_text(detected_path)
    truth_text = _read_text(truth_path)
    index: dict[str, int] = {}
    for text in (detected_text, truth_text):
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            for label in line.split():
                index.setdefault(label, len(index))
    return load_cover(detected_text, index), load_cover(truth_text, index)


def cmd_eval(args) -> int:
    detected, truth = _load_cover_pair(args.detected, args.truth)
    rows: list[tuple[str, float]] = []
    if args.metric in ("f1", "all"):
        rows.append(("f1", avg_f1(detected, truth)))
    if args.metric in ("onmi", "all"):
        rows.append(("onmi", onmi(detected, truth)))
    if args.metric == "nmi":
        if not (detected.is_partition() and truth.is_partition()):
            raise MetricError(
                "nmi requires disjoint partitions: at least one input assigns "
                "some node to more than one community (use onmi for covers)")
        rows.append(("nmi", nmi(detected, truth)))
    elif args.metric == "all" and detected.is_partition() and truth.is_partition() \
            and detected.nodes() == truth.nodes():
        rows.append(("nmi", nmi(detected, truth)))
    for name, value in rows:
        print(f"{name}\t{value:.4f}")
    return EXIT_OK


def _parse_thread_list(text: str) -> list[int]:
    try:
        counts = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise GraphValidationError(f"bad --threads list {text!r}") from None
    if not counts or any(c < 1 for c in counts):
        raise GraphValidationError(f"bad --threads list {text!r}")
    return counts


def cmd_bench(args) -> int:
    thread_counts = _parse_thread_list(args.threads)
    print("# segcom bench v1")
    print("input\tthreads\trepeats\tmedian_seconds\titerations\tcommunities\tmoved_total")
    for path in args.input:
        for threads in thread_counts:
            runs = []
            for _ in range(args.repeats):
                _, cover, report = _run_detection(path, args, threads)
                total = report.detect_seconds + report.overlap_seconds
                moved = sum(sweep.moved for sweep in report.sweeps)
                runs.append((total, report.iterations, len(cover), moved))
            runs.sort()
            median_seconds = statistics.median(total for total, *_ in runs)
            _, iterations, communities, moved = runs[(len(runs) - 1) // 2]
            print(f"{path}\t{threads}\t{args.repeats}\t{median_seconds:.6f}"
                  f"\t{iterations}\t{communities}\t{moved}")
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EdgeListParseError, GraphValidationError, MetricError, ValueError) as err:
        print(f"segcom: {err}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as err:
        print(f"segcom: {err}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
