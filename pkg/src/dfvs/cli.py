"""Command-line front end: solve, verify, stats, and oracle subcommands over
instance files in the PACE 2022 text format.  Batch in, batch out; the only
outputs are the solution on stdout and diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import signal
import sys
from pathlib import Path

from .cover import dump_cover
from .digraph import DirectedGraph, find_cycle, is_acyclic
from .oracle import OracleCapExceeded, minimum_dfvs
from .pace import PaceParseError, parse_solution, read_instance, write_solution
from .solver import Deadline, SolverConfig, export_lp, run_pipeline

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCUMBENT = 2


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _load_instance(path: str):
    try:
        text = _read_text(path)
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return None
    try:
        return read_instance(text)
    except PaceParseError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        return None


def _solver_config(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig(
        harvest_rounds=args.harvest,
        enum_budget=args.enum_budget,
        generalized_desks=args.generalized_desks,
        seed=args.seed,
        time_limit=args.time_limit,
    )


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="random seed")
    parser.add_argument(
        "--time-limit", type=float, default=None, metavar="SEC",
        help="wall-clock limit; on expiry the best incumbent is printed",
    )
    parser.add_argument(
        "--harvest", type=int, default=50, metavar="N",
        help="random cycle harvest rounds per graph per lazy iteration",
    )
    parser.add_argument(
        "--enum-budget", type=int, default=10_000_000, metavar="N",
        help="node budget for the exhaustive cycle search",
    )
    parser.add_argument(
        "--generalized-desks", action="store_true",
        help="enable the relaxed variant of the 4-cycle fold",
    )


def cmd_solve(args: argparse.Namespace) -> int:
    instance = _load_instance(args.instance)
    if instance is None:
        return EXIT_ERROR
    if instance.duplicate_arcs:
        print(
            f"warning: collapsed {instance.duplicate_arcs} duplicate arcs",
            file=sys.stderr,
        )
    cfg = _solver_config(args)
    deadline = Deadline(cfg.time_limit)
    previous = signal.getsignal(signal.SIGTERM)
    signal.signal(signal.SIGTERM, lambda *_: deadline.trigger())
    try:
        result = run_pipeline(instance.graph, cfg, deadline)
    finally:
        signal.signal(signal.SIGTERM, previous)
    result.report.name = args.instance
    sys.stdout.write(write_solution(result.solution.vertices))
    sys.stdout.flush()
    if args.stats:
        for line in result.report.lines():
            print(line, file=sys.stderr)
    if args.export_lp:
        Path(args.export_lp).write_text(export_lp(result.model))
    if args.dump_cycles:
        Path(args.dump_cycles).write_text(
            "".join(" ".join(str(v) for v in c) + "\n" for c in result.cycles)
        )
    if args.dump_cover:
        Path(args.dump_cover).write_text(dump_cover(result.cover))
    return EXIT_OK if result.solution.optimal else EXIT_INCUMBENT


def cmd_stats(args: argparse.Namespace) -> int:
    """Like solve, but the report goes to stdout and the solution is dropped."""
    instance = _load_instance(args.instance)
    if instance is None:
        return EXIT_ERROR
    cfg = _solver_config(args)
    result = run_pipeline(instance.graph, cfg, Deadline(cfg.time_limit))
    result.report.name = args.instance
    for line in result.report.lines():
        print(line)
    return EXIT_OK if result.solution.optimal else EXIT_INCUMBENT


def cmd_verify(args: argparse.Namespace) -> int:
    instance = _load_instance(args.instance)
    if instance is None:
        return EXIT_ERROR
    try:
        chosen = parse_solution(_read_text(args.solution))
    except (OSError, PaceParseError) as exc:
        print(f"error: {args.solution}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    graph: DirectedGraph = instance.graph
    unknown = [v for v in chosen if v not in graph]
    if unknown:
        print(f"error: solution names unknown vertex {unknown[0]}", file=sys.stderr)
        return EXIT_ERROR
    remainder = graph.without(chosen)
    if is_acyclic(remainder):
        print(f"OK size={len(set(chosen))}", file=sys.stderr)
        return EXIT_OK
    witness = find_cycle(remainder)
    assert witness is not None
    print(" ".join(str(v) for v in witness))
    print("error: remaining graph has a cycle", file=sys.stderr)
    return EXIT_INCUMBENT


def cmd_oracle(args: argparse.Namespace) -> int:
    instance = _load_instance(args.instance)
    if instance is None:
        return EXIT_ERROR
    try:
        optimum = minimum_dfvs(instance.graph, args.oracle_max_n)
    except OracleCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(len(optimum))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dfvs",
        description="Exact minimum directed feedback vertex set solver",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve an instance, solution to stdout")
    solve.add_argument("instance", help="instance path, or - for stdin")
    solve.add_argument("--stats", action="store_true", help="report to stderr")
    solve.add_argument(
        "--export-lp", metavar="PATH", default=None,
        help="write the final explicit model in LP format",
    )
    solve.add_argument(
        "--dump-cycles", metavar="PATH", default=None,
        help="write enumerated chordless cycles, one per line",
    )
    solve.add_argument(
        "--dump-cover", metavar="PATH", default=None,
        help="write the reduced cover instance (edges, sets, graphs)",
    )
    _add_solver_flags(solve)
    solve.set_defaults(func=cmd_solve)

    stats = sub.add_parser("stats", help="solve and print only the run report")
    stats.add_argument("instance", help="instance path, or - for stdin")
    _add_solver_flags(stats)
    stats.set_defaults(func=cmd_stats)

    verify = sub.add_parser("verify", help="check a solution file")
    verify.add_argument("instance")
    verify.add_argument("solution")
    verify.set_defaults(func=cmd_verify)

    oracle = sub.add_parser("oracle", help="exact optimum by subset enumeration")
    oracle.add_argument("instance")
    oracle.add_argument(
        "--oracle-max-n", type=int, default=20, metavar="N",
        help="refuse instances with more vertices than this",
    )
    oracle.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
