"""Command-line entry point: ``topocnot compile | bench | random``.

Exit codes: 0 success, 1 usage error, 2 bad input, 3 verification failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .arch import all_pairs_distances, builtin_architecture, load_architecture
from .errors import CompileError, VerificationFailed
from .pipeline import (
    BenchConfig,
    CompileOptions,
    bench_table,
    compile_pipeline,
    load_input,
    load_reference,
    milp_text,
    random_circuit,
)
from .placer import InteractionGraph, import_solution

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _counts(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad count list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty count list")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="topocnot", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compile", help="compile a matrix or circuit for an architecture")
    where = c.add_mutually_exclusive_group(required=True)
    where.add_argument("--arch", help="builtin architecture name")
    where.add_argument("--arch-file", type=Path, help="architecture file ('qubits'/'edge' lines)")
    c.add_argument("--input", required=True, type=Path, help="matrix or circuit file")
    c.add_argument("--place", choices=("local", "exhaustive", "import"), default="local")
    c.add_argument("--solution", type=Path, help="solver output for --place import")
    c.add_argument("--k", type=int, default=2)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--restarts", type=int, default=None)
    c.add_argument("--greedy-trials", type=int, default=2)
    c.add_argument("--warm-start", type=Path, help="placement file ('assign v p' lines)")
    c.add_argument("--emit-swaps", action="store_true")
    c.add_argument("--export-milp", type=Path, help="write the placement MILP in LP format")
    c.add_argument("--stats", type=Path, help="also write 'key value' stats to this file")
    c.add_argument("-o", "--output", type=Path, required=True)

    b = sub.add_parser("bench", help="random-circuit benchmark")
    b.add_argument("--arch", required=True)
    b.add_argument("--counts", type=_counts, required=True)
    b.add_argument("--per-count", type=int, default=20)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--k", type=int, default=2)
    b.add_argument("--restarts", type=int, default=None)
    b.add_argument("--time-budget", type=float, default=None, help="seconds per circuit")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--reference", type=Path, help="CSV with architecture,gates,... columns")
    b.add_argument("-o", "--output", type=Path, required=True)

    r = sub.add_parser("random", help="print a seeded random CNOT circuit")
    r.add_argument("--qubits", type=int, required=True)
    r.add_argument("--gates", type=int, required=True)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("-o", "--output", type=Path)
    return parser


def _cmd_compile(args) -> int:
    arch = builtin_architecture(args.arch) if args.arch else load_architecture(args.arch_file)
    a, gates = load_input(args.input.read_text())
    if args.k < 2:
        raise UsageError("--k must be at least 2")
    if args.place == "import" and args.solution is None:
        raise UsageError("--place import requires --solution")
    opts = CompileOptions(
        place=args.place,
        k=args.k,
        seed=args.seed,
        restarts=args.restarts,
        emit_swaps=args.emit_swaps,
        greedy_trials=args.greedy_trials,
    )
    if args.solution is not None:
        opts.solution = args.solution.read_text()
    if args.warm_start is not None:
        t = all_pairs_distances(arch)
        opts.warm_start = import_solution(args.warm_start.read_text(), InteractionGraph(a.n), t)
    result = compile_pipeline(gates if gates is not None else a, arch, opts, n_qubits=a.n)
    args.output.write_text(result.circuit.to_text())
    if args.export_milp is not None:
        args.export_milp.write_text(milp_text(result, arch))
    lines = "".join(f"{k} {v}\n" for k, v in result.stats.items())
    if args.stats is not None:
        args.stats.write_text(lines)
    sys.stdout.write(lines)
    return EXIT_OK


def _cmd_bench(args) -> int:
    if args.per_count < 1:
        raise UsageError("--per-count must be at least 1")
    cfg = BenchConfig(
        architecture=args.arch,
        counts=args.counts,
        per_count=args.per_count,
        seed=args.seed,
        options=CompileOptions(k=args.k, restarts=args.restarts),
        time_budget=args.time_budget,
        jobs=args.jobs,
    )
    reference = load_reference(args.reference) if args.reference else None
    report = bench_table(cfg, reference)
    text = report.to_csv()
    args.output.write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def _cmd_random(args) -> int:
    gates = random_circuit(args.qubits, args.gates, args.seed)
    text = f"qubits {args.qubits}\n" + "".join(f"{g}\n" for g in gates)
    if args.output:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"topocnot: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    handler = {"compile": _cmd_compile, "bench": _cmd_bench, "random": _cmd_random}[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"topocnot: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationFailed as exc:
        print(f"topocnot: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (CompileError, OSError) as exc:
        print(f"topocnot: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
