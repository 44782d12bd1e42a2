"""Command line front end.

Exit codes: 0 success, 1 error (including usage errors), 2 a computed ratio
exceeds its proven guarantee.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench
from .instance import InstanceFormatError, InstanceValidationError, generate_instance, read_instance, write_instance
from .simplex import SimplexError
from .solvers import DEFAULT_BUDGET, BudgetExceeded
from .verify import run_all

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for guarantee violations
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _positive(min_value):
    def parse(text):
        value = int(text)
        if value < min_value:
            raise argparse.ArgumentTypeError(f"must be >= {min_value}")
        return value
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cyclehub", description="Cycle-star hub network design solver")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a random instance file")
    g.add_argument("--hubs", type=_positive(3), required=True)
    g.add_argument("--nonhubs", type=_positive(1), required=True)
    g.add_argument("--mode", choices=("general", "assumption1"), default="general")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)

    s = sub.add_parser("solve", help="solve one instance and print a JSON row")
    s.add_argument("path")
    s.add_argument("--method", choices=bench.METHODS, required=True)
    s.add_argument("--seed", type=int, default=None,
                   help="draw rounding thresholds from this seed (algorithm4 only)")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="max assignments enumerated by the exact solver")
    s.add_argument("--no-exact", action="store_true", help="skip the exact reference")
    s.add_argument("--timings", action="store_true", help="record wall time in the row")

    v = sub.add_parser("verify", help="run the randomised structural checks")
    v.add_argument("--hubs-min", type=_positive(3), default=3)
    v.add_argument("--hubs-max", type=_positive(3), default=12)
    v.add_argument("--trials", type=_positive(1), default=200)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    b = sub.add_parser("bench", help="run an experiment grid from a JSON config")
    b.add_argument("config")
    b.add_argument("--out", default=None, help="override the config's output path")
    b.add_argument("--workers", type=_positive(1), default=None)
    return parser


def cmd_generate(args) -> int:
    inst = generate_instance(args.hubs, args.nonhubs, args.mode, args.seed)
    try:
        write_instance(inst, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = read_instance(args.path)
    rep, = bench.run_methods(inst, [args.method], args.budget, seed=args.seed, with_exact=not args.no_exact)
    row = bench.report_row(rep, inst.h, inst.n, args.seed, args.timings)
    print(json.dumps(row))
    return EXIT_VIOLATION if row["within_guarantee"] is False else EXIT_OK


def cmd_verify(args) -> int:
    if args.hubs_max < args.hubs_min:
        print("error: --hubs-max must be >= --hubs-min", file=sys.stderr)
        return EXIT_ERROR
    results = run_all(args.hubs_min, args.hubs_max, args.trials, args.seed, args.inject_fault)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.ok for r in results) else EXIT_ERROR


def cmd_bench(args) -> int:
    cfg = bench.load_config(args.config)
    if args.out:
        cfg.output = args.out
    if args.workers:
        cfg.workers = args.workers
    rows = bench.run_bench(cfg)
    Path(cfg.output).write_text(bench.dump_rows(rows), encoding="utf-8")
    summary = bench.summarize(rows)
    print(bench.format_summary(summary))
    print(f"{len(rows)} rows written to {cfg.output}")
    if any(g["violations"] for g in summary):
        return EXIT_VIOLATION
    if any(g["errors"] for g in summary):
        return EXIT_ERROR
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "solve": cmd_solve, "verify": cmd_verify, "bench": cmd_bench}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits on --help (0) and on usage errors (1, see _Parser)
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (InstanceFormatError, InstanceValidationError, BudgetExceeded, SimplexError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
