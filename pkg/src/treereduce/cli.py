"""Command line interface: ``treereduce <command> ...``.

Exit codes: 0 success, 1 negative answer (e.g. languages differ), 2 usage
or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bench, reduce
from .automaton import TreeAutomaton, stats
from .catalog import CatalogError, RelationSpec, Verdict, gfp_allowed
from .lookahead import lookahead_dw_closed, lookahead_up_closed
from .oracle import OracleGuardError, exact_language_equiv
from .relations import Relation
from .simulation import combined_preorder, downward_simulation, upward_simulation
from .timbuk import TimbukError, parse_timbuk, serialize_timbuk


class UsageError(Exception):
    pass


def _load(path: str) -> TreeAutomaton:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_timbuk(fh.read())
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from exc
    except TimbukError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    elif not args.quiet:
        sys.stdout.write(text)


def _stats_text(args, A: TreeAutomaton) -> str:
    st = stats(A)
    if args.json:
        return json.dumps(st._asdict()) + "\n"
    return (f"states {st.states}\ntransitions {st.transitions}\n"
            f"leaf_rules {st.leaf_rules}\navg_branching {st.avg_branching:.3f}\n")


def cmd_parse(args) -> int:
    A = _load(args.file)
    if not args.quiet:
        sys.stdout.write(_stats_text(args, A))
    return 0


def cmd_stats(args) -> int:
    A = _load(args.file)
    sys.stdout.write(_stats_text(args, A))
    return 0


def _split_pair(text: str) -> tuple[str, str]:
    depth = 0
    for i, ch in enumerate(text):
        depth += {"(": 1, ")": -1}.get(ch, 0)
        if ch == "," and depth == 0:
            return text[:i], text[i + 1:]
    raise UsageError(f"--force-prune expects U,D, got {text!r}")


def cmd_reduce(args) -> int:
    A = _load(args.file)
    report = reduce.ReductionReport()
    method = args.method or ("none" if args.force_prune else "heavy")
    if method == "heavy":
        A = reduce.heavy(A, args.la_dw, args.la_up, report)
    elif method in ("ru", "ruq", "ruqp"):
        A = reduce.baseline(A, method, report)
    if args.force_prune:
        u, d = (RelationSpec.parse(s) for s in _split_pair(args.force_prune))
        order = reduce.build_prune_order(A, u, d, force=True)
        if gfp_allowed(u, d) is not Verdict.YES:
            report.unsound = True
            print(f"warning: P({u}, {d}) is not known to preserve the language; "
                  "the output is marked unsound", file=sys.stderr)
        A = reduce._run(report, f"P({u},{d})", lambda B: reduce.prune(B, order), A)
    text = serialize_timbuk(A)
    if report.unsound:
        text = "# UNSOUND: produced by a forced pruning\n" + text
    _emit(args, text)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report.to_json() + "\n")
    return 0


def _relation(A: TreeAutomaton, kind: str) -> Relation:
    n = A.num_states
    parts = kind.split(":")
    try:
        if kind == "dw-sim":
            return downward_simulation(A)
        if kind == "up-sim:id":
            return upward_simulation(A, Relation.identity(n))
        if kind == "up-sim:dwsim":
            return upward_simulation(A, downward_simulation(A))
        if kind == "combined":
            D = downward_simulation(A)
            return combined_preorder(A, D, upward_simulation(A, D))
        if parts[0] == "dw-la" and len(parts) == 2:
            return lookahead_dw_closed(A, int(parts[1]))
        if parts[0] == "up-la" and len(parts) == 3 and parts[2] in ("id", "dwsim"):
            ind = Relation.identity(n) if parts[2] == "id" else downward_simulation(A)
            return lookahead_up_closed(A, int(parts[1]), ind)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    raise UsageError(f"unknown relation kind {kind!r}")


def cmd_relation(args) -> int:
    A = _load(args.file)
    R = _relation(A, args.kind)
    if args.json:
        names = A.state_names
        text = json.dumps(sorted([names[p], names[q]] for p, q in R.pairs())) + "\n"
    else:
        text = R.dump(A.state_names)
    _emit(args, text)
    return 0


def cmd_check(args) -> int:
    A, B = _load(args.equiv[0]), _load(args.equiv[1])
    try:
        result = exact_language_equiv(A, B, max_states=args.max_states)
    except OracleGuardError as exc:
        raise UsageError(str(exc)) from exc
    if args.json:
        print(json.dumps({"equal": result.equal,
                          "witness": None if result.equal else str(result.witness)}))
    elif not args.quiet:
        print("equal" if result.equal else f"differ: {result.witness}")
    return 0 if result.equal else 1


def cmd_gen(args) -> int:
    try:
        p = bench.TvParams(args.n, args.s, args.td, args.ad, args.seed, args.roots)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(args, serialize_timbuk(bench.generate(p)))
    return 0


def cmd_bench(args) -> int:
    try:
        grid = bench.parse_grid(args.grid)
        methods = [m for m in args.methods.split(",") if m]
        rows = bench.experiment(grid, methods, n=args.n, s=args.s, ad=args.ad,
                                samples=args.samples, seed=args.seed, roots=args.roots,
                                workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(args, bench.to_csv(rows))
    return 0


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # subcommands repeat the flags with suppressed defaults so that a flag
    # given before the subcommand is not reset by the subparser
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--quiet", action="store_true", default=default(False),
                        help="suppress normal output")
    parser.add_argument("--json", action="store_true", default=default(False),
                        help="machine-readable output")
    parser.add_argument("--seed", type=int, default=default(0), help="random seed")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    parser = argparse.ArgumentParser(prog="treereduce",
                                     description="Reduce nondeterministic tree automata.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("parse", "validate"):
        p = sub.add_parser(name, parents=[common], help="parse and validate a Timbuk file")
        p.add_argument("file")
        p.set_defaults(func=cmd_parse)

    p = sub.add_parser("stats", parents=[common], help="print size statistics")
    p.add_argument("file")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("reduce", parents=[common], help="reduce an automaton")
    p.add_argument("file")
    p.add_argument("--method", choices=["ru", "ruq", "ruqp", "heavy"])
    p.add_argument("--la-dw", type=int, default=1, help="downward lookahead for heavy")
    p.add_argument("--la-up", type=int, default=1, help="upward lookahead for heavy")
    p.add_argument("--force-prune", metavar="U,D",
                   help="also prune with P(U, D) even if the catalog rejects it")
    p.add_argument("-o", "--output")
    p.add_argument("--report", help="write a JSON pass report here")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("relation", parents=[common], help="print a preorder as p <= q lines")
    p.add_argument("file")
    p.add_argument("--kind", required=True,
                   help="dw-sim | up-sim:id | up-sim:dwsim | combined | dw-la:K | "
                        "up-la:K:id | up-la:K:dwsim")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_relation)

    p = sub.add_parser("check", parents=[common], help="decide language equivalence")
    p.add_argument("--equiv", nargs=2, required=True, metavar=("A", "B"))
    p.add_argument("--max-states", type=int, default=24)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", parents=[common], help="generate a random automaton")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--td", type=float, required=True)
    p.add_argument("--ad", type=float, default=0.8)
    p.add_argument("--roots", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", parents=[common], help="run the density benchmark")
    p.add_argument("--grid", default="td=1.0:6.0:0.5")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--ad", type=float, default=0.8)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--roots", type=int, default=1)
    p.add_argument("--methods", default="ru,ruq,ruqp,heavy:1:1,heavy:2:4")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"treereduce: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
