"""Command-line interface for vector space partition computations.

Subcommands
-----------
types      enumerate partition types passing the chosen filters; for
           (q, v) = (2, 8), ``--reconcile`` compares the computed
           feasible set against the curated reference tables
search     look for a partition of PG(v-1, q) of a given type
pack       exact-cover a ground point set with a demanded type
spectrum   cardinality, span, divisibility, and hyperplane spectrum of a
           point matrix
spread     build a Desarguesian spread partition
mrd        build a lifted-MRD partition
check      verify a partition file

Exit codes: 0 found/valid, 1 infeasible/invalid, 2 timeout, 3 usage or
input errors.  Reports never embed wall-clock times, so equal inputs
produce byte-equal output; searches are single-threaded and
deterministic (a ``--threads`` value above 1 is accepted but falls back
to one thread).
"""

from __future__ import annotations

import argparse
import json
import pathlib
import sys

from .classification import classify_pg72
from .constructions import (
    Partition,
    desarguesian_spread,
    lifted_mrd,
    load_partition,
    save_partition,
    verify_partition,
)
from .cover import build_problem, max_disjoint, search_type, solve
from .errors import BudgetExceededError, FormatError
from .gf import field, gaussian_binomial
from .multisets import PointMultiset, multiset_from_columns, parse_matrix_text
from .refdata import load_pointset, load_pointset_index
from .typecalc import enumerate_types, parse_type, reduction_options
from .subspace import unpack_vector

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_TIMEOUT = 2
EXIT_USAGE = 3

_STATUS_EXIT = {"found": EXIT_OK, "infeasible": EXIT_INFEASIBLE, "timeout": EXIT_TIMEOUT}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); 2 means timeout here
        raise _UsageError(message)


def _config(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k == "func":
            continue
        out[k] = str(v) if isinstance(v, pathlib.Path) else v
    return out


def _emit(args, data: dict, lines: list[str], code: int) -> int:
    if args.format == "structured":
        doc = {"command": args.cmd, "config": _config(args)}
        doc.update(data)
        doc["exit_code"] = code
        print(json.dumps(doc, indent=2))
    else:
        for line in lines:
            print(line)
    return code


def _load_ground(spec: str, q: int) -> PointMultiset:
    """A point multiset from a matrix file path or a bundled dataset name."""
    path = pathlib.Path(spec)
    if path.exists():
        f = field(q)
        return multiset_from_columns(parse_matrix_text(path.read_text(), f), f)
    index = load_pointset_index()
    for name in (spec, path.stem):
        if name in index:
            return load_pointset(name)
    raise _UsageError(f"no such file or bundled point set: {spec}")


def _vector_strings(codes, q: int, v: int) -> list[str]:
    return ["".join(str(c) for c in unpack_vector(code, q, v)) for code in codes]


def cmd_types(args) -> int:
    if args.reconcile:
        if (args.q, args.v) != (2, 8):
            raise _UsageError("--reconcile applies to --q 2 --v 8 only")
        report = classify_pg72()
        lines = list(report.summary_lines())
        for label, group in (("missing", report.missing), ("extra", report.extra)):
            for t in group:
                lines.append(f"{label}: {t}")
        code = EXIT_OK if report.ok else EXIT_INFEASIBLE
        data = {
            "candidates": report.candidates,
            "filter_passing": report.filter_passing,
            "rejection_rules": dict(report.rejection_rules),
            "exclusions": [str(t) for t in report.exclusions],
            "computed": len(report.computed),
            "reference": len(report.reference),
            "missing": [str(t) for t in report.missing],
            "extra": [str(t) for t in report.extra],
            "ok": report.ok,
        }
        return _emit(args, data, lines, code)
    npoints = gaussian_binomial(args.v, 1, args.q)
    if npoints > 400:
        raise _UsageError(
            f"q={args.q}, v={args.v} spans {npoints} points; enumeration is "
            "limited to spaces with at most 400 points")
    ptypes = enumerate_types(
        args.v,
        args.q,
        tail_filter=args.filters in ("tails", "all"),
        dimension_filter=args.filters != "packing",
    )
    strs = [str(t) for t in ptypes]
    lines = list(strs) if not args.count else []
    lines.append(f"{len(strs)} types for q={args.q}, v={args.v} (filters: {args.filters})")
    return _emit(args, {"count": len(strs), "types": strs}, lines, EXIT_OK)


def cmd_search(args) -> int:
    outcome = search_type(
        args.v,
        args.q,
        args.type,
        prescribe=args.prescribe,
        node_budget=args.node_budget,
        time_budget=args.time_limit,
    )
    lines = [f"search {args.type} in PG({args.v - 1},{args.q}): {outcome.status}"
             + (f" ({outcome.reason})" if outcome.reason else ""),
             f"nodes: {outcome.nodes}"]
    data = {"status": outcome.status, "reason": outcome.reason, "nodes": outcome.nodes}
    if outcome.found:
        partition = Partition(field(args.q), args.v, outcome.witness)
        data["witness"] = partition.to_json_dict()
        if args.output:
            save_partition(partition, args.output)
            lines.append(f"witness written to {args.output}")
    return _emit(args, data, lines, _STATUS_EXIT[outcome.status])


def cmd_pack(args) -> int:
    ground = _load_ground(args.ground, args.q)
    f = ground.field
    if args.max_disjoint is not None:
        result = max_disjoint(ground, args.max_disjoint,
                              node_budget=args.node_budget, time_budget=args.time_limit)
        proven = result.status == "exhausted"
        lines = [
            f"ground: {ground.n} points, span {ground.span_dim()}",
            f"max disjoint subspaces of dimension {args.max_disjoint}: "
            + (f"{result.count}" if proven else f">= {result.count} (timeout)"),
            f"nodes: {result.nodes}",
        ]
        data = {"ground_points": ground.n, "dim": args.max_disjoint,
                "count": result.count, "proven": proven, "nodes": result.nodes}
        return _emit(args, data, lines, EXIT_OK if proven else EXIT_TIMEOUT)
    if not args.type:
        raise _UsageError("pack needs --type (or --max-disjoint)")
    problem = build_problem(ground, args.type)
    outcome = solve(problem, node_budget=args.node_budget, time_budget=args.time_limit)
    lines = [
        f"ground: {ground.n} points, span {ground.span_dim()}",
        "candidates: " + ", ".join(
            f"dim {d}: {c}" for d, c in sorted(problem.candidate_counts().items(),
                                               reverse=True)),
        f"pack {args.type}: {outcome.status}"
        + (f" ({outcome.reason})" if outcome.reason else ""),
        f"nodes: {outcome.nodes}",
    ]
    data = {
        "ground_points": ground.n,
        "candidates": {str(d): c for d, c in problem.candidate_counts().items()},
        "status": outcome.status,
        "reason": outcome.reason,
        "nodes": outcome.nodes,
    }
    if outcome.found:
        partition = Partition(f, ground.v, outcome.witness)
        data["witness"] = partition.to_json_dict()
        if args.output:
            save_partition(partition, args.output)
            lines.append(f"witness written to {args.output}")
    return _emit(args, data, lines, _STATUS_EXIT[outcome.status])


def cmd_spectrum(args) -> int:
    ps = _load_ground(args.matrix, args.q)
    q = ps.field.q
    span = ps.span_dim()
    exponent = 0
    for e in range(1, span + 1):
        if ps.is_divisible(q**e):
            exponent = e
    spectrum = ps.spectrum().as_sorted_items()
    lines = [
        f"points: {ps.n} ({'projective' if ps.is_set else 'with repeats'})",
        f"span: {span}",
        f"divisible by: {q**exponent}" if exponent else "divisible by: 1 (not divisible)",
        "spectrum: " + ", ".join(f"a_{i}={a}" for i, a in spectrum),
    ]
    data = {
        "points": ps.n,
        "projective": ps.is_set,
        "span": span,
        "divisibility": q**exponent if exponent else 1,
        "spectrum": {str(i): a for i, a in spectrum},
    }
    return _emit(args, data, lines, EXIT_OK)


def _cmd_construction(args, builder, label: str) -> int:
    partition = builder()
    report = verify_partition(partition)
    lines = [f"{label}: type {report.realized_type}, {report.describe()}"]
    data = {"type": str(report.realized_type), "valid": report.ok,
            "elements": len(partition.elements)}
    if args.output:
        save_partition(partition, args.output)
        lines.append(f"partition written to {args.output}")
    return _emit(args, data, lines, EXIT_OK if report.ok else EXIT_INFEASIBLE)


def cmd_spread(args) -> int:
    return _cmd_construction(
        args, lambda: desarguesian_spread(args.v, args.k, args.q),
        f"Desarguesian spread (v={args.v}, k={args.k}, q={args.q})")


def cmd_mrd(args) -> int:
    return _cmd_construction(
        args, lambda: lifted_mrd(args.v, args.k, args.q),
        f"lifted MRD partition (v={args.v}, k={args.k}, q={args.q})")


def cmd_check(args) -> int:
    partition = load_partition(args.path)
    report = verify_partition(partition)
    q, v = partition.field.q, partition.v
    lines = [f"{args.path}: {report.describe()}"]
    data = {"valid": report.ok, "type": str(report.realized_type)}
    if report.ok:
        hints = []
        for d in sorted({s.k for s in partition.elements if s.k >= 2}, reverse=True):
            labels = ", ".join(label for label, _ in reduction_options(d, q))
            hints.append(f"elements of dimension {d} can be rewritten as: {labels}")
        lines.extend(hints)
        data["rewrite_hints"] = hints
    else:
        if report.duplicated:
            shown = _vector_strings(report.duplicated[:10], q, v)
            lines.append(f"covered more than once ({len(report.duplicated)}): "
                         + " ".join(shown))
            data["duplicated"] = _vector_strings(report.duplicated, q, v)
        if report.uncovered:
            shown = _vector_strings(report.uncovered[:10], q, v)
            lines.append(f"uncovered ({len(report.uncovered)}): " + " ".join(shown))
            data["uncovered"] = _vector_strings(report.uncovered, q, v)
    return _emit(args, data, lines, EXIT_OK if report.ok else EXIT_INFEASIBLE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="vsp", description=__doc__.split("\n\n")[0])
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text",
                        help="report style: human lines or one JSON document")
    common.add_argument("--threads", type=int, default=1,
                        help="accepted for compatibility; searches run single-threaded")
    sub = parser.add_subparsers(dest="cmd", parser_class=_Parser)

    p = sub.add_parser("types", parents=[common],
                       help="enumerate partition types passing the filters")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--filters", choices=("packing", "dimension", "tails", "all"),
                   default="all")
    p.add_argument("--reconcile", action="store_true",
                   help="compare against the curated PG(7,2) tables")
    p.add_argument("--count", action="store_true", help="print only the count")
    p.set_defaults(func=cmd_types)

    p = sub.add_parser("search", parents=[common],
                       help="search for a partition of PG(v-1,q) of a type")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--type", required=True)
    p.add_argument("--prescribe", default="auto",
                   help="number of canonical elements to pre-place: auto, none, or 0..3")
    p.add_argument("--node-budget", type=int, default=None)
    p.add_argument("--time-limit", type=float, default=None, help="seconds")
    p.add_argument("-o", "--output", type=pathlib.Path, default=None,
                   help="write a found witness as a partition file")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("pack", parents=[common],
                       help="exact-cover a ground point set with a demanded type")
    p.add_argument("--ground", required=True,
                   help="matrix file (columns are points) or bundled dataset name")
    p.add_argument("--q", type=int, default=2, help="field size for matrix files")
    p.add_argument("--type", default=None)
    p.add_argument("--max-disjoint", type=int, default=None, metavar="DIM",
                   help="instead: maximize disjoint DIM-subspaces inside the ground")
    p.add_argument("--node-budget", type=int, default=None)
    p.add_argument("--time-limit", type=float, default=None, help="seconds")
    p.add_argument("-o", "--output", type=pathlib.Path, default=None)
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("spectrum", parents=[common],
                       help="span, divisibility, and spectrum of a point matrix")
    p.add_argument("--matrix", required=True,
                   help="matrix file (columns are points) or bundled dataset name")
    p.add_argument("--q", type=int, default=2)
    p.set_defaults(func=cmd_spectrum)

    for name, fn, extra in (("spread", cmd_spread, "Desarguesian spread"),
                            ("mrd", cmd_mrd, "lifted MRD partition")):
        p = sub.add_parser(name, parents=[common], help=f"build a {extra}")
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--v", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("-o", "--output", type=pathlib.Path, default=None)
        p.set_defaults(func=fn)

    p = sub.add_parser("check", parents=[common], help="verify a partition file")
    p.add_argument("path", type=pathlib.Path)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "cmd", None) is None:
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        if args.threads != 1:
            print("note: searches run single-threaded; --threads ignored",
                  file=sys.stderr)
        return args.func(args)
    except _UsageError as exc:
        print(f"vsp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, BudgetExceededError, ValueError, OSError) as exc:
        print(f"vsp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
