"""``gozinta`` command line.

Exit codes: 0 for ok / witness / feasible, 1 for a failed verification,
an infeasible search or nothing found, 2 for usage and parse errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import catalog, fileformat
from .achievability import (
    PermSpec,
    ProvedInfeasible,
    brute_force_search,
    jointly_achievable,
    pattern_report,
    verify_impossibility,
)
from .constructions import (
    boost_concat,
    boost_duplicate,
    boost_inverse,
    gen_triple,
    reduce_dimension,
    replace_gap_side,
    restore_expansion_bound,
    scale,
    shift,
)
from .core import make_dims
from .errors import (
    BudgetExceeded,
    GozintaError,
    NotMutuallyNestable,
    NotVerified,
    ParseError,
    UnverifiedInput,
)
from .nesting import classify_pair, render_instance_diagrams, verify_trick
from .perms import format_perm, inversions, parse_perm

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _perm(text: str):
    try:
        return parse_perm(text)
    except GozintaError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _dims(text: str):
    try:
        return make_dims(text.split(","))
    except (GozintaError, ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad dimensions {text!r}: {exc}") from None


def _emit(instance, path: Optional[str]) -> None:
    """Re-verify, then write the file text to ``path`` or stdout."""
    report = verify_trick(instance)
    if not report.ok:
        raise NotVerified(f"refusing to emit an unverified instance: {report.violations[0]}")
    if path:
        fileformat.dump(instance, path)
    else:
        sys.stdout.write(fileformat.render(instance))


def _load(path: str, enforce_bound: bool = True):
    return fileformat.load(path, enforce_bound)


def cmd_verify(args) -> int:
    instance = _load(args.file, not args.no_bound)
    sys.stdout.write(render_instance_diagrams(instance))
    report = verify_trick(instance)
    for v in report.violations:
        print(f"violation: {v}")
    print("OK" if report.ok else "FAIL")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_diagram(args) -> int:
    sys.stdout.write(render_instance_diagrams(_load(args.file, enforce_bound=False)))
    return EXIT_OK


def cmd_classify(args) -> int:
    try:
        result = classify_pair(args.a, args.b, enforce_bound=args.bound)
    except NotMutuallyNestable as exc:
        print(f"not mutually nestable: {exc}")
        return EXIT_FAIL
    print(result)
    return EXIT_OK


def _spec(args) -> PermSpec:
    return PermSpec(args.boxes, args.dim, tuple(args.perm))


def cmd_achieve(args) -> int:
    spec = _spec(args)
    result = jointly_achievable(spec, args.normalize, args.workers, args.backend)
    if isinstance(result, ProvedInfeasible):
        print("ProvedInfeasible")
        print(f"cases_checked: {result.cases_checked}")
        return EXIT_FAIL
    instance = restore_expansion_bound(result.instance)
    print("Witness")
    print(f"cases_checked: {result.cases_checked}")
    print("patterns: " + " ".join(pattern_report(instance)))
    sys.stdout.write(render_instance_diagrams(instance))
    if args.emit:
        _emit(instance, args.emit)
    return EXIT_OK


def cmd_impossible(args) -> int:
    report = verify_impossibility(args.boxes, args.dim, tuple(args.perm),
                                  args.workers, args.backend)
    print("perms: " + " ".join(format_perm(p) for p in report.perms))
    print(f"cases_checked: {report.cases_checked}")
    print(f"cases_total: {report.cases_total}")
    print(f"all_infeasible: {'true' if report.all_infeasible else 'false'}")
    return EXIT_OK if report.all_infeasible else EXIT_FAIL


def cmd_brute(args) -> int:
    try:
        found = brute_force_search(args.boxes, args.dim, args.max_side, tuple(args.perm),
                                   args.budget)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}")
        return EXIT_FAIL
    if found is None:
        print("none found")
        return EXIT_FAIL
    sys.stdout.write(render_instance_diagrams(found))
    if args.emit:
        _emit(found, args.emit)
    return EXIT_OK


def cmd_boost(args) -> int:
    if args.op == "concat":
        out = boost_concat(_load(args.first, False), _load(args.second, False),
                           args.p1, args.p2)
    elif args.op == "dup":
        out = boost_duplicate(_load(args.file, False), args.x)
    else:
        out = boost_inverse(_load(args.file, False), args.perm)
    _emit(out, args.output)
    return EXIT_OK


def cmd_reduce(args) -> int:
    _emit(reduce_dimension(_load(args.file, False)), args.output)
    return EXIT_OK


def cmd_transform(args) -> int:
    instance = _load(args.file, False)
    if args.op == "scale":
        out = scale(instance, args.value)
    elif args.op == "shift":
        out = shift(instance, args.value)
    elif args.op == "restore":
        out = restore_expansion_bound(instance)
    else:
        out = replace_gap_side(instance, args.label, args.side, args.value, args.low, args.high)
    _emit(out, args.output)
    return EXIT_OK


def cmd_gen_triple(args) -> int:
    _emit(gen_triple(args.n), args.output)
    return EXIT_OK


def cmd_catalog(args) -> int:
    if not args.name:
        for name in catalog.names():
            print(name)
        return EXIT_OK
    instance = catalog.get(args.name)
    if args.diagram:
        sys.stdout.write(render_instance_diagrams(instance))
        return EXIT_OK
    _emit(instance, args.output)
    return EXIT_OK


def cmd_coolness(args) -> int:
    print(inversions(args.perm))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gozinta", description="Gozinta box nesting toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", help="check every arrangement in a file")
    p.add_argument("file")
    p.add_argument("--no-bound", action="store_true", help="ignore the 2x expansion bound")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("diagram", help="print nesting diagrams")
    p.add_argument("file")
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("classify", help="classify a mutually nesting 3-D pair")
    p.add_argument("a", type=_dims, help="comma separated, e.g. 4,6,6")
    p.add_argument("b", type=_dims)
    p.add_argument("--bound", action="store_true", help="enforce the expansion bound")
    p.set_defaults(func=cmd_classify)

    def search_args(p, emit=True):
        p.add_argument("--dim", type=int, required=True)
        p.add_argument("--boxes", type=int, required=True)
        p.add_argument("--perm", type=_perm, action="append", default=[])
        if emit:
            p.add_argument("--emit", help="write the witness to this file")

    def engine_args(p):
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--backend", choices=("cython", "python"), default=None)

    p = sub.add_parser("achieve", help="search for boxes realising permutations")
    search_args(p)
    p.add_argument("--normalize", action="store_true")
    engine_args(p)
    p.set_defaults(func=cmd_achieve)

    p = sub.add_parser("impossible", help="exhaust every case without normalisation")
    search_args(p, emit=False)
    engine_args(p)
    p.set_defaults(func=cmd_impossible)

    p = sub.add_parser("brute", help="integer brute-force search")
    search_args(p)
    p.add_argument("--max-side", type=int, required=True)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_brute)

    p = sub.add_parser("boost", help="build larger box sets")
    ops = p.add_subparsers(dest="op", required=True, parser_class=_Parser)
    q = ops.add_parser("concat")
    q.add_argument("first")
    q.add_argument("second")
    q.add_argument("--p1", type=_perm)
    q.add_argument("--p2", type=_perm)
    q.add_argument("-o", "--output")
    q = ops.add_parser("dup")
    q.add_argument("file")
    q.add_argument("x", type=int)
    q.add_argument("-o", "--output")
    q = ops.add_parser("inv")
    q.add_argument("file")
    q.add_argument("--perm", type=_perm)
    q.add_argument("-o", "--output")
    p.set_defaults(func=cmd_boost)

    p = sub.add_parser("reduce", help="drop the largest side of every box")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("transform", help="scale, shift, restore or move one side")
    ops = p.add_subparsers(dest="op", required=True, parser_class=_Parser)
    for name in ("scale", "shift"):
        q = ops.add_parser(name)
        q.add_argument("file")
        q.add_argument("value")
        q.add_argument("-o", "--output")
    q = ops.add_parser("restore")
    q.add_argument("file")
    q.add_argument("-o", "--output")
    q = ops.add_parser("replace")
    q.add_argument("file")
    q.add_argument("label")
    q.add_argument("side", type=int)
    q.add_argument("value")
    q.add_argument("--low")
    q.add_argument("--high")
    q.add_argument("-o", "--output")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("gen-triple", help="natural+reverse triple in N dimensions")
    p.add_argument("n", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen_triple)

    p = sub.add_parser("catalog", help="list or print reference box sets")
    p.add_argument("name", nargs="?")
    p.add_argument("--diagram", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("coolness", help="number of inversions")
    p.add_argument("perm", type=_perm)
    p.set_defaults(func=cmd_coolness)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (ParseError, OSError, KeyError) as exc:
        print(f"gozinta: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotVerified, UnverifiedInput) as exc:
        print(f"gozinta: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (GozintaError, ValueError) as exc:
        print(f"gozinta: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
