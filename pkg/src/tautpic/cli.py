"""Command-line interface: ``tautpic present|rank|reduce|equal|clgroup|verify``.

Exit codes: 0 success / true, 1 false or failed verification, 2 usage,
parse or domain error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import io
from .classes import DivisorClass, classes_equal, format_class, parse_class, reduce_class
from .descent import cl_subgroup
from .errors import TautPicError
from .generators import VARIANTS
from .presentations import expected_rank
from .verify import format_report, run_sweep

EXIT_OK, EXIT_FALSE, EXIT_ERROR = 0, 1, 2


def _emit(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _presentation(args, variant=None):
    return io.load_presentation(
        args.g, args.n, variant or args.variant, io.resolve_cache_dir(args.cache_dir)
    )


def cmd_present(args) -> int:
    pres = _presentation(args)
    doc = io.presentation_to_document(pres)
    if args.json:
        _emit(io.dumps(doc))
        return EXIT_OK
    lines = [
        f"variant {pres.variant}, g={pres.g}, n={pres.n}",
        f"generators ({pres.rank}): {', '.join(pres.generators)}",
        f"relations ({pres.relations.nrows}):",
    ]
    for row in pres.relations.rows:
        lines.append(f"  {format_class(DivisorClass(pres, row))} = 0")
    lines.append(f"structure: {pres.structure}")
    _emit("\n".join(lines))
    return EXIT_OK


def cmd_rank(args) -> int:
    pres = _presentation(args)
    out = {
        "g": pres.g,
        "n": pres.n,
        "variant": pres.variant,
        **io.structure_to_json(pres.structure),
    }
    if pres.variant == "stable":
        out["expected_rank"] = expected_rank(pres.pair)
    if args.json:
        _emit(json.dumps(out, indent=2))
    else:
        line = f"{pres.structure.free_rank}"
        if pres.structure.invariant_factors:
            line += f" (torsion {' x '.join(f'Z/{d}' for d in pres.structure.invariant_factors)})"
        if "expected_rank" in out:
            line += f"  [closed form: {out['expected_rank']}]"
        _emit(line)
    return EXIT_OK


def cmd_reduce(args) -> int:
    pres = _presentation(args)
    c = parse_class(pres, args.expr)
    text = format_class(reduce_class(pres, c))
    if args.json:
        _emit(json.dumps({"expr": args.expr, "reduced": text}))
    else:
        _emit(text)
    return EXIT_OK


def cmd_equal(args) -> int:
    pres = _presentation(args)
    same = classes_equal(pres, parse_class(pres, args.expr1), parse_class(pres, args.expr2))
    _emit(json.dumps({"equal": same}) if args.json else ("true" if same else "false"))
    return EXIT_OK if same else EXIT_FALSE


def cmd_clgroup(args) -> int:
    pres = _presentation(args, "stable")
    res = cl_subgroup(pres)
    doc = io.cl_result_to_json(res)
    if args.json:
        _emit(io.dumps(doc))
    else:
        lines = [
            f"Cl of the coarse space for g={pres.g}, n={pres.n} ({res.method})",
            "generators: " + ", ".join(res.generators),
            f"Pic / Cl = {res.quotient}",
        ]
        if res.warning:
            lines.append(f"warning: {res.warning}")
        _emit("\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_sweep(args.gmax, args.nmax, args.jobs, corrupt=args.corrupt_relations)
    if args.json:
        doc = {
            "gmax": report.gmax,
            "nmax": report.nmax,
            "pairs_checked": len(report.pairs),
            "checks": [
                {"check": name, "pairs": total, "passed": passed, "failed": failed}
                for name, total, passed, failed in report.table()
            ],
            "ok": report.ok,
        }
        bad = report.first_failure
        if bad is not None:
            doc["first_failure"] = {
                "g": bad.g, "n": bad.n, "check": bad.check, "expected": bad.expected, "got": bad.got,
            }
        _emit(json.dumps(doc, indent=2))
    else:
        _emit(format_report(report))
    return EXIT_OK if report.ok else EXIT_FALSE


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tautpic",
        description="Presentations of tautological Picard groups of moduli of pointed curves.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--cache-dir", default=None, help=f"presentation cache (default: ${io.CACHE_ENV})")

    pair = argparse.ArgumentParser(add_help=False)
    pair.add_argument("--g", type=int, required=True, help="genus")
    pair.add_argument("--n", type=int, required=True, help="number of markings")

    variant = argparse.ArgumentParser(add_help=False)
    variant.add_argument("--variant", choices=VARIANTS, default="stable")

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("present", parents=[common, pair, variant], help="print a presentation")
    p.set_defaults(func=cmd_present)
    p = sub.add_parser("rank", parents=[common, pair, variant], help="rank and torsion")
    p.set_defaults(func=cmd_rank)
    p = sub.add_parser("reduce", parents=[common, pair, variant], help="reduce a class modulo relations")
    p.add_argument("expr")
    p.set_defaults(func=cmd_reduce)
    p = sub.add_parser("equal", parents=[common, pair, variant], help="test two classes for equality")
    p.add_argument("expr1")
    p.add_argument("expr2")
    p.set_defaults(func=cmd_equal)
    p = sub.add_parser("clgroup", parents=[common, pair], help="class group of the coarse space")
    p.set_defaults(func=cmd_clgroup)
    p = sub.add_parser("verify", parents=[common], help="run the verification sweep")
    p.add_argument("--gmax", type=_nonneg, default=3)
    p.add_argument("--nmax", type=_nonneg, default=4)
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--corrupt-relations", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TautPicError as exc:
        print(f"tautpic: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
