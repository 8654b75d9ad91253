"""Command-line front end: classify, alpha, group, verify, batch.

Exit codes: 0 success, 1 usage or parse error, 2 domain error (for example a
curve without CM), 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from .cartan import (
    CMOrder,
    build_normalizer,
    kernel_matrices,
    order_from_disc,
    params_for,
)
from .classify import classify_max_abelian, field_to_text, report_to_dict
from .cmcurves import RationalCurve, twist_factor
from .errors import MaxabError, NotCMError, SingularCurveError, UnsupportedInputError
from .matgroups import abelianization_order, derived_subgroup
from .verify import run_suite

USAGE_ERROR = 1
DOMAIN_ERROR = 2
VERIFY_FAILURE = 3


def _parse_int(text: str, what: str) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise UnsupportedInputError(f"{what} must be a decimal integer: {text!r}")


def _curve(a_str: str, b_str: str) -> RationalCurve:
    return RationalCurve(Fraction(a_str), Fraction(b_str))


def cmd_classify(args: argparse.Namespace) -> int:
    curve = _curve(args.a, args.b)
    report = classify_max_abelian(curve, args.p, args.n)
    if args.format == "json":
        print(json.dumps(report_to_dict(report)))
    else:
        print(f"M = {field_to_text(report)}, degree {report.degree}")
        extra = f"case {report.theorem_case}, order ({report.order.delta_K}, {report.order.f})"
        if report.alpha is not None:
            extra += f", alpha {report.alpha}"
        if report.predicted_index is not None:
            extra += f", predicted index {report.predicted_index}"
        print(extra)
    return 0


def cmd_alpha(args: argparse.Namespace) -> int:
    curve = _curve(args.a, args.b)
    tw = twist_factor(curve)
    if args.format == "json":
        print(
            json.dumps(
                {
                    "alpha": tw.alpha,
                    "d": tw.d,
                    "kind": tw.kind,
                    "base": {"deltaK": tw.base_order.delta_K, "f": tw.base_order.f},
                    "dExact": str(tw.d_exact) if tw.d_exact is not None else None,
                }
            )
        )
    else:
        print(
            f"alpha {tw.alpha}, d {tw.d}, kind {tw.kind}, "
            f"base ({tw.base_order.delta_K}, {tw.base_order.f})"
        )
    return 0


def cmd_group(args: argparse.Namespace) -> int:
    if args.disc is not None:
        order = order_from_disc(args.disc)
    elif args.deltaK is not None:
        order = CMOrder(args.deltaK, args.f)
    else:
        raise UnsupportedInputError("need --disc or --deltaK")
    modulus = args.p**args.n
    params = params_for(order, modulus)
    if args.what == "kernel":
        top = params_for(order, args.p ** (args.n + 1))
        for mat in kernel_matrices(top):
            print(list(mat.entries()))
        return 0
    normalizer = build_normalizer(params)
    if args.what == "order":
        print(normalizer.order)
    elif args.what == "commutator":
        print(derived_subgroup(normalizer).order)
    elif args.what == "abelianization":
        print(abelianization_order(normalizer))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    records, ok = run_suite(args.suite, max_n=args.max_n)
    lines = [json.dumps(r, default=str) for r in records]
    if args.out:
        Path(args.out).write_text("\n".join(lines) + "\n")
    else:
        for line in lines:
            print(line)
    passed = sum(1 for r in records if r.get("pass"))
    print(f"{passed}/{len(records)} checks passed", file=sys.stderr)
    return 0 if ok else VERIFY_FAILURE


def _read_batch(path: Path) -> list[dict]:
    if path.suffix.lower() == ".json":
        rows = json.loads(path.read_text())
        if not isinstance(rows, list):
            raise UnsupportedInputError("JSON batch must be a list of records")
        return [{"line": i + 1, **row} for i, row in enumerate(rows)]
    if path.suffix.lower() == ".csv":
        out = []
        with path.open(newline="") as fh:
            reader = csv.DictReader(fh)
            for i, row in enumerate(reader):
                out.append({"line": i + 2, **row})
        return out
    raise UnsupportedInputError(f"cannot sniff batch format from {path.suffix!r}")


def cmd_batch(args: argparse.Namespace) -> int:
    path = Path(args.infile)
    if not path.exists():
        raise UnsupportedInputError(f"no such file: {path}")
    rows = _read_batch(path)
    parsed = []
    for row in rows:
        try:
            curve = _curve(str(row["A"]), str(row["B"]))
            p = _parse_int(str(row["p"]), "p")
            n = _parse_int(str(row["n"]), "n")
        except (KeyError, ValueError, ZeroDivisionError, MaxabError, ArithmeticError):
            print(f"malformed record at line {row.get('line', '?')}", file=sys.stderr)
            return USAGE_ERROR
        parsed.append((curve, p, n, row.get("line")))

    def work(item):
        curve, p, n, _line = item
        return report_to_dict(classify_max_abelian(curve, p, n))

    try:
        if args.jobs > 1:
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                reports = list(pool.map(work, parsed))
        else:
            reports = [work(item) for item in parsed]
    except NotCMError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return DOMAIN_ERROR
    text = json.dumps(reports, indent=1)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxab",
        description="Maximal abelian subextensions of prime-power division "
        "fields of CM elliptic curves over Q.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify M_E(p^n) for one curve")
    c.add_argument("--a", required=True, help="coefficient A of y^2 = x^3 + Ax + B")
    c.add_argument("--b", required=True, help="coefficient B")
    c.add_argument("--p", required=True, type=int)
    c.add_argument("--n", required=True, type=int)
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_classify)

    a = sub.add_parser("alpha", help="twist factor and alpha invariant")
    a.add_argument("--a", required=True)
    a.add_argument("--b", required=True)
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.set_defaults(func=cmd_alpha)

    g = sub.add_parser("group", help="Cartan normalizer data for an order")
    g.add_argument("--disc", type=int, help="order discriminant delta_K * f^2")
    g.add_argument("--deltaK", type=int, help="fundamental discriminant")
    g.add_argument("--f", type=int, default=1, help="conductor")
    g.add_argument("--p", required=True, type=int)
    g.add_argument("--n", required=True, type=int)
    g.add_argument(
        "--what",
        choices=("order", "commutator", "abelianization", "kernel"),
        default="order",
    )
    g.set_defaults(func=cmd_group)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument(
        "--suite",
        choices=("lemmas", "section4", "theorems", "conjugacy", "all"),
        default="all",
    )
    v.add_argument("--max-n", type=int, default=4, dest="max_n")
    v.add_argument("--out", help="write JSONL records here instead of stdout")
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("batch", help="classify a CSV or JSON file of records")
    b.add_argument("--in", dest="infile", required=True)
    b.add_argument("--out")
    b.add_argument("--jobs", type=int, default=1)
    b.set_defaults(func=cmd_batch)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else USAGE_ERROR
    try:
        return args.func(args)
    except (NotCMError, SingularCurveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_ERROR
    except UnsupportedInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except MaxabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_ERROR


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
