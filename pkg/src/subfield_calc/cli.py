"""Command-line front end.

Exit status is 0 on success, 2 on usage errors (including unparsable
c-specs and depths beyond ``SUBFIELD_CALC_MAX_DEPTH``) and 1 when a module
rejects its input.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import plcalc, probes, propp, riemann
from .exactfield import (
    CSpecError,
    DigitPrefix,
    DomainError,
    extract_digits,
    format_rational,
    parse_cspec,
    to_decimal,
)
from .render import RenderOptions, render_svg

DEFAULT_MAX_DEPTH = 200


class UsageError(Exception):
    pass


def max_depth() -> int:
    raw = os.environ.get("SUBFIELD_CALC_MAX_DEPTH", str(DEFAULT_MAX_DEPTH))
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"SUBFIELD_CALC_MAX_DEPTH must be an integer, got {raw!r}")


def _depth(n: int) -> int:
    cap = max_depth()
    if n > cap:
        raise UsageError(f"depth {n} exceeds SUBFIELD_CALC_MAX_DEPTH={cap}")
    return n


def _cspec(text: str):
    try:
        return parse_cspec(text)
    except CSpecError as exc:
        raise UsageError(f"bad c-spec {text!r}: {exc}")


def _exact(x) -> str:
    """Exact value as a string: ``p/q`` or a JSON surd."""
    if isinstance(x, Fraction):
        return format_rational(x)
    if x.is_rational:
        return format_rational(x.a)
    return json.dumps(x.to_json(), separators=(",", ":"), sort_keys=True)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _prefix(args) -> DigitPrefix:
    if args.digits is not None:
        try:
            digits = [int(d) for d in args.digits.split(",")]
        except ValueError:
            raise UsageError(f"bad digit list {args.digits!r}")
        return DigitPrefix.from_digits(digits)
    return extract_digits(_cspec(args.c), args.depth + 2)


# -- subcommands ---------------------------------------------------------


def cmd_digits(args) -> str:
    c = _cspec(args.c)
    if args.count > max_depth():
        raise UsageError(f"count {args.count} exceeds SUBFIELD_CALC_MAX_DEPTH")
    p = extract_digits(c, args.count)
    rows = []
    for k in range(1, len(p) + 1):
        q = p.truncated(k)
        rows.append([k, q.digit(k), format_rational(q.lo), format_rational(q.hi),
                     to_decimal(q.lo, args.places)])
    return _csv(["k", "digit", "lo", "hi", "lo_decimal"], rows)


def cmd_construct(args) -> str:
    N = _depth(args.depth)
    f = propp.truncation(_prefix(args), N, continuous_fill=args.continuous_fill)
    if args.format == "json":
        return json.dumps(plcalc.to_json(f), indent=1) + "\n"
    if args.format == "csv":
        return plcalc.sample_csv(f, args.resolution, args.places)
    opts = RenderOptions(args.width, args.height, args.samples, args.stroke)
    return render_svg(f, opts)


def cmd_integrate(args) -> str:
    rows = propp.convergence_report(_cspec(args.c), _depth(args.depth), args.places)
    out = []
    for r in rows:
        q = r.integral.as_fraction()
        out.append([r.N, q.numerator, q.denominator, r.decimal,
                    to_decimal(r.error, args.places), format_rational(r.error_bound),
                    to_decimal(r.error_bound, args.places)])
    return _csv(["N", "integral_num", "integral_den", "integral_decimal",
                 "error_decimal", "bound", "bound_decimal"], out)


def _points(text: str) -> list[int]:
    try:
        pts = [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"bad point list {text!r}")
    if any(n < 1 for n in pts):
        raise UsageError("point counts must be positive")
    return pts


def cmd_riemann(args) -> str:
    c = propp.require_window_irrational(_cspec(args.c))
    N = _depth(args.depth)
    f = propp.truncation(extract_digits(c, N + 2), N)
    rows = riemann.sum_convergence_table(f, c, _points(args.points), args.places)
    return _csv(
        ["n", "value", "value_decimal", "error_decimal", "certificate"],
        [[r.n, _exact(r.value), r.decimal, to_decimal(r.error, args.places), r.note]
         for r in rows],
    )


def cmd_counterexample(args) -> str:
    c = _cspec(args.c)
    if args.kind == "step":
        rows = probes.step_blowup(c, _depth(args.n))
        return _csv(
            ["n", "x_minus", "x_plus", "quotient"],
            [[r.n, format_rational(r.x_minus), format_rational(r.x_plus),
              format_rational(r.quotient)] for r in rows],
        )
    c = propp.require_window_irrational(c)
    F = probes.step_function(c)
    f = plcalc.constant(0)
    check = probes.evaluation_identity_check(F, f, 0, 1)
    integral = plcalc.pl_integral(f, 0, 1)
    rise = F(1) - F(0)
    verdict = "FTC2 holds" if check.holds else "FTC2 violated"
    return (
        f"step at c = {c} (not in Q)\n"
        f"∫f = {integral}, F(1)−F(0) = {rise}, {verdict}\n"
        f"discrepancy = {check.discrepancy}\n"
    )


def cmd_probe(args) -> str:
    c = propp.require_window_irrational(_cspec(args.c))
    N = _depth(args.depth)
    try:
        delta = Fraction(args.delta)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad delta {args.delta!r}")
    f = propp.truncation(extract_digits(c, N + 2), N, continuous_fill=True)
    F = plcalc.pl_antiderivative(f)
    rep = probes.modulus_scan(F, delta, args.grid)
    bound = probes.derivative_lipschitz(F) * rep.delta
    x, y = rep.worst_pair
    return _csv(
        ["delta", "worst_x", "worst_y", "worst_value", "worst_value_decimal", "bound",
         "within_bound"],
        [[format_rational(rep.delta), _exact(x), _exact(y), _exact(rep.worst_value),
          to_decimal(rep.worst_value, args.places), _exact(bound),
          str(rep.worst_value <= bound).lower()]],
    )


def cmd_demo(args) -> str:
    n = args.points
    s = riemann.rational_fn_right_sum("recip_one_plus_x_sq", n)
    ref = Fraction(riemann.PI_OVER_4_REF)
    return (
        f"n = {n}\n"
        f"right_sum = {format_rational(s) if s.denominator != 1 else s.numerator}\n"
        f"right_sum_decimal = {to_decimal(s, args.places)}\n"
        f"pi_over_4_reference = {riemann.PI_OVER_4_REF}\n"
        f"difference_decimal = {to_decimal(s - ref, args.places)}\n"
    )


# -- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--places", type=int, default=20, help="decimal places (default 20)")

    parser = argparse.ArgumentParser(
        prog="subfield-calc",
        description="Exact P-function constructions, Riemann sums and counterexamples.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("digits", parents=[common], help="base-4 digits of c - 3/8")
    p.add_argument("--c", required=True)
    p.add_argument("--count", type=int, required=True)
    p.set_defaults(run=cmd_digits)

    p = sub.add_parser("construct", parents=[common], help="truncated P-function")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--c")
    src.add_argument("--digits", help="explicit digit prefix, e.g. 0,1,0,2,3")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--continuous-fill", action="store_true")
    p.add_argument("--format", choices=["svg", "csv", "json"], default="svg")
    p.add_argument("--resolution", type=int, default=64, help="CSV sample cells")
    p.add_argument("--width", type=int, default=640)
    p.add_argument("--height", type=int, default=640)
    p.add_argument("--samples", type=int, default=16, help="samples per quadratic piece")
    p.add_argument("--stroke", type=float, default=1.5)
    p.set_defaults(run=cmd_construct)

    p = sub.add_parser("integrate", parents=[common], help="integrals of t_0..t_N")
    p.add_argument("--c", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(run=cmd_integrate)

    p = sub.add_parser("riemann", parents=[common], help="right sums of t_N against c")
    p.add_argument("--c", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--points", required=True, help="comma-separated n values")
    p.set_defaults(run=cmd_riemann)

    p = sub.add_parser("counterexample", parents=[common], help="step / ET counterexamples")
    p.add_argument("kind", choices=["step", "et"])
    p.add_argument("--c", required=True)
    p.add_argument("--n", type=int, default=10)
    p.set_defaults(run=cmd_counterexample)

    p = sub.add_parser("probe", parents=[common], help="uniform-differentiability probes")
    p.add_argument("kind", choices=["modulus"])
    p.add_argument("--c", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--grid", type=int, required=True)
    p.set_defaults(run=cmd_probe)

    p = sub.add_parser("demo", parents=[common], help="right sums of 1/(1+x^2)")
    p.add_argument("kind", choices=["arctan"])
    p.add_argument("--points", type=int, required=True)
    p.set_defaults(run=cmd_demo)
    return parser


@contextlib.contextmanager
def _unlimited_int_digits():
    # exact right sums at large n have numerators far beyond the default
    # int-to-str cap, and the CLI promises exact output
    getter = getattr(sys, "get_int_max_str_digits", None)
    if getter is None:
        yield
        return
    old = getter()
    sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(old)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "places", 1) < 1:
        print("subfield-calc: error: --places must be at least 1", file=sys.stderr)
        return 2
    try:
        with _unlimited_int_digits():
            text = args.run(args)
    except UsageError as exc:
        print(f"subfield-calc: error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"subfield-calc: domain error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
