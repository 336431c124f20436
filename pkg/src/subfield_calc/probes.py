"""Difference-quotient probes and the step-function counterexamples.

The step sits at a surd ``c`` while every probe point is rational, so
each "which side of c" question is settled by an exact comparison and no
tolerance appears anywhere in this module.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from .exactfield import DomainError, FieldElement, as_field, extract_digits
from .plcalc import (
    Piece,
    PiecewisePoly,
    pl_derivative,
    pl_integral,
    pl_max_abs_slope,
    pq_derivative_at,
)
from .propp import require_window_irrational

__all__ = [
    "BlowupRow",
    "ModulusReport",
    "ETCheck",
    "step_function",
    "difference_quotient",
    "step_blowup",
    "pointwise_zero_derivative_witness",
    "evaluation_identity_check",
    "modulus_scan",
    "derivative_lipschitz",
]


def step_function(c, a=0, b=1, height=1) -> PiecewisePoly:
    """0 on ``[a, c)`` and ``height`` on ``[c, b]``."""
    c = as_field(c)
    return PiecewisePoly([Piece(a, c, 0), Piece(c, b, height)])


def difference_quotient(f: PiecewisePoly, c, x) -> FieldElement:
    c, x = as_field(c), as_field(x)
    if x == c:
        raise DomainError("difference quotient needs x != c")
    return (f(x) - f(c)) / (x - c)


class BlowupRow(NamedTuple):
    n: int
    x_minus: Fraction
    x_plus: Fraction
    quotient: Fraction


def step_blowup(c, n_max: int) -> list[BlowupRow]:
    """Quotients of the step at ``c`` across the width-``4^-n`` digit brackets."""
    c = require_window_irrational(c)
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    f = step_function(c)
    prefix = extract_digits(c, n_max)
    rows = []
    for n in range(1, n_max + 1):
        lo, hi = prefix.truncated(n).lo, prefix.truncated(n).hi
        if not (lo < c < hi):
            raise ArithmeticError(f"bracket [{lo}, {hi}] does not straddle c")
        q = difference_quotient(f, lo, hi).as_fraction()
        rows.append(BlowupRow(n, lo, hi, q))
    return rows


def pointwise_zero_derivative_witness(c, x) -> FieldElement:
    """Radius around ``x`` on which the step at ``c`` is constant.

    Every difference quotient of the step at ``x`` taken inside this radius
    is 0, so its derivative at ``x`` is 0.
    """
    c, x = as_field(c), as_field(x)
    if x == c:
        raise DomainError("x coincides with the step location")
    return abs(x - c)


class ETCheck(NamedTuple):
    holds: bool
    discrepancy: FieldElement


def evaluation_identity_check(F: PiecewisePoly, f: PiecewisePoly, a, b) -> ETCheck:
    """Compare ``F(b) - F(a)`` with the integral of ``f`` over ``[a, b]``."""
    a, b = as_field(a), as_field(b)
    for g in (F, f):
        lo, hi = g.domain
        if a < lo or b > hi or a > b:
            raise DomainError(f"[{a}, {b}] not inside [{lo}, {hi}]")
    gap = F(b) - F(a) - pl_integral(f, a, b)
    return ETCheck(gap == 0, gap)


class ModulusReport(NamedTuple):
    delta: Fraction
    worst_pair: tuple[FieldElement, FieldElement]
    worst_value: FieldElement


def derivative_lipschitz(F: PiecewisePoly) -> FieldElement:
    """Lipschitz constant of ``F'`` for continuous piecewise-quadratic ``F``."""
    return pl_max_abs_slope(pl_derivative(F))


def modulus_scan(F: PiecewisePoly, delta, grid: int) -> ModulusReport:
    """Largest ``|D_y[F](x) - F'(y)|`` over grid pairs with ``0 < |x - y| <= delta``.

    The grid has ``grid`` equal cells, i.e. ``grid + 1`` points.
    """
    delta = Fraction(delta)
    if grid < 2:
        raise DomainError("grid must have at least 2 cells")
    if delta <= 0:
        raise DomainError("delta must be positive")
    if not F.is_continuous:
        raise DomainError("modulus scan needs a continuous function")
    a, b = F.domain
    h = (b - a) / grid
    reach = math.floor(as_field(delta) / h)
    if reach < 1:
        raise DomainError(f"delta {delta} is below the grid spacing {h}")
    xs = [a + h * j for j in range(grid + 1)]
    values = [F(x) for x in xs]
    slopes = [pq_derivative_at(F, x) for x in xs]
    worst = None
    for j in range(grid + 1):
        for k in range(max(0, j - reach), min(grid, j + reach) + 1):
            if k == j:
                continue
            # D_y[F](x) with y = xs[j], x = xs[k]
            dev = abs((values[k] - values[j]) / (xs[k] - xs[j]) - slopes[j])
            if worst is None or dev > worst[0]:
                worst = (dev, (xs[k], xs[j]))
    return ModulusReport(delta, worst[1], worst[0])
