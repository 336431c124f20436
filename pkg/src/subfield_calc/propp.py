"""The P-function: a continuous map of [0, 1] whose integral is a given c.

On each dyadic square ``[2^-(n+1), 2^-n]^2`` the function runs flat along
the bottom edge, rises with slope 4, then runs flat along the top edge.
Where the rise happens is picked by the base-4 digit ``d_{n+2}`` of
``c - 3/8``, and that placement decides the area under the segment.  The
full function is represented only through its truncations ``t_N``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .exactfield import (
    DigitPrefix,
    DomainError,
    FieldElement,
    as_field,
    extract_digits,
    in_rationals,
    to_decimal,
)
from .plcalc import Piece, PiecewisePoly, pl_integral, polyline

__all__ = [
    "ProppSegment",
    "ConvergenceRow",
    "segment_anchors",
    "segment",
    "segment_integral",
    "truncation",
    "integral_partial",
    "convergence_report",
    "require_window_irrational",
]


def _pow2(n: int) -> Fraction:
    return Fraction(1, 2**n)


def _check_digit(digit: int):
    if digit not in (0, 1, 2, 3):
        raise DomainError(f"digit must lie in 0..3, got {digit}")


@dataclass(frozen=True)
class ProppSegment:
    n: int
    digit: int
    A: tuple[Fraction, Fraction]
    Q: tuple[Fraction, Fraction]
    R: tuple[Fraction, Fraction]
    B: tuple[Fraction, Fraction]

    def vertices(self) -> list[tuple[Fraction, Fraction]]:
        """Anchors in x order with coincident points dropped."""
        out = []
        for p in (self.A, self.Q, self.R, self.B):
            if not out or out[-1] != p:
                out.append(p)
        return out


def segment_anchors(n: int, digit: int) -> ProppSegment:
    _check_digit(digit)
    if n < 0:
        raise DomainError(f"segment index must be non-negative, got {n}")
    lo, hi = _pow2(n + 1), _pow2(n)
    q = (hi * (1 - Fraction(digit + 1, 8)), lo)
    r = (hi * (1 - Fraction(digit, 8)), hi)
    return ProppSegment(n, digit, (lo, lo), q, r, (hi, hi))


def segment(n: int, digit: int) -> PiecewisePoly:
    return polyline(segment_anchors(n, digit).vertices())


def segment_integral(n: int, digit: int) -> Fraction:
    value = (digit + Fraction(1, 2)) * Fraction(1, 4 ** (n + 2)) + Fraction(1, 4 ** (n + 1))
    if pl_integral(segment(n, digit)) != value:
        raise ArithmeticError(f"segment integral mismatch at n={n}, digit={digit}")
    return value


def _need(p: DigitPrefix, N: int):
    if N < 0:
        raise DomainError(f"depth must be non-negative, got {N}")
    if len(p) < N + 2:
        raise DomainError(f"depth {N} needs {N + 2} digits, prefix has {len(p)}")


def truncation(p: DigitPrefix, N: int, continuous_fill: bool = False) -> PiecewisePoly:
    """``t_N``: the P-function on ``[2^-(N+1), 1]``, zero to the left.

    With ``continuous_fill`` the left part is ``y = x`` instead of zero,
    which removes the jump at ``2^-(N+1)``.
    """
    _need(p, N)
    cut = _pow2(N + 1)
    left = Piece(0, cut, 0, 1 if continuous_fill else 0)
    pieces = [left]
    for n in range(N, -1, -1):
        pieces.extend(segment(n, p.digit(n + 2)).pieces)
    return PiecewisePoly(pieces)


def integral_partial(p: DigitPrefix, N: int) -> FieldElement:
    """Exact integral of ``t_N`` over [0, 1]."""
    _need(p, N)
    value = sum(
        (Fraction(p.digit(k), 4**k) for k in range(2, N + 3)), Fraction(0)
    ) + Fraction(3, 8) * (1 - Fraction(1, 4 ** (N + 1)))
    if pl_integral(truncation(p, N)) != value:
        raise ArithmeticError(f"partial integral mismatch at depth {N}")
    return as_field(value)


class ConvergenceRow(NamedTuple):
    N: int
    integral: FieldElement
    error: FieldElement
    error_bound: Fraction
    decimal: str


def require_window_irrational(c) -> FieldElement:
    c = as_field(c)
    if in_rationals(c):
        raise DomainError(f"c = {c} is rational; an irrational surd is required")
    if not (c > Fraction(3, 8) and c < Fraction(5, 8)):
        raise DomainError(f"c = {c} is outside (3/8, 5/8)")
    return c


def convergence_report(c, N_max: int, places: int = 20) -> list[ConvergenceRow]:
    c = require_window_irrational(c)
    if N_max < 0:
        raise DomainError(f"depth must be non-negative, got {N_max}")
    p = extract_digits(c, N_max + 2)
    rows = []
    for N in range(N_max + 1):
        integral = integral_partial(p, N)
        bound = Fraction(1, 4 ** (N + 1))
        if abs(integral - c) > bound:
            raise ArithmeticError(f"error exceeds 4^-{N + 1} at depth {N}")
        rows.append(
            ConvergenceRow(
                N,
                integral,
                abs(integral - c),
                bound,
                to_decimal(integral, places),
            )
        )
    return rows
