"""Riemann sums evaluated exactly at rational sample points.

Sample points ``j/n`` are rational and so lie in every subfield of the
reals.  When the limit of such sums is a certified surd, the sums live in
one field while their limit does not.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .exactfield import (
    DomainError,
    FieldElement,
    as_field,
    exact_sum,
    fraction_sum,
    in_rationals,
    to_decimal,
)
from .plcalc import PiecewisePoly

__all__ = [
    "TaggedPartition",
    "SumReport",
    "right_sum",
    "tagged_sum",
    "sum_convergence_table",
    "rational_fn_right_sum",
    "PI_OVER_4_REF",
    "IRRATIONAL_NOTE",
]

# pi/4 to 20 significant digits
PI_OVER_4_REF = "0.78539816339744830962"

IRRATIONAL_NOTE = "target not in Q (surd with nonzero sqrt coefficient)"


@dataclass(frozen=True)
class TaggedPartition:
    cuts: tuple[FieldElement, ...]
    tags: tuple[FieldElement, ...]

    def __post_init__(self):
        cuts = tuple(as_field(c) for c in self.cuts)
        tags = tuple(as_field(t) for t in self.tags)
        object.__setattr__(self, "cuts", cuts)
        object.__setattr__(self, "tags", tags)
        if len(cuts) < 2:
            raise DomainError("a partition needs at least two cuts")
        if len(tags) != len(cuts) - 1:
            raise DomainError(f"{len(cuts) - 1} cells but {len(tags)} tags")
        for i, (lo, hi) in enumerate(zip(cuts, cuts[1:])):
            if not lo < hi:
                raise DomainError(f"cuts must increase strictly (cell {i})")
            if not lo <= tags[i] <= hi:
                raise DomainError(f"tag {tags[i]} outside cell [{lo}, {hi}]")

    @classmethod
    def uniform(cls, a, b, n: int, where: str = "right") -> "TaggedPartition":
        """``n`` equal cells with left, right or midpoint tags."""
        if n < 1:
            raise DomainError("need at least one cell")
        a, b = as_field(a), as_field(b)
        cuts = [a + (b - a) * j / n for j in range(n + 1)]
        if where == "left":
            tags = cuts[:-1]
        elif where == "right":
            tags = cuts[1:]
        elif where == "mid":
            tags = [(lo + hi) / 2 for lo, hi in zip(cuts, cuts[1:])]
        else:
            raise ValueError(f"unknown tag placement {where!r}")
        return cls(tuple(cuts), tuple(tags))


def right_sum(f: PiecewisePoly, n: int) -> FieldElement:
    """``(b-a)/n * sum f(a + j(b-a)/n)`` for ``j = 1..n``."""
    if n < 1:
        raise DomainError("right sum needs n >= 1")
    a, b = f.domain
    width = (b - a) / n
    return width * exact_sum(f(a + width * j) for j in range(1, n + 1))


def tagged_sum(f: PiecewisePoly, P: TaggedPartition) -> FieldElement:
    if (P.cuts[0], P.cuts[-1]) != f.domain:
        raise DomainError(f"partition spans [{P.cuts[0]}, {P.cuts[-1]}], not {f.domain}")
    return exact_sum(
        f(t) * (hi - lo) for t, lo, hi in zip(P.tags, P.cuts, P.cuts[1:])
    )


class SumReport(NamedTuple):
    n: int
    value: FieldElement
    error: FieldElement
    decimal: str
    note: str


def sum_convergence_table(
    f: PiecewisePoly, target, schedule: Sequence[int], places: int = 20
) -> list[SumReport]:
    target = as_field(target)
    schedule = list(schedule)
    if not schedule:
        raise DomainError("empty schedule")
    if any(m >= n for m, n in zip(schedule, schedule[1:])):
        raise DomainError("schedule must be strictly increasing")
    note = "" if in_rationals(target) else IRRATIONAL_NOTE
    rows = []
    for n in schedule:
        value = right_sum(f, n)
        rows.append(SumReport(n, value, abs(value - target), to_decimal(value, places), note))
    return rows


def rational_fn_right_sum(kind: str, n: int) -> Fraction:
    """Exact right sum on [0, 1] of a named rational function."""
    if kind != "recip_one_plus_x_sq":
        raise DomainError(f"unknown function kind {kind!r}")
    if n < 1:
        raise DomainError("right sum needs n >= 1")
    # (1/n) * sum 1/(1 + (j/n)^2) = sum n/(n^2 + j^2)
    nn = n * n
    return fraction_sum(Fraction(n, nn + j * j) for j in range(1, n + 1))
