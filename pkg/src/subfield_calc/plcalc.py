"""Exact calculus of piecewise polynomials of degree at most two.

Pieces are left-closed and right-open except the last, which is closed.
That convention makes evaluation total for functions with jumps.
"""

from __future__ import annotations

import bisect
import csv
import io
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

from .exactfield import (
    DomainError,
    FieldElement,
    as_field,
    exact_sum,
    format_rational,
    to_decimal,
)

__all__ = [
    "Piece",
    "PiecewisePoly",
    "Supremum",
    "DerivativeMismatch",
    "constant",
    "identity",
    "polyline",
    "pl_eval",
    "pl_integral",
    "pl_sup_dist",
    "pl_max_abs_slope",
    "pl_antiderivative",
    "pl_derivative",
    "pq_derivative_at",
    "to_json",
    "from_json",
    "sample_csv",
]

ZERO = as_field(0)


class DerivativeMismatch(DomainError):
    """One-sided derivatives disagree at a breakpoint."""

    def __init__(self, x, left, right):
        super().__init__(f"derivative undefined at {x}: left {left}, right {right}")
        self.x = x
        self.left = left
        self.right = right


@dataclass(frozen=True)
class Piece:
    start: FieldElement
    end: FieldElement
    c0: FieldElement
    c1: FieldElement = ZERO
    c2: FieldElement = ZERO

    def __post_init__(self):
        for name in ("start", "end", "c0", "c1", "c2"):
            object.__setattr__(self, name, as_field(getattr(self, name)))
        if not self.start < self.end:
            raise DomainError(f"empty piece [{self.start}, {self.end})")

    def at(self, x: FieldElement) -> FieldElement:
        return self.c0 + x * (self.c1 + x * self.c2)

    def slope_at(self, x: FieldElement) -> FieldElement:
        return self.c1 + 2 * self.c2 * x

    def primitive(self, x: FieldElement) -> FieldElement:
        return x * (self.c0 + x * (self.c1 / 2 + x * self.c2 / 3))

    def integral(self, lo: FieldElement, hi: FieldElement) -> FieldElement:
        if self.c2 == 0:
            # trapezoid, exact for linear pieces
            return (hi - lo) * (self.at(lo) + self.at(hi)) / 2
        return self.primitive(hi) - self.primitive(lo)


class PiecewisePoly:
    """Contiguous tiling of ``[a, b]`` by polynomial pieces."""

    def __init__(self, pieces: Sequence[Piece]):
        pieces = tuple(pieces)
        if not pieces:
            raise DomainError("a piecewise polynomial needs at least one piece")
        for left, right in zip(pieces, pieces[1:]):
            if left.end != right.start:
                raise DomainError(f"pieces do not tile: gap or overlap at {left.end}")
        self.pieces = pieces
        self._starts = [p.start for p in pieces]

    @property
    def domain(self) -> tuple[FieldElement, FieldElement]:
        return self.pieces[0].start, self.pieces[-1].end

    @property
    def breakpoints(self) -> list[FieldElement]:
        return self._starts + [self.pieces[-1].end]

    @cached_property
    def is_linear(self) -> bool:
        return all(p.c2 == 0 for p in self.pieces)

    @cached_property
    def jumps(self) -> list[tuple[FieldElement, FieldElement]]:
        """``(x, right - left)`` for every interior breakpoint with a jump."""
        out = []
        for left, right in zip(self.pieces, self.pieces[1:]):
            x = right.start
            h = right.at(x) - left.at(x)
            if h != 0:
                out.append((x, h))
        return out

    @property
    def is_continuous(self) -> bool:
        return not self.jumps

    def locate(self, x) -> int:
        x = as_field(x)
        a, b = self.domain
        if x < a or x > b:
            raise DomainError(f"x = {x} outside domain [{a}, {b}]")
        return max(bisect.bisect_right(self._starts, x) - 1, 0)

    def __call__(self, x) -> FieldElement:
        x = as_field(x)
        return self.pieces[self.locate(x)].at(x)

    def __eq__(self, other):
        if not isinstance(other, PiecewisePoly):
            return NotImplemented
        return self.pieces == other.pieces

    def __hash__(self):
        return hash(self.pieces)

    def __repr__(self):
        a, b = self.domain
        return f"PiecewisePoly({len(self.pieces)} pieces on [{a}, {b}])"

    def __len__(self):
        return len(self.pieces)

    def restrict(self, a, b) -> "PiecewisePoly":
        """The same function on the sub-interval ``[a, b]``."""
        a, b = as_field(a), as_field(b)
        lo, hi = self.domain
        if not (lo <= a < b <= hi):
            raise DomainError(f"[{a}, {b}] is not a sub-interval of [{lo}, {hi}]")
        out = []
        for p in self.pieces:
            s, e = max(p.start, a), min(p.end, b)
            if s < e:
                out.append(Piece(s, e, p.c0, p.c1, p.c2))
        return PiecewisePoly(out)

    def __add__(self, other):
        return _combine(self, other, 1)

    def __sub__(self, other):
        return _combine(self, other, -1)

    def scale(self, k) -> "PiecewisePoly":
        k = as_field(k)
        return PiecewisePoly(
            [Piece(p.start, p.end, k * p.c0, k * p.c1, k * p.c2) for p in self.pieces]
        )


def _merged_cuts(f: PiecewisePoly, g: PiecewisePoly) -> list[FieldElement]:
    if f.domain != g.domain:
        raise DomainError(f"domain mismatch: {f.domain} vs {g.domain}")
    return sorted(set(f.breakpoints) | set(g.breakpoints))


def _combine(f: PiecewisePoly, g: PiecewisePoly, sign: int) -> PiecewisePoly:
    cuts = _merged_cuts(f, g)
    out = []
    for s, e in zip(cuts, cuts[1:]):
        p, q = f.pieces[f.locate(s)], g.pieces[g.locate(s)]
        out.append(Piece(s, e, p.c0 + sign * q.c0, p.c1 + sign * q.c1, p.c2 + sign * q.c2))
    return PiecewisePoly(out)


# -- constructors --------------------------------------------------------


def constant(k, a=0, b=1) -> PiecewisePoly:
    return PiecewisePoly([Piece(a, b, k)])


def identity(a=0, b=1) -> PiecewisePoly:
    return PiecewisePoly([Piece(a, b, 0, 1)])


def polyline(vertices) -> PiecewisePoly:
    """Continuous piecewise-linear function through ``(x, y)`` vertices.

    Consecutive vertices sharing an x-coordinate are collapsed.
    """
    pts = []
    for x, y in vertices:
        x, y = as_field(x), as_field(y)
        if pts and pts[-1][0] == x:
            if pts[-1][1] != y:
                raise DomainError(f"two values at x = {x}")
            continue
        pts.append((x, y))
    if len(pts) < 2:
        raise DomainError("a polyline needs two distinct x-coordinates")
    pieces = []
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        slope = (y1 - y0) / (x1 - x0)
        pieces.append(Piece(x0, x1, y0 - slope * x0, slope))
    return PiecewisePoly(pieces)


# -- operations ----------------------------------------------------------


def pl_eval(f: PiecewisePoly, x) -> FieldElement:
    return f(x)


def pl_integral(f: PiecewisePoly, a=None, b=None) -> FieldElement:
    lo, hi = f.domain
    a = lo if a is None else as_field(a)
    b = hi if b is None else as_field(b)
    if a < lo or b > hi:
        raise DomainError(f"[{a}, {b}] outside domain [{lo}, {hi}]")
    if a > b:
        raise DomainError(f"reversed bounds {a} > {b}")
    parts = []
    for p in f.pieces[f.locate(a):]:
        if p.start >= b:
            break
        s, e = max(p.start, a), min(p.end, b)
        if s < e:
            parts.append(p.integral(s, e))
    return exact_sum(parts)


class Supremum(NamedTuple):
    """``sup |f - g|``; ``at`` is the point where it is reached or approached."""

    value: FieldElement
    attained: bool
    at: FieldElement


def pl_sup_dist(f: PiecewisePoly, g: PiecewisePoly) -> Supremum:
    cuts = _merged_cuts(f, g)
    last = len(cuts) - 2
    best = None
    for i, (s, e) in enumerate(zip(cuts, cuts[1:])):
        p, q = f.pieces[f.locate(s)], g.pieces[g.locate(s)]
        h = Piece(s, e, p.c0 - q.c0, p.c1 - q.c1, p.c2 - q.c2)
        # (value, attained, where); right end is attained only on the closed last piece
        cands = [(abs(h.at(s)), True, s), (abs(h.at(e)), i == last, e)]
        if h.c2 != 0:
            vertex = -h.c1 / (2 * h.c2)
            if s < vertex < e:
                cands.append((abs(h.at(vertex)), True, vertex))
        for c in cands:
            if best is None or c[0] > best[0] or (c[0] == best[0] and c[1] and not best[1]):
                best = c
    return Supremum(*best)


def pl_max_abs_slope(f: PiecewisePoly) -> FieldElement:
    if not f.is_linear:
        raise DomainError("maximum slope is defined for piecewise-linear input only")
    return max(abs(p.c1) for p in f.pieces)


def pl_antiderivative(f: PiecewisePoly, base=None) -> PiecewisePoly:
    """Continuous piecewise-quadratic ``F`` with ``F' = f`` and ``F(base) = 0``."""
    if not f.is_linear:
        raise DomainError("antiderivative requires a piecewise-linear integrand")
    if not f.is_continuous:
        x, h = f.jumps[0]
        raise DomainError(f"antiderivative requires a continuous integrand (jump {h} at {x})")
    lo, _ = f.domain
    base = lo if base is None else as_field(base)
    f.locate(base)
    value = -pl_integral(f, lo, base)
    out = []
    for p in f.pieces:
        c1, c2 = p.c0, p.c1 / 2
        c0 = value - p.start * (c1 + p.start * c2)
        out.append(Piece(p.start, p.end, c0, c1, c2))
        value = value + p.integral(p.start, p.end)
    return PiecewisePoly(out)


def pl_derivative(F: PiecewisePoly) -> PiecewisePoly:
    """Piecewise derivative, taken piece by piece (kinks become jumps)."""
    return PiecewisePoly(
        [Piece(p.start, p.end, p.c1, 2 * p.c2) for p in F.pieces]
    )


def pq_derivative_at(F: PiecewisePoly, x) -> FieldElement:
    x = as_field(x)
    i = F.locate(x)
    piece = F.pieces[i]
    if x == F.domain[1]:
        return piece.slope_at(x)
    right = piece.slope_at(x)
    if i > 0 and x == piece.start:
        left = F.pieces[i - 1].slope_at(x)
        if left != right:
            raise DerivativeMismatch(x, left, right)
    return right


# -- serialization -------------------------------------------------------


def _encode(x: FieldElement):
    return format_rational(x.a) if x.is_rational else x.to_json()


def to_json(f: PiecewisePoly) -> list:
    return [
        {
            "from": _encode(p.start),
            "to": _encode(p.end),
            "c0": _encode(p.c0),
            "c1": _encode(p.c1),
            "c2": _encode(p.c2),
        }
        for p in f.pieces
    ]


def from_json(data) -> PiecewisePoly:
    dec = FieldElement.from_json
    return PiecewisePoly(
        [Piece(dec(p["from"]), dec(p["to"]), dec(p["c0"]), dec(p["c1"]), dec(p["c2"])) for p in data]
    )


def sample_csv(f: PiecewisePoly, resolution: int, places: int = 12) -> str:
    """CSV of ``resolution + 1`` equally spaced samples across the domain."""
    if resolution < 1:
        raise DomainError("resolution must be at least 1")
    a, b = f.domain
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "fx", "x_decimal", "fx_decimal"])
    for j in range(resolution + 1):
        x = a + (b - a) * j / resolution
        y = f(x)
        w.writerow([str(x), str(y), to_decimal(x, places), to_decimal(y, places)])
    return buf.getvalue()
