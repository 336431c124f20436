import itertools
import random
from fractions import Fraction

import pytest

from subfield_calc.exactfield import (
    DigitPrefix,
    DomainError,
    FieldElement,
    extract_digits,
    to_decimal,
)
from subfield_calc.plcalc import pl_integral, pl_max_abs_slope, pl_sup_dist
from subfield_calc.propp import (
    convergence_report,
    integral_partial,
    segment,
    segment_anchors,
    segment_integral,
    truncation,
)

from oracles import anchors, sup_dist_truncations, t_value, trapezoid

C = FieldElement(0, Fraction(1, 3), 2)
F = Fraction


def vertices(f):
    return [(x, f(x)) for x in f.breakpoints]


def test_segment_examples():
    assert vertices(segment(0, 1)) == [(F(1, 2), F(1, 2)), (F(3, 4), F(1, 2)), (F(7, 8), 1), (1, 1)]
    assert vertices(segment(0, 3)) == [(F(1, 2), F(1, 2)), (F(5, 8), 1), (1, 1)]
    assert vertices(segment(2, 0)) == [(F(1, 8), F(1, 8)), (F(7, 32), F(1, 8)), (F(1, 4), F(1, 4))]


def test_segment_anchor_fields():
    s = segment_anchors(0, 1)
    assert s.Q == (F(3, 4), F(1, 2)) and s.R == (F(7, 8), 1)
    assert s.A == (F(1, 2), F(1, 2)) and s.B == (1, 1)


def test_segment_rejects_bad_digit():
    with pytest.raises(DomainError):
        segment(0, 4)
    with pytest.raises(DomainError):
        segment_integral(1, -1)


@pytest.mark.parametrize("n, digit", list(itertools.product(range(31), range(4))))
def test_segment_stays_in_its_square(n, digit):
    lo, hi = F(1, 2 ** (n + 1)), F(1, 2**n)
    f = segment(n, digit)
    assert f.domain == (lo, hi)
    assert f.is_continuous
    for x, y in vertices(f):
        assert lo <= x <= hi and lo <= y <= hi


def test_segment_integral_examples():
    assert segment_integral(0, 1) == F(11, 32)
    assert segment_integral(0, 0) == F(9, 32)
    assert segment_integral(1, 0) == F(9, 128)


@pytest.mark.parametrize("n, digit", list(itertools.product(range(21), range(4))))
def test_segment_integral_matches_trapezoid(n, digit):
    expected = trapezoid(anchors(n, digit))
    assert segment_integral(n, digit) == expected
    assert pl_integral(segment(n, digit)) == expected


def test_truncation_depth_zero():
    t = truncation(DigitPrefix.from_digits([0, 1]), 0)
    assert len(t.pieces) == 4
    assert t.pieces[0].start == 0 and t.pieces[0].end == F(1, 2)
    assert t.pieces[0].c0 == 0 and t.pieces[0].c1 == 0
    assert t.pieces[1:] == segment(0, 1).pieces
    assert t.jumps == [(F(1, 2), F(1, 2))]


def test_truncation_matches_anchor_oracle():
    p = extract_digits(C, 14)
    t = truncation(p, 12)
    rng = random.Random(1)
    for _ in range(300):
        x = F(rng.randint(0, 10**6), 10**6)
        assert t(x) == t_value(p.digits, 12, x)


def test_truncation_needs_digits():
    with pytest.raises(DomainError):
        truncation(DigitPrefix.from_digits([0, 1, 0]), 2)


def test_continuous_fill_variant():
    p = extract_digits(C, 12)
    t = truncation(p, 10, continuous_fill=True)
    assert t.is_continuous
    assert t(F(1, 2**12)) == F(1, 2**12)
    assert pl_max_abs_slope(t) == 4
    # filling the triangle changes the integral by exactly half a square
    gap = pl_integral(t) - pl_integral(truncation(p, 10))
    assert gap == F(1, 2) * F(1, 4**11)
    assert gap <= F(1, 4 ** 11)


def test_sup_dist_consecutive_truncations():
    p = extract_digits(C, 8)
    assert pl_sup_dist(truncation(p, 3), truncation(p, 4)).value == F(1, 16)


def test_uniform_convergence_rate():
    p = extract_digits(C, 22)
    ts = [truncation(p, N) for N in range(21)]
    for N, M in itertools.combinations(range(0, 21, 2), 2):
        d = pl_sup_dist(ts[N], ts[M]).value
        assert d == sup_dist_truncations(p.digits, N, M)
        assert d <= F(1, 2 ** (min(N, M) + 1))


def test_global_squeeze():
    p = extract_digits(C, 42)
    t = truncation(p, 40)
    for x in t.breakpoints[1:]:
        y = t(x)
        assert x / 2 <= y <= 2 * x


def test_max_slope_is_four_for_every_digit_choice():
    rng = random.Random(9)
    for N in range(41):
        digits = [0] + [rng.randint(0, 3) for _ in range(N + 1)]
        t = truncation(DigitPrefix.from_digits(digits), N)
        assert pl_max_abs_slope(t.restrict(F(1, 2 ** (N + 1)), 1)) == 4


def test_integral_partial_examples():
    p = DigitPrefix.from_digits([0, 1, 0, 2, 3])
    assert integral_partial(p, 3) == F(915, 2048)
    assert to_decimal(integral_partial(p, 3), 6) == "0.446777"
    assert integral_partial(DigitPrefix.from_digits([0, 0]), 0) == segment_integral(0, 0) == F(9, 32)
    assert integral_partial(DigitPrefix.from_digits([0] * 4), 2) == F(3, 8) * (1 - F(1, 64)) == F(189, 512)


def test_integral_partial_oracle_fig3_prefix():
    p = DigitPrefix.from_digits([0, 1, 0, 2, 3])
    oracle = sum((trapezoid(anchors(n, p.digit(n + 2))) for n in range(4)), F(0))
    assert oracle == F(915, 2048)


def test_integral_partial_matches_pl_integral_to_depth_40():
    p = extract_digits(C, 42)
    for N in range(41):
        assert integral_partial(p, N) == pl_integral(truncation(p, N))


def test_convergence_report():
    rows = convergence_report(C, 2)
    assert [r.N for r in rows] == [0, 1, 2]
    for r in rows:
        assert abs(r.integral - C) <= r.error_bound == F(1, 4 ** (r.N + 1))
        assert r.error == abs(r.integral - C)


def test_convergence_report_depth_40_bound_and_monotone():
    rows = convergence_report(C, 40)
    for r in rows:
        assert r.error <= F(1, 4 ** (r.N + 1))
    assert all(b.error < a.error for a, b in zip(rows, rows[1:]))


def test_convergence_report_decimal():
    rows = convergence_report(C, 30, places=15)
    assert rows[-1].decimal == to_decimal(C, 15)


def test_convergence_report_rejects_rational():
    with pytest.raises(DomainError):
        convergence_report(F(7, 16), 3)
    with pytest.raises(DomainError):
        convergence_report(FieldElement(0, 1, 2), 3)
