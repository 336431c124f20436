"""Exact arithmetic in Q and in real quadratic fields Q(sqrt(d)).

Every scalar in the package is a :class:`FieldElement`, the number
``a + b*sqrt(d)`` with rational ``a``, ``b``.  Ordering is decided with
rational arithmetic only, so nothing here ever touches a float except
``__float__`` (used for drawing).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

__all__ = [
    "DomainError",
    "RadicandMismatch",
    "CSpecError",
    "Ordering",
    "FieldElement",
    "DigitPrefix",
    "as_field",
    "parse_cspec",
    "field_arith",
    "compare",
    "in_rationals",
    "to_decimal",
    "extract_digits",
    "digits_to_value",
    "exact_sum",
    "fraction_sum",
    "format_rational",
    "parse_rational",
]

# Sentinel radicand carried by purely rational elements.
RATIONAL_RADICAND = 2

WINDOW_LO = Fraction(3, 8)
WINDOW_HI = Fraction(5, 8)


class DomainError(ValueError):
    """An input lies outside an operation's contract."""


class RadicandMismatch(DomainError):
    """Two surds from different quadratic fields were combined."""


class CSpecError(DomainError):
    """Syntax or value error in a c-spec string; ``offset`` is a byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def _split_square(d: int) -> tuple[int, int]:
    """Return ``(s, r)`` with ``d == s*s*r`` and ``r`` squarefree."""
    s, r = 1, d
    k = 2
    while k * k <= r:
        kk = k * k
        while r % kk == 0:
            r //= kk
            s *= k
        k += 1
    return s, r


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


Scalar = Union["FieldElement", int, Fraction]


class FieldElement:
    """The exact real number ``a + b*sqrt(d)``.

    ``d`` is kept squarefree so that equal values have equal
    representations.  Rational elements carry ``b == 0`` and ``d == 2``.
    Instances are immutable.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = RATIONAL_RADICAND):
        a = Fraction(a)
        b = Fraction(b)
        d = int(d)
        if b == 0:
            d = RATIONAL_RADICAND
        else:
            if d <= 0:
                raise DomainError(f"radicand must be a positive integer, got {d}")
            if _is_square(d):
                raise DomainError(f"radicand {d} is a perfect square")
            s, d = _split_square(d)
            b *= s
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, d: int) -> "FieldElement":
        # Trusted constructor: ``d`` already squarefree and non-square.
        self = object.__new__(cls)
        if b == 0:
            d = RATIONAL_RADICAND
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def __reduce__(self):
        return (FieldElement, (self.a, self.b, self.d))

    # -- predicates ------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise DomainError(f"{self} is irrational")
        return self.a

    def sign(self) -> int:
        a, b = self.a, self.b
        sa, sb = _sign(a), _sign(b)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: the larger magnitude wins; a*a != b*b*d since d is non-square
        return sa if a * a > b * b * self.d else sb

    # -- arithmetic ------------------------------------------------------

    def _common(self, other: "FieldElement") -> int:
        if self.b == 0:
            return other.d
        if other.b == 0 or other.d == self.d:
            return self.d
        raise RadicandMismatch(
            f"cannot combine elements of Q(sqrt({self.d})) and Q(sqrt({other.d}))"
        )

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        d = self._common(other)
        return FieldElement._raw(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        d = self._common(other)
        return FieldElement._raw(self.a - other.a, self.b - other.b, d)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        d = self._common(other)
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        if b1 == 0 and b2 == 0:
            return FieldElement._raw(a1 * a2, b1, d)
        return FieldElement._raw(a1 * a2 + b1 * b2 * d, a1 * b2 + a2 * b1, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        d = self._common(other)
        if other.b == 0:
            if other.a == 0:
                raise ZeroDivisionError("division by zero in FieldElement")
            return FieldElement._raw(self.a / other.a, self.b / other.a, d)
        norm = other.a * other.a - other.b * other.b * d
        conj = FieldElement._raw(other.a / norm, -other.b / norm, d)
        return self * conj

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __neg__(self):
        return FieldElement._raw(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def conjugate(self) -> "FieldElement":
        return FieldElement._raw(self.a, -self.b, self.d)

    # -- ordering --------------------------------------------------------

    def _cmp(self, other) -> int:
        y = _coerce(other)
        if y is NotImplemented:
            raise TypeError(f"cannot compare FieldElement with {type(other).__name__}")
        other = y
        if self.b == 0 and other.b == 0:
            return (self.a > other.a) - (self.a < other.a)
        return (self - other).sign()

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self.a == other.a and self.b == other.b and self.d == other.d

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # -- conversions -----------------------------------------------------

    def __floor__(self) -> int:
        if self.b == 0:
            return math.floor(self.a)
        den = math.lcm(self.a.denominator, self.b.denominator)
        A = int(self.a * den)
        B = int(self.b * den)
        root = math.isqrt(B * B * self.d)
        guess = (A + root) // den if B > 0 else (A - root - 1) // den
        # guess is within one of the true floor; settle it exactly
        while self._cmp(guess) < 0:
            guess -= 1
        while self._cmp(guess + 1) >= 0:
            guess += 1
        return guess

    def __ceil__(self) -> int:
        return -math.floor(-self)

    def __trunc__(self) -> int:
        return math.floor(self) if self.sign() >= 0 else math.ceil(self)

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        if self.b == 0:
            return f"FieldElement({self.a!s})"
        return f"FieldElement({self.a!s}, {self.b!s}, {self.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a}+{self.b}*sqrt({self.d})"

    def to_json(self) -> dict:
        return {"a": format_rational(self.a), "b": format_rational(self.b), "d": self.d}

    @classmethod
    def from_json(cls, obj) -> "FieldElement":
        if isinstance(obj, str):
            return cls(parse_rational(obj))
        return cls(parse_rational(obj["a"]), parse_rational(obj["b"]), int(obj["d"]))


def _coerce(x):
    if isinstance(x, FieldElement):
        return x
    if isinstance(x, (int, Fraction, Rational)) and not isinstance(x, bool):
        return FieldElement._raw(Fraction(x), Fraction(0), RATIONAL_RADICAND)
    return NotImplemented


def as_field(x) -> FieldElement:
    """Coerce an int, Fraction or c-spec string to a FieldElement."""
    if isinstance(x, str):
        return parse_cspec(x)
    y = _coerce(x)
    if y is NotImplemented:
        raise TypeError(f"cannot convert {type(x).__name__} to FieldElement")
    return y


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


# -- c-spec parsing ------------------------------------------------------


class _CSpecParser:
    # grammar:  rat ( ('+'|'-') rat '*' 'sqrt' '(' uint ')' )?
    #         | rat '*' 'sqrt' '(' uint ')'
    #           rat  := int | int '/' uint
    #           int  := ['-'|'+'] digits

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def offset(self, pos=None) -> int:
        pos = self.pos if pos is None else pos
        return len(self.text[:pos].encode("utf-8"))

    def fail(self, message, pos=None):
        raise CSpecError(message, self.offset(pos))

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, literal: str):
        self.skip_ws()
        if not self.text.startswith(literal, self.pos):
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            self.fail(f"expected {literal!r}, found {found!r}")
        self.pos += len(literal)

    def uint(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in "0123456789":
            self.pos += 1
        if start == self.pos:
            found = self.text[start] if start < len(self.text) else "end of input"
            self.fail(f"expected digits, found {found!r}", start)
        return int(self.text[start:self.pos])

    def integer(self) -> int:
        sign = 1
        if self.peek() in ("-", "+"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        return sign * self.uint()

    def rational(self) -> Fraction:
        num = self.integer()
        if self.peek() == "/":
            self.pos += 1
            self.skip_ws()
            den_pos = self.pos
            den = self.uint()
            if den == 0:
                self.fail("zero denominator", den_pos)
            return Fraction(num, den)
        return Fraction(num)

    def surd(self) -> tuple[int, int]:
        self.expect("*")
        self.expect("sqrt")
        self.expect("(")
        self.skip_ws()
        rad_pos = self.pos
        d = self.uint()
        self.expect(")")
        return d, rad_pos

    def parse(self) -> FieldElement:
        a = self.rational()
        b, d = Fraction(0), RATIONAL_RADICAND
        op = self.peek()
        if op == "*":
            a, b = Fraction(0), a
            d, rad_pos = self.surd()
        elif op in ("+", "-"):
            self.pos += 1
            b = self.rational()
            if op == "-":
                b = -b
            d, rad_pos = self.surd()
        if self.peek():
            self.fail(f"unexpected {self.text[self.pos]!r}")
        if b == 0:
            d = RATIONAL_RADICAND
        elif d == 0:
            self.fail("radicand must be positive", rad_pos)
        elif _is_square(d):
            self.fail(f"radicand {d} is a perfect square", rad_pos)
        return FieldElement(a, b, d)


def parse_cspec(text: str) -> FieldElement:
    """Parse ``"p/q"`` or ``"p/q + r/s*sqrt(d)"`` into an exact element.

    >>> parse_cspec("0+1/3*sqrt(2)")
    FieldElement(0, 1/3, 2)
    """
    return _CSpecParser(text).parse()


# -- operations ----------------------------------------------------------


def field_arith(x: Scalar, y: Scalar, op: str) -> FieldElement:
    x, y = as_field(x), as_field(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def compare(x: Scalar, y: Scalar) -> Ordering:
    return Ordering(as_field(x)._cmp(as_field(y)))


def in_rationals(x: Scalar) -> bool:
    # d is never a perfect square when b != 0, so b != 0 certifies irrationality
    return as_field(x).b == 0


def to_decimal(x: Scalar, places: int) -> str:
    """Decimal expansion truncated toward zero, with exactly ``places`` digits."""
    if places < 1:
        raise DomainError("places must be at least 1")
    x = as_field(x)
    neg = x.sign() < 0
    scaled = math.floor(abs(x) * 10**places)
    whole, frac = divmod(scaled, 10**places)
    text = f"{whole}.{frac:0{places}d}"
    return "-" + text if neg and scaled else text


@dataclass(frozen=True)
class DigitPrefix:
    """Base-4 digits ``d_1..d_n`` of ``c - 3/8`` with the bracket they pin."""

    digits: tuple[int, ...]
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not self.digits:
            raise DomainError("a digit prefix needs at least one digit")
        if any(d not in (0, 1, 2, 3) for d in self.digits):
            raise DomainError(f"digits must lie in 0..3: {self.digits}")
        if self.digits[0] != 0:
            raise DomainError("first digit must be 0 for c in (3/8, 5/8)")
        lo = WINDOW_LO + sum(Fraction(d, 4**j) for j, d in enumerate(self.digits, 1))
        if self.lo != lo or self.hi != lo + Fraction(1, 4 ** len(self.digits)):
            raise DomainError("bracket does not match digits")

    @classmethod
    def from_digits(cls, digits: Iterable[int]) -> "DigitPrefix":
        digits = tuple(int(d) for d in digits)
        lo = WINDOW_LO + sum(Fraction(d, 4**j) for j, d in enumerate(digits, 1))
        return cls(digits, lo, lo + Fraction(1, 4 ** len(digits)))

    def __len__(self):
        return len(self.digits)

    def digit(self, k: int) -> int:
        """The 1-indexed digit ``d_k``."""
        if not 1 <= k <= len(self.digits):
            raise DomainError(f"digit d_{k} not available (have {len(self.digits)})")
        return self.digits[k - 1]

    def truncated(self, n: int) -> "DigitPrefix":
        return DigitPrefix.from_digits(self.digits[:n])


def extract_digits(c: Scalar, count: int) -> DigitPrefix:
    c = as_field(c)
    if count < 1:
        raise DomainError("count must be at least 1")
    if not (c > WINDOW_LO and c < WINDOW_HI):
        raise DomainError(f"c = {c} is outside (3/8, 5/8)")
    rest = c - WINDOW_LO
    digits = []
    for _ in range(count):
        rest = rest * 4
        d = math.floor(rest)
        digits.append(d)
        rest = rest - d
    return DigitPrefix.from_digits(digits)


def digits_to_value(p: DigitPrefix) -> tuple[Fraction, Fraction]:
    return p.lo, p.hi


# -- summation -----------------------------------------------------------


def fraction_sum(values) -> Fraction:
    """Sum rationals by binary splitting, reducing only once at the end."""
    pairs = [(q.numerator, q.denominator) for q in map(Fraction, values)]
    if not pairs:
        return Fraction(0)
    while len(pairs) > 1:
        merged = []
        for i in range(0, len(pairs) - 1, 2):
            (p1, q1), (p2, q2) = pairs[i], pairs[i + 1]
            if q1 == q2:
                merged.append((p1 + p2, q1))
            else:
                merged.append((p1 * q2 + p2 * q1, q1 * q2))
        if len(pairs) % 2:
            merged.append(pairs[-1])
        pairs = merged
    return Fraction(*pairs[0])


def exact_sum(values) -> FieldElement:
    values = [as_field(v) for v in values]
    d = None
    for v in values:
        if v.b != 0:
            if d is not None and v.d != d:
                raise RadicandMismatch(f"mixed radicands {d} and {v.d} in sum")
            d = v.d
    a = fraction_sum(v.a for v in values)
    b = fraction_sum(v.b for v in values if v.b != 0)
    return FieldElement._raw(a, b, d or RATIONAL_RADICAND)
