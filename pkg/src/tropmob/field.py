"""Exact scalars: rationals and elements of a real quadratic field Q(sqrt(D)).

Rationals are plain :class:`fractions.Fraction`.  A :class:`QuadraticNumber`
with zero irrational part is never produced by arithmetic; it collapses to a
``Fraction`` so that equality and hashing stay canonical.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union

__all__ = [
    "QuadraticNumber",
    "Scalar",
    "qnum",
    "sqrt_of",
    "parse_scalar",
    "format_scalar",
    "to_fraction",
]


def _squarefree(d: int) -> bool:
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


class QuadraticNumber:
    """a + b*sqrt(d) with a, b rational, b != 0 and d square-free, d >= 2."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        a, b = Fraction(a), Fraction(b)
        if b == 0:
            raise ValueError("use qnum(); zero irrational part collapses to Fraction")
        if not _squarefree(int(d)):
            raise ValueError(f"sqrt({d}): d must be a square-free integer >= 2")
        self.a, self.b, self.d = a, b, int(d)

    # -- helpers -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if other.d != self.d:
                raise ValueError(f"mixing sqrt({self.d}) and sqrt({other.d})")
            return other.a, other.b
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return qnum(self.a + c[0], self.b + c[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return qnum(self.a - c[0], self.b - c[1], self.d)

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return qnum(c[0] - self.a, c[1] - self.b, self.d)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        a, b = c
        return qnum(self.a * a + self.d * self.b * b, self.a * b + self.b * a, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        a, b = c
        if b == 0:
            if a == 0:
                raise ZeroDivisionError("division by zero")
            return qnum(self.a / a, self.b / a, self.d)
        n = a * a - self.d * b * b
        # (x)(a - b sqrt d) / n
        return qnum((self.a * a - self.d * self.b * b) / n, (self.b * a - self.a * b) / n, self.d)

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        n = self.norm()
        conj = (self.a / n, -self.b / n)
        return qnum(c[0] * conj[0] + self.d * c[1] * conj[1], c[0] * conj[1] + c[1] * conj[0], self.d)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (1 / self) ** (-k)
        result: Scalar = Fraction(1)
        base: Scalar = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QuadraticNumber):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, Fraction)):
            return False  # b != 0 always
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def _sign(self) -> int:
        # sign of a + b sqrt d, exactly
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sa == 0:
            return sb
        # opposite signs: compare a^2 with d b^2
        return sa if self.a * self.a > self.d * self.b * self.b else sb

    def __lt__(self, other):
        return _sign(self - other) < 0

    def __le__(self, other):
        return _sign(self - other) <= 0

    def __gt__(self, other):
        return _sign(self - other) > 0

    def __ge__(self, other):
        return _sign(self - other) >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __abs__(self):
        return -self if self._sign() < 0 else self

    def __repr__(self):
        return f"QuadraticNumber({self.a}, {self.b}, {self.d})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[Fraction, QuadraticNumber]


def qnum(a, b, d: int) -> Scalar:
    """Canonical constructor: returns a Fraction when the sqrt part vanishes."""
    b = Fraction(b)
    if b == 0:
        return Fraction(a)
    return QuadraticNumber(a, b, d)


def sqrt_of(d: int) -> QuadraticNumber:
    return QuadraticNumber(0, 1, d)


def to_fraction(x) -> Fraction:
    if isinstance(x, QuadraticNumber):
        raise ValueError(f"{x} is irrational")
    return Fraction(x)


def _sign(x) -> int:
    if isinstance(x, QuadraticNumber):
        return x._sign()
    return (x > 0) - (x < 0)


_RAT = r"[+-]?\d+(?:/\d+)?"
_QUAD_RE = re.compile(
    rf"^\s*(?P<a>{_RAT})?\s*(?:(?P<sign>[+-])\s*(?P<b>\d+(?:/\d+)?)\s*\*\s*sqrt\(\s*(?P<d>\d+)\s*\))?\s*$"
)


def parse_scalar(text: str, d: int | None = None) -> Scalar:
    """Parse ``"p/q"`` or ``"p/q+r/s*sqrt(d)"``.

    If ``d`` is given, a sqrt term must use that same radicand.
    """
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    m = _QUAD_RE.match(s)
    if not m or (m.group("a") is None and m.group("b") is None):
        raise ValueError(f"cannot parse scalar {text!r}")
    a = Fraction(m.group("a")) if m.group("a") is not None else Fraction(0)
    if m.group("b") is None:
        return a
    b = Fraction(m.group("b"))
    if m.group("sign") == "-":
        b = -b
    dd = int(m.group("d"))
    if d is not None and dd != d:
        raise ValueError(f"radicand {dd} does not match document field sqrt({d})")
    return qnum(a, b, dd)


def format_scalar(x) -> str:
    if isinstance(x, QuadraticNumber):
        sign = "-" if x.b < 0 else "+"
        return f"{x.a}{sign}{abs(x.b)}*sqrt({x.d})"
    return str(Fraction(x))
