"""Exact arithmetic in the quadratic field Q(sqrt5).

A :class:`QuadRat` is a number ``a + b*sqrt(5)`` with rational ``a`` and
``b``.  The field is closed under all four ring operations and division,
and it contains the golden ratio ``PSI = (1 + sqrt5)/2`` together with its
algebraic conjugate ``1 - PSI``; both satisfy ``x**2 = x + 1`` exactly.
All structure-level identities in this package are polynomial in these
constants, so computing with QuadRat removes every tolerance question at
the axiom level.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering

Rational = int | Fraction

_SQRT5_FLOAT = math.sqrt(5.0)


@total_ordering
class QuadRat:
    """Exact element ``a + b*sqrt(5)`` of Q(sqrt5)."""

    __slots__ = ("_a", "_b")

    def __init__(self, a: Rational | str = 0, b: Rational = 0):
        if isinstance(a, str):
            a = Fraction(a)
        if isinstance(b, str):
            b = Fraction(b)
        self._a = Fraction(a)
        self._b = Fraction(b)

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @classmethod
    def from_value(cls, x: QuadRat | Rational) -> QuadRat:
        if isinstance(x, QuadRat):
            return x
        return cls(x, 0)

    def __repr__(self) -> str:
        return f"QuadRat({self._a!s}, {self._b!s})"

    def __str__(self) -> str:
        if self._b == 0:
            return str(self._a)
        if self._a == 0:
            return f"{self._b}*sqrt5"
        sign = "+" if self._b > 0 else "-"
        return f"{self._a}{sign}{abs(self._b)}*sqrt5"

    def __hash__(self) -> int:
        return hash((self._a, self._b))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QuadRat(other)
        if isinstance(other, QuadRat):
            return self._a == other._a and self._b == other._b
        return NotImplemented

    def sign(self) -> int:
        """Exact sign of the real value (-1, 0 or +1)."""
        a, b = self._a, self._b
        if b == 0:
            return -1 if a < 0 else (0 if a == 0 else 1)
        if a == 0:
            return -1 if b < 0 else 1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # Opposite signs: compare a^2 with 5 b^2; the larger magnitude wins.
        diff = a * a - 5 * b * b
        if a > 0:  # b < 0
            return 1 if diff > 0 else (-1 if diff < 0 else 0)
        return -1 if diff > 0 else (1 if diff < 0 else 0)

    def __lt__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QuadRat(other)
        if isinstance(other, QuadRat):
            return (self - other).sign() < 0
        return NotImplemented

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def __add__(self, other: QuadRat | Rational) -> QuadRat:
        other = QuadRat.from_value(other)
        return QuadRat(self._a + other._a, self._b + other._b)

    __radd__ = __add__

    def __neg__(self) -> QuadRat:
        return QuadRat(-self._a, -self._b)

    def __sub__(self, other: QuadRat | Rational) -> QuadRat:
        return self + (-QuadRat.from_value(other))

    def __rsub__(self, other: QuadRat | Rational) -> QuadRat:
        return (-self) + other

    def __mul__(self, other: QuadRat | Rational) -> QuadRat:
        other = QuadRat.from_value(other)
        return QuadRat(
            self._a * other._a + 5 * self._b * other._b,
            self._a * other._b + self._b * other._a,
        )

    __rmul__ = __mul__

    def conjugate(self) -> QuadRat:
        """Galois conjugate ``a - b*sqrt(5)``."""
        return QuadRat(self._a, -self._b)

    def inverse(self) -> QuadRat:
        norm = self._a * self._a - 5 * self._b * self._b
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt5)")
        return QuadRat(self._a / norm, -self._b / norm)

    def __truediv__(self, other: QuadRat | Rational) -> QuadRat:
        return self * QuadRat.from_value(other).inverse()

    def __rtruediv__(self, other: QuadRat | Rational) -> QuadRat:
        return QuadRat.from_value(other) * self.inverse()

    def __pow__(self, n: int) -> QuadRat:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = QuadRat(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __abs__(self) -> QuadRat:
        return -self if self.sign() < 0 else self

    def __float__(self) -> float:
        return float(self._a) + float(self._b) * _SQRT5_FLOAT

    def is_rational(self) -> bool:
        return self._b == 0


PSI = QuadRat(Fraction(1, 2), Fraction(1, 2))
ONE_MINUS_PSI = QuadRat(Fraction(1, 2), Fraction(-1, 2))
SQRT5 = QuadRat(0, 1)

PSI_FLOAT = float(PSI)

_ENTRY_RE = re.compile(
    r"""^\s*
        (?:(?P<r>[+-]?[0-9][0-9/.]*)\s*)?                 # rational part
        (?:(?P<sgn>[+-])?\s*
           (?:(?P<s>[0-9][0-9/.]*)\s*\*\s*)?sqrt5\s*)?    # sqrt5 part
        $""",
    re.VERBOSE,
)


def parse_quadrat(text: str) -> QuadRat:
    """Parse an exact matrix entry such as ``"1/2+1/2*sqrt5"`` or ``"-0.25"``.

    Accepted forms are ``r``, ``r+s*sqrt5``, ``r-s*sqrt5``, ``s*sqrt5`` and
    ``sqrt5`` with ``r``, ``s`` decimal or slashed rationals.
    """
    m = _ENTRY_RE.match(text)
    if m is None or (m.group("r") is None and "sqrt5" not in text):
        raise ValueError(f"cannot parse Q(sqrt5) entry: {text!r}")
    a = Fraction(m.group("r")) if m.group("r") is not None else Fraction(0)
    b = Fraction(0)
    if "sqrt5" in text:
        b = Fraction(m.group("s")) if m.group("s") is not None else Fraction(1)
        if m.group("sgn") == "-":
            b = -b
    return QuadRat(a, b)
