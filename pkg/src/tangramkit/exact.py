"""Exact arithmetic in the ring {a + b*sqrt(2) : a, b rational}.

Every vertex of a tangram piece placed on the 45-degree rotation grid has
coordinates in this ring, so geometric predicates (orientation, overlap,
area) can be decided exactly, with no floating-point tolerance.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Rationalish = Union[int, Fraction]


class ExactCoord:
    """The real number ``a + b*sqrt(2)`` with rational ``a`` and ``b``.

    Closed under addition, subtraction, multiplication and negation.
    Equality and ordering are exact.
    """

    __slots__ = ("a", "b")

    def __init__(self, a: Rationalish = 0, b: Rationalish = 0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "ExactCoord | Rationalish") -> "ExactCoord":
        other = _coerce(other)
        return ExactCoord(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other: "ExactCoord | Rationalish") -> "ExactCoord":
        other = _coerce(other)
        return ExactCoord(self.a - other.a, self.b - other.b)

    def __rsub__(self, other: "ExactCoord | Rationalish") -> "ExactCoord":
        return _coerce(other) - self

    def __mul__(self, other: "ExactCoord | Rationalish") -> "ExactCoord":
        other = _coerce(other)
        # (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2
        return ExactCoord(
            self.a * other.a + 2 * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def __neg__(self) -> "ExactCoord":
        return ExactCoord(-self.a, -self.b)

    # -- comparisons --------------------------------------------------------

    def sign(self) -> int:
        """Exact sign: -1, 0, or 1."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # Opposite signs: compare |a| against |b|*sqrt(2) via squares.
        if a > 0:  # b < 0: positive iff a^2 > 2 b^2
            return 1 if a * a > 2 * b * b else (-1 if a * a < 2 * b * b else 0)
        return -1 if a * a > 2 * b * b else (1 if a * a < 2 * b * b else 0)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExactCoord(other)
        if not isinstance(other, ExactCoord):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __lt__(self, other: "ExactCoord | Rationalish") -> bool:
        return (self - _coerce(other)).sign() < 0

    def __le__(self, other: "ExactCoord | Rationalish") -> bool:
        return (self - _coerce(other)).sign() <= 0

    def __gt__(self, other: "ExactCoord | Rationalish") -> bool:
        return (self - _coerce(other)).sign() > 0

    def __ge__(self, other: "ExactCoord | Rationalish") -> bool:
        return (self - _coerce(other)).sign() >= 0

    # -- conversions --------------------------------------------------------

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * 1.4142135623730951

    def __repr__(self) -> str:
        if self.b == 0:
            return f"ExactCoord({self.a})"
        return f"ExactCoord({self.a}, {self.b})"


SQRT2 = ExactCoord(0, 1)
HALF_SQRT2 = ExactCoord(0, Fraction(1, 2))
ZERO = ExactCoord(0)
ONE = ExactCoord(1)


def _coerce(value: "ExactCoord | Rationalish") -> ExactCoord:
    if isinstance(value, ExactCoord):
        return value
    return ExactCoord(value)


def coord(a: Rationalish = 0, b: Rationalish = 0) -> ExactCoord:
    """Shorthand constructor for ``a + b*sqrt(2)``."""
    return ExactCoord(a, b)
