"""Exact arithmetic in a real quadratic field Q(sqrt D).

Needed because the two-dimensional spaces used for weight-30 tests have Hecke
fields of degree two; every other form has integer coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


@dataclass(frozen=True)
class QuadraticElement:
    """``a + b*sqrt(D)`` with rational ``a, b`` and an integer ``D > 1`` that is not a square."""

    a: Fraction
    b: Fraction
    D: int

    def __post_init__(self):
        object.__setattr__(self, "a", _as_fraction(self.a))
        object.__setattr__(self, "b", _as_fraction(self.b))
        if self.D <= 1 or isqrt(self.D) ** 2 == self.D:
            raise ValueError(f"D={self.D} does not define a real quadratic field")

    def _coerce(self, other) -> "QuadraticElement":
        if isinstance(other, QuadraticElement):
            if other.D != self.D:
                raise ValueError("elements of different quadratic fields")
            return other
        return QuadraticElement(_as_fraction(other), Fraction(0), self.D)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadraticElement(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return QuadraticElement(self.a - o.a, self.b - o.b, self.D)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return QuadraticElement(-self.a, -self.b, self.D)

    def __mul__(self, other):
        o = self._coerce(other)
        return QuadraticElement(self.a * o.a + self.D * self.b * o.b, self.a * o.b + self.b * o.a, self.D)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticElement":
        return QuadraticElement(self.a, -self.b, self.D)

    def inverse(self) -> "QuadraticElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in a quadratic field")
        return QuadraticElement(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        out = QuadraticElement(Fraction(1), Fraction(0), self.D)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.D))

    def norm(self) -> Fraction:
        return self.a * self.a - self.D * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def sign(self, embedding: int = 1) -> int:
        """Exact sign of ``a + embedding*b*sqrt(D)`` as a real number."""
        a, b = self.a, self.b * embedding
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 D
        diff = a * a - b * b * self.D
        if diff == 0:
            return 0
        return sa if diff > 0 else sb

    def embed(self, embedding: int = 1):
        """Real value at the current mpmath precision."""
        return mpmath.mpf(self.a.numerator) / self.a.denominator + embedding * (
            mpmath.mpf(self.b.numerator) / self.b.denominator
        ) * mpmath.sqrt(self.D)

    def is_algebraic_integer(self) -> bool:
        # minimal polynomial x^2 - trace x + norm must have integer coefficients
        return self.trace().denominator == 1 and self.norm().denominator == 1

    def to_json(self) -> list[str]:
        return [str(self.a), str(self.b)]

    @classmethod
    def from_json(cls, pair, D: int) -> "QuadraticElement":
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValueError(f"quadratic coefficient must be a pair, got {pair!r}")
        return cls(Fraction(str(pair[0])), Fraction(str(pair[1])), D)

    def __repr__(self):
        return f"QuadraticElement({self.a} + {self.b}*sqrt({self.D}))"
