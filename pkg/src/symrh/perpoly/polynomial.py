"""Polynomials with per-coefficient error bounds (index = degree)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import mpmath


def _up(x) -> mpmath.mpf:
    with mpmath.workprec(64):
        return mpmath.mpf(x) * (1 + mpmath.mpf(2) ** -50)


def _ulp_bound(x, prec: int) -> mpmath.mpf:
    with mpmath.workprec(64):
        return abs(mpmath.mpf(abs(x))) * mpmath.ldexp(1, 1 - prec)


class DegreeUncertainError(ArithmeticError):
    pass


@dataclass(frozen=True)
class _PolyBase:
    coeffs: tuple
    bounds: tuple
    precision: int = 128
    name: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("empty coefficient list")
        if len(self.bounds) != len(self.coeffs):
            raise ValueError("one bound per coefficient is required")
        object.__setattr__(self, "coeffs", tuple(self._coerce(c) for c in self.coeffs))
        with mpmath.workprec(64):
            bs = tuple(mpmath.mpf(b) for b in self.bounds)
        if any(b < 0 for b in bs):
            raise ValueError("coefficient bounds must be nonnegative")
        object.__setattr__(self, "bounds", bs)
        if len(self.coeffs) > 1 and not abs(self.coeffs[-1]) > self.bounds[-1]:
            raise DegreeUncertainError(
                f"{self.name or 'polynomial'}: leading coefficient {mpmath.nstr(self.coeffs[-1], 5)} "
                f"is not separated from zero by its bound {mpmath.nstr(self.bounds[-1], 5)}"
            )

    def _coerce(self, c):
        raise NotImplementedError

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __call__(self, z):
        with mpmath.workprec(self.precision + 16):
            acc = mpmath.mpc(0)
            for c in reversed(self.coeffs):
                acc = acc * z + c
            return acc

    def eval_bound(self, radius) -> mpmath.mpf:
        """Bound on the coefficient-error contribution at ``|z| = radius``."""
        with mpmath.workprec(64):
            r = mpmath.mpf(radius)
            acc = mpmath.mpf(0)
            for b in reversed(self.bounds):
                acc = acc * r + b
            return _up(acc)

    def norm1(self) -> mpmath.mpf:
        with mpmath.workprec(64):
            return _up(sum((abs(c) for c in self.coeffs), mpmath.mpf(0)))

    def _new(self, coeffs, bounds, name=None):
        return type(self)(tuple(coeffs), tuple(bounds), self.precision, name or self.name, dict(self.meta))

    def reversed(self, name=None):
        """``z^deg p(1/z)`` as a coefficient list (the constant term may be zero)."""
        return self._new(self.coeffs[::-1], self.bounds[::-1], name)

    def shift(self, k: int, name=None):
        """``z^k p(z)``."""
        if k < 0:
            raise ValueError("shift must be nonnegative")
        zero = self._coerce(0)
        return self._new((zero,) * k + self.coeffs, (0,) * k + self.bounds, name)

    def scaled(self, c, name=None):
        with mpmath.workprec(self.precision + 16):
            coeffs = [c * x for x in self.coeffs]
        with mpmath.workprec(64):
            ac = abs(mpmath.mpmathify(c))
            bounds = [_up(ac * b) + _ulp_bound(x, self.precision + 16) for b, x in zip(self.bounds, coeffs)]
        return self._new(coeffs, bounds, name)

    def _combine(self, other, sign: int):
        n = max(len(self), len(other))
        zero = self._coerce(0)
        a = list(self.coeffs) + [zero] * (n - len(self))
        b = list(other.coeffs) + [zero] * (n - len(other))
        ba = list(self.bounds) + [0] * (n - len(self))
        bb = list(other.bounds) + [0] * (n - len(other))
        prec = max(self.precision, other.precision)
        with mpmath.workprec(prec + 16):
            out = [x + sign * y for x, y in zip(a, b)]
        bounds = [_up(p + q) + _ulp_bound(x, prec + 16) for p, q, x in zip(ba, bb, out)]
        return out, bounds

    def residual(self, other) -> tuple[list, list]:
        """Coefficientwise ``self - other`` and the summed bounds, without a degree check."""
        return self._combine(other, -1)

    def add(self, other, name=None):
        c, b = self._combine(other, 1)
        return _trimmed(type(self), c, b, max(self.precision, other.precision), name or self.name)

    def sub(self, other, name=None):
        c, b = self._combine(other, -1)
        return _trimmed(type(self), c, b, max(self.precision, other.precision), name or self.name)

    def palindrome_violations(self, epsilon: int) -> list[int]:
        """Indices ``j`` with ``|c_j - eps c_{d-j}| > b_j + b_{d-j}``."""
        d = self.degree
        bad = []
        with mpmath.workprec(self.precision + 16):
            for j in range(d + 1):
                diff = abs(self.coeffs[j] - epsilon * self.coeffs[d - j])
                if diff > _up(self.bounds[j] + self.bounds[d - j]) + _ulp_bound(self.coeffs[j], self.precision):
                    bad.append(j)
        return bad

    def to_json(self, digits: int) -> dict:
        return {
            "poly": self.name,
            "params": {k: v for k, v in self.meta.items()},
            "coeffs": [self._fmt(c, digits) for c in self.coeffs],
            "bounds": [mpmath.nstr(b, 6) for b in self.bounds],
        }

    def _fmt(self, c, digits):
        raise NotImplementedError


def _trimmed(cls, coeffs, bounds, prec, name):
    # drop leading coefficients that are provably zero (exactly zero, zero bound)
    while len(coeffs) > 1 and coeffs[-1] == 0 and bounds[-1] == 0:
        coeffs, bounds = coeffs[:-1], bounds[:-1]
    return cls(tuple(coeffs), tuple(bounds), prec, name)


class RealPolynomial(_PolyBase):
    """Real coefficients with nonnegative error bounds; degree must be certain."""

    def _coerce(self, c):
        if isinstance(c, mpmath.mpc) or isinstance(c, complex):
            raise TypeError("RealPolynomial needs real coefficients")
        with mpmath.workprec(self.precision + 16):
            return +mpmath.mpf(c)

    def _fmt(self, c, digits):
        return mpmath.nstr(c, digits, min_fixed=-1, max_fixed=-1)

    def as_floats(self):
        return [float(c) for c in self.coeffs]

    def derivative(self) -> "RealPolynomial":
        if self.degree == 0:
            return self._new([0], [0])
        with mpmath.workprec(self.precision + 16):
            coeffs = [j * self.coeffs[j] for j in range(1, len(self))]
        bounds = [_up(j * self.bounds[j]) for j in range(1, len(self))]
        return self._new(coeffs, bounds)


class ComplexPolynomial(_PolyBase):
    def _coerce(self, c):
        with mpmath.workprec(self.precision + 16):
            return +mpmath.mpc(c)

    def _fmt(self, c, digits):
        return [mpmath.nstr(c.real, digits, min_fixed=-1, max_fixed=-1), mpmath.nstr(c.imag, digits, min_fixed=-1, max_fixed=-1)]


def real_polynomial(coeffs: Sequence, bounds: Sequence | None = None, precision: int = 128, name: str = "") -> RealPolynomial:
    """Convenience constructor; exact inputs get zero bounds."""
    if bounds is None:
        bounds = [0] * len(coeffs)
    return RealPolynomial(tuple(coeffs), tuple(bounds), precision, name)
