"""Truncated power series in q with exact integer coefficients.

Multiplication uses Kronecker substitution: both operands are packed into one
big integer with fixed-width slots, multiplied once by CPython's bignum code,
and unpacked.  For the few thousand terms needed here this is far faster than
a schoolbook double loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


def _pack(coeffs: Sequence[int], bits: int) -> int:
    width = bits // 8
    pos = bytearray(width * len(coeffs))
    neg = bytearray(width * len(coeffs))
    for i, c in enumerate(coeffs):
        if c > 0:
            pos[i * width : (i + 1) * width] = c.to_bytes(width, "little")
        elif c < 0:
            neg[i * width : (i + 1) * width] = (-c).to_bytes(width, "little")
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _unpack(value: int, count: int, bits: int) -> list[int]:
    # Signed digits: add the bias 2^(bits-1) to every slot so each becomes
    # nonnegative, read the slots, then subtract the bias again.
    half = 1 << (bits - 1)
    bias = 0
    if count:
        bias = half * (((1 << (bits * count)) - 1) // ((1 << bits) - 1))
    shifted = value + bias
    width = bits // 8
    if shifted < 0:
        raise ArithmeticError("Kronecker unpack underflow")
    raw = shifted.to_bytes(width * count + 1, "little")
    out = []
    for i in range(count):
        out.append(int.from_bytes(raw[i * width : (i + 1) * width], "little") - half)
    return out


def kronecker_multiply(a: Sequence[int], b: Sequence[int], order: int) -> list[int]:
    """Product of two integer coefficient lists truncated to indices ``0..order``."""
    a = list(a[: order + 1])
    b = list(b[: order + 1])
    if not a or not b:
        return [0] * (order + 1)
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if ma == 0 or mb == 0:
        return [0] * (order + 1)
    bound = ma * mb * min(len(a), len(b))
    bits = bound.bit_length() + 2
    bits = (bits + 7) // 8 * 8
    prod = _pack(a, bits) * _pack(b, bits)
    full = len(a) + len(b) - 1
    out = _unpack(prod, full, bits)[: order + 1]
    out.extend([0] * (order + 1 - len(out)))
    return out


@dataclass(frozen=True)
class IntegerSeries:
    """``sum_{n<=order} c_n q^n`` with exact integer ``c_n``."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("series needs at least the constant term")
        for c in self.coeffs:
            if not isinstance(c, int):
                raise TypeError(f"coefficient {c!r} is not an integer")

    @classmethod
    def from_list(cls, coeffs: Iterable[int]) -> "IntegerSeries":
        return cls(tuple(int(c) for c in coeffs))

    @classmethod
    def one(cls, order: int) -> "IntegerSeries":
        return cls((1,) + (0,) * order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def truncate(self, order: int) -> "IntegerSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return IntegerSeries(self.coeffs[: order + 1])

    def _common(self, other: "IntegerSeries") -> int:
        return min(self.order, other.order)

    def __add__(self, other: "IntegerSeries") -> "IntegerSeries":
        n = self._common(other)
        return IntegerSeries(tuple(self.coeffs[i] + other.coeffs[i] for i in range(n + 1)))

    def __sub__(self, other: "IntegerSeries") -> "IntegerSeries":
        n = self._common(other)
        return IntegerSeries(tuple(self.coeffs[i] - other.coeffs[i] for i in range(n + 1)))

    def __neg__(self) -> "IntegerSeries":
        return IntegerSeries(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return IntegerSeries(tuple(other * c for c in self.coeffs))
        if not isinstance(other, IntegerSeries):
            return NotImplemented
        n = self._common(other)
        return IntegerSeries(tuple(kronecker_multiply(self.coeffs, other.coeffs, n)))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "IntegerSeries":
        if e < 0:
            raise ValueError("negative powers are not supported")
        result = IntegerSeries.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def exact_div(self, d: int) -> "IntegerSeries":
        """Divide every coefficient by ``d``; a nonzero remainder is an error."""
        if d == 0:
            raise ZeroDivisionError("division of a series by zero")
        out = []
        for n, c in enumerate(self.coeffs):
            q, r = divmod(c, d)
            if r:
                raise ArithmeticError(f"coefficient of q^{n} is not divisible by {d}")
            out.append(q)
        return IntegerSeries(tuple(out))

    def shift(self, s: int) -> "IntegerSeries":
        """Multiply by ``q^s`` keeping the same order."""
        if s < 0:
            raise ValueError("negative shift")
        return IntegerSeries(((0,) * s + self.coeffs)[: self.order + 1])

    def dilate(self, d: int) -> "IntegerSeries":
        """Substitute ``q -> q^d`` keeping the same order."""
        out = [0] * (self.order + 1)
        for n in range(0, self.order // d + 1):
            out[n * d] = self.coeffs[n]
        return IntegerSeries(tuple(out))


def divisor_sigma_table(power: int, limit: int) -> list[int]:
    """``sigma_power(n)`` for ``0 <= n <= limit`` (entry 0 is 0)."""
    out = [0] * (limit + 1)
    for d in range(1, limit + 1):
        dp = d**power
        for q in range(d, limit + 1, d):
            out[q] += dp
    return out


_EISENSTEIN_CONSTANTS = {4: 240, 6: -504}


def eisenstein_series(weight: int, cutoff: int) -> IntegerSeries:
    """Normalised level-1 Eisenstein series ``E_4`` or ``E_6`` up to ``q^cutoff``."""
    if weight not in _EISENSTEIN_CONSTANTS:
        raise ValueError(f"unsupported Eisenstein weight {weight}; only 4 and 6 are available")
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    c = _EISENSTEIN_CONSTANTS[weight]
    sig = divisor_sigma_table(weight - 1, cutoff)
    return IntegerSeries((1,) + tuple(c * sig[n] for n in range(1, cutoff + 1)))


def euler_product(exponents: dict[int, int], cutoff: int) -> IntegerSeries:
    """``prod_d prod_{n>=1} (1 - q^{dn})^{e_d}`` up to ``q^cutoff``.

    Only nonnegative exponents are supported; used to build eta quotients that
    happen to be eta products.
    """
    series = IntegerSeries.one(cutoff)
    for d, e in exponents.items():
        if e < 0:
            raise ValueError("only eta products are supported")
        base = [1] + [0] * cutoff
        # prod_n (1 - q^n) by Euler's pentagonal theorem, then dilate by d.
        k = 1
        while True:
            placed = False
            for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
                if g <= cutoff:
                    base[g] += -1 if k % 2 else 1
                    placed = True
            if not placed:
                break
            k += 1
        series = series * (IntegerSeries(tuple(base)).dilate(d) ** e)
    return series
