"""Gamma factors of symmetric-power L-functions and the bounds used around them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import mpmath

POLE_TOLERANCE = mpmath.mpf("1e-6")
_LOG_2PI = math.log(2 * math.pi)
_LOG_PI = math.log(math.pi)


class GammaPoleError(ValueError):
    pass


@dataclass(frozen=True)
class GammaFactorSpec:
    """``gamma_m(s) = (2 pi)^{-r s} prod_{j<r} Gamma(s - j(k-1))`` times, for even m,
    ``pi^{-s/2} Gamma(s/2 - floor(r(k-1)/2))``."""

    m: int
    k: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.k < 2 or self.k % 2:
            raise ValueError("k must be even and >= 2")

    @property
    def r(self) -> int:
        return (self.m + 1) // 2

    @property
    def parity(self) -> str:
        return "odd" if self.m % 2 else "even"

    @property
    def shifts(self) -> tuple[int, ...]:
        return tuple(j * (self.k - 1) for j in range(self.r))

    @property
    def half_shift(self) -> Optional[int]:
        if self.m % 2:
            return None
        return (self.r * (self.k - 1)) // 2

    @property
    def weight(self) -> int:
        """``W = m(k-1)``; the functional equation is ``s <-> W + 1 - s``."""
        return self.m * (self.k - 1)

    @property
    def center(self):
        return mpmath.mpf(self.weight + 1) / 2

    def rightmost_pole(self, s) -> float:
        """Largest real ``w`` at which ``gamma(s + w)`` has a pole (``s`` real)."""
        s = float(s)
        cands = [sh - s for sh in self.shifts]
        if self.half_shift is not None:
            cands.append(2 * self.half_shift - s)
        return max(cands)

    def arguments(self, z):
        """The Gamma arguments at ``z``: integer-shift terms, then the half term."""
        out = [z - sh for sh in self.shifts]
        if self.half_shift is not None:
            out.append(z / 2 - self.half_shift)
        return out


def _near_pole(arg) -> bool:
    re = mpmath.re(arg)
    if re > POLE_TOLERANCE:
        return False
    n = mpmath.nint(re)
    return abs(arg - n) <= POLE_TOLERANCE


def gamma_factor(spec: GammaFactorSpec, s, prec: Optional[int] = None):
    """``gamma_m(s)`` for real or complex ``s``; real input gives an mpf."""
    with mpmath.workprec(prec or mpmath.mp.prec):
        is_real = not isinstance(s, (complex, mpmath.mpc)) or mpmath.im(s) == 0
        z = mpmath.mpf(mpmath.re(s)) if is_real else mpmath.mpc(s)
        args = spec.arguments(z)
        for i, a in enumerate(args):
            if _near_pole(a):
                if i < spec.r:
                    raise GammaPoleError(f"s={mpmath.nstr(s, 8)} is at a pole of Gamma(s - {spec.shifts[i]})")
                raise GammaPoleError(f"s={mpmath.nstr(s, 8)} is at a pole of Gamma(s/2 - {spec.half_shift})")
        val = (2 * mpmath.pi) ** (-spec.r * z)
        for a in args[: spec.r]:
            val *= mpmath.gamma(a)
        if spec.half_shift is not None:
            val *= mpmath.pi ** (-z / 2) * mpmath.gamma(args[-1])
        return +val


def log_abs_gamma_factor(spec: GammaFactorSpec, x) -> float:
    """``log |gamma_m(x)|`` for real ``x`` right of every pole (double precision planning)."""
    x = float(x)
    out = -spec.r * x * _LOG_2PI
    for sh in spec.shifts:
        out += math.lgamma(x - sh)
    if spec.half_shift is not None:
        out += -x / 2 * _LOG_PI + math.lgamma(x / 2 - spec.half_shift)
    return out


def log_stirling_majorant(a, y) -> float:
    """Upper bound for ``log|Gamma(a + i y)|``, valid for ``a > 0`` and real ``y``.

    From Stirling's formula with the remainder ``|R(z)| <= 1/(6|z|)`` on the
    right half-plane; a relative slack absorbs the double rounding.
    """
    a = float(a)
    y = abs(float(y))
    if a <= 0:
        raise ValueError("majorant needs a positive real part")
    mod = math.hypot(a, y)
    val = _LOG_2PI / 2 + (a - 0.5) * math.log(mod) - a - y * math.atan2(y, a) + 1 / (6 * mod)
    return val + 1e-12 * (1 + abs(val))
