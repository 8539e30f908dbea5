"""Sampled Rouche inequality ``|A - B| < |B|`` on the unit circle with an inter-sample slack."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np

from ..kernels import horner_circle

MAX_SAMPLES = 2**16


@dataclass(frozen=True)
class RoucheReport:
    samples: int
    margin: mpmath.mpf  # min over samples of |B| - |A - B|
    slack: mpmath.mpf  # Lipschitz allowance between samples
    certified_margin: mpmath.mpf  # margin minus slack and all evaluation errors
    min_B: mpmath.mpf

    @property
    def positive(self) -> bool:
        return self.certified_margin > 0

    @property
    def relative_margin(self) -> mpmath.mpf:
        return self.margin / self.min_B if self.min_B > 0 else mpmath.mpf(0)

    def as_dict(self, digits: int = 8) -> dict:
        f = lambda x: mpmath.nstr(x, digits)  # noqa: E731
        return {
            "samples": self.samples,
            "margin": f(self.margin),
            "slack": f(self.slack),
            "certified_margin": f(self.certified_margin),
            "min_abs_B": f(self.min_B),
            "positive": self.positive,
        }


def _padded(p, n):
    c = [mpmath.mpc(x) for x in p.coeffs] + [mpmath.mpc(0)] * (n - len(p.coeffs))
    b = list(p.bounds) + [mpmath.mpf(0)] * (n - len(p.bounds))
    return c, b


def _to_float(cs, e):
    out = np.empty(len(cs), dtype=np.complex128)
    conv = mpmath.mpf(0)
    for j, c in enumerate(cs):
        v = mpmath.mpc(mpmath.ldexp(c.real, -e), mpmath.ldexp(c.imag, -e))
        f = complex(float(v.real), float(v.imag))
        out[j] = f
        conv += abs(v - f)
    return out, conv


def rouche_margin(A, B, samples: int = 64, *, refine: bool = True, max_samples: int = MAX_SAMPLES,
                  backend: Optional[str] = None) -> RoucheReport:
    """Margin of ``|A(z) - B(z)| < |B(z)|`` over ``samples`` equally spaced points of ``|z| = 1``.

    The certified margin subtracts ``pi / S * (||B'||_1 + ||(A - B)'||_1)``
    (each side is Lipschitz in the angle with that constant) and the float
    and coefficient errors.  With ``refine`` the grid doubles while the raw
    margin is positive but the certified one is not.
    """
    if samples < 64:
        raise ValueError("at least 64 samples are required")
    n = max(len(A.coeffs), len(B.coeffs))
    prec = max(A.precision, B.precision)
    ca, ba = _padded(A, n)
    cb, bb = _padded(B, n)
    with mpmath.workprec(prec + 16):
        cd = [x - y for x, y in zip(ca, cb)]
        top = max(max(abs(c) for c in cb), max(abs(c) for c in cd))
        if top == 0:
            raise ValueError("both B and A - B vanish")
        e = int(mpmath.floor(mpmath.log(top, 2)))
        lip = sum(j * abs(c) for j, c in enumerate(cb)) + sum(j * abs(c) for j, c in enumerate(cd))
        lip = mpmath.ldexp(lip, -e) * (1 + mpmath.ldexp(1, -40))
        fb, convb = _to_float(cb, e)
        fd, convd = _to_float(cd, e)
        static = convb + convd + mpmath.ldexp(sum(bb) * 2 + sum(ba), -e)
        static *= 1 + mpmath.ldexp(1, -40)
        # rounding of the mp differences themselves
        static += mpmath.ldexp(sum(abs(c) for c in cd), -e - prec)
    S = samples
    while True:
        thetas = 2.0 * math.pi * np.arange(S, dtype=np.float64) / S
        vb, eb = horner_circle(fb, thetas, backend=backend)
        vd, ed = horner_circle(fd, thetas, backend=backend)
        absb, absd = np.abs(vb), np.abs(vd)
        raw = absb - absd
        lower = raw - (eb + ed) * (1 + 1e-12) - 4e-16 * (absb + absd)
        i_raw = int(np.argmin(raw))
        i_low = int(np.argmin(lower))
        with mpmath.workprec(64):
            slack = lip * mpmath.pi / S
            cert = mpmath.mpf(float(lower[i_low])) - static - slack
            margin = mpmath.mpf(float(raw[i_raw]))
            minb = mpmath.mpf(float(absb.min()))
        if cert > 0 or margin <= 0 or not refine or S >= max_samples:
            break
        S *= 2
    with mpmath.workprec(64):
        return RoucheReport(
            S,
            mpmath.ldexp(margin, e),
            mpmath.ldexp(slack, e),
            mpmath.ldexp(cert, e),
            mpmath.ldexp(minb, e),
        )
