"""Divisor-power function d_w and the zeta-power tail majorant."""

from __future__ import annotations

import math
from contextlib import contextmanager
from collections import OrderedDict
from functools import lru_cache

import mpmath
from mpmath import iv

from .._accel import HAVE_NUMBA
from ..kernels import divisor_power_table
from .sieve import prime_power_split, smallest_prime_factor


def divisor_power(w: int, n: int) -> int:
    """Number of ordered ``w``-tuples of positive integers with product ``n``."""
    if w < 1 or n < 1:
        raise ValueError("divisor_power needs w >= 1 and n >= 1")
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out *= math.comb(e + w - 1, w - 1)
        d += 1
    if n > 1:
        out *= w
    return out


def divisor_power_upto(w: int, limit: int) -> list[int]:
    """``[d_w(0)=0, d_w(1), ..., d_w(limit)]`` from the sieve kernel when it is int64-safe."""
    if limit <= 1 << 20 and w <= 12:
        return [int(v) for v in divisor_power_table(w, limit)]
    spf = smallest_prime_factor(limit)
    out = [0, 1] + [0] * (limit - 1)
    for n in range(2, limit + 1):
        q, e, rest = prime_power_split(n, spf)
        out[n] = math.comb(e + w - 1, w - 1) * out[rest]
    return out


# ---------------------------------------------------------------- zeta in iv


@contextmanager
def iv_prec(bits: int):
    """Temporarily set the interval context precision (mpmath.iv has no workprec)."""
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


@lru_cache(maxsize=64)
def _bernoulli_over_factorial(j: int):
    """Exact ``B_{2j} / (2j)!`` as a fraction (numerator, denominator)."""
    b = mpmath.bernfrac(2 * j)
    return b[0], b[1] * math.factorial(2 * j)


def zeta_interval(sigma, wp: int):
    return _zeta_interval_cached(mpmath.mpf(sigma), wp)


@lru_cache(maxsize=256)
def _zeta_interval_cached(sigma, wp: int):
    """Interval enclosure of ``zeta(sigma)`` for real ``sigma > 1`` at ``wp`` bits.

    Euler-Maclaurin with ``M`` explicit terms and ``p - 1`` Bernoulli
    corrections; for real arguments the remainder is smaller than the first
    omitted correction, and twice that is added as an outward radius.
    """
    with iv_prec(wp):
        s = iv.mpf(sigma)
        if not s.a > 1:
            raise ValueError("zeta_interval needs sigma > 1")
        M = max(16, int(wp / 6) + 8)
        p = max(2, int(wp / 5))
        total = iv.mpf(0)
        for n in range(1, M):
            total += iv.exp(-s * iv.log(n))
        Mi = iv.mpf(M)
        logM = iv.log(Mi)
        Ms = iv.exp(-s * logM)  # M^{-s}
        total += Mi * Ms / (s - 1) + Ms / 2
        rising = s  # (s)_{2j-1}
        Mpow = Ms / Mi  # M^{-s-1}
        for j in range(1, p + 1):
            num, den = _bernoulli_over_factorial(j)
            term = iv.mpf(num) / den * rising * Mpow
            if j < p:
                total += term
            else:
                rad = 2 * abs(term).b
                total += iv.mpf([-rad, rad])
            rising = rising * (s + 2 * j - 1) * (s + 2 * j)
            Mpow = Mpow / (Mi * Mi)
        return total


def _working_bits(m: int, sigma: float, X: int) -> int:
    # Cancellation in zeta^{m+1} - partial sum costs about sigma*log2(X) bits.
    # Bucketing X by powers of two keeps the precision fixed across ranges of
    # X, so the outward-rounded bound is monotone in X inside each bucket.
    xr = 1 << max(14, (max(X, 2) - 1).bit_length())
    return 64 + 8 * m + int(math.ceil(max(sigma - 1.0, 0.0) * math.log2(xr))) + int(math.log2(m + 2) * 4)


_PREFIX: "OrderedDict[tuple, tuple]" = OrderedDict()
_PREFIX_SLOTS = 6


def _partial_sum(w: int, sigma, X: int, wp: int):
    """``sum_{n <= X} d_w(n) n^-sigma`` in mpf at ``wp`` bits, as ``(value, error bound)``.

    Each term ``d exp(-sigma log n)`` is off by at most ``(sigma log n + 8) 2^-wp``
    relative (the product ``sigma log n`` feeds its rounding into ``exp``); the
    running sum of positive terms adds ``X 2^-wp`` relative.  A cached prefix is
    extended when a larger ``X`` is asked for the same ``(w, sigma, wp)``.
    """
    key = (w, sigma, wp)
    if X < 1:
        return mpmath.mpf(0), mpmath.mpf(0)
    with mpmath.workprec(wp):
        hit = _PREFIX.get(key)
        if hit is not None and hit[0] >= X:
            _PREFIX.move_to_end(key)
            total = hit[2][X]
        else:
            start, powers, sums = hit if hit is not None else (1, [None, mpmath.mpf(1)], [mpmath.mpf(0), mpmath.mpf(1)])
            powers, sums = list(powers), list(sums)
            spf = smallest_prime_factor(X)
            dw = divisor_power_upto(w, X)
            total = sums[start]
            for n in range(start + 1, X + 1):
                p = spf[n]
                powers.append(mpmath.exp(-sigma * mpmath.log(n)) if p == n else powers[p] * powers[n // p])
                total += dw[n] * powers[n]
                sums.append(total)
            _PREFIX[key] = (X, powers, sums)
            _PREFIX.move_to_end(key)
            while len(_PREFIX) > _PREFIX_SLOTS:
                _PREFIX.popitem(last=False)
    with mpmath.workprec(64):
        # composites are products of up to log2(X) prime powers: count those roundings too
        per_term = (abs(sigma) * mpmath.log(max(X, 2)) + 8) * (1 + mpmath.log(max(X, 2), 2))
        err = total * (per_term + X + 2) * mpmath.ldexp(1, -wp) * 2
    return total, err


def tail_bound(m: int, k: int, sigma, X: int, wp: int | None = None):
    """Upper bound for ``sum_{n > X} d_{m+1}(n) n^{-sigma}``.

    Evaluated as ``zeta(sigma)^(m+1) - sum_{n <= X} d_{m+1}(n) n^{-sigma}`` in
    interval arithmetic; the upper endpoint is returned as an mpf.  ``k`` is
    accepted for signature symmetry with the other bound checkers and does not
    enter.
    """
    del k
    if m < 0:
        raise ValueError("m must be >= 0")
    sig_f = float(sigma)
    if not sig_f > 1.0:
        raise ValueError("tail_bound needs sigma > 1 (no absolute convergence otherwise)")
    if X < 0:
        raise ValueError("X must be >= 0")
    if wp is None:
        wp = _working_bits(m, sig_f, X)
    w = m + 1
    z = zeta_interval(sigma, wp)
    with iv_prec(wp):
        full = z ** w
        partial, perr = _partial_sum(w, mpmath.mpf(sigma), X, wp)
        diff = full - iv.mpf(partial) + iv.mpf(perr)
        upper = diff.b
    out = mpmath.mpf(upper)
    return out if out > 0 else mpmath.mpf(0)


__all__ = ["divisor_power", "divisor_power_upto", "tail_bound", "zeta_interval", "HAVE_NUMBA"]
