"""Smallest-prime-factor sieve and helpers for multiplicative functions."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=8)
def _spf_array(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if spf[p] == 0:
            spf[p::p] = np.where(spf[p::p] == 0, p, spf[p::p])
    return spf


def smallest_prime_factor(limit: int) -> list[int]:
    """``spf[n]`` for ``n <= limit``; ``spf[0] = spf[1] = 0``."""
    return _spf_array(max(limit, 1)).tolist()


def primes_upto(limit: int) -> list[int]:
    spf = smallest_prime_factor(limit)
    return [n for n in range(2, limit + 1) if spf[n] == n]


def prime_power_split(n: int, spf: list[int]) -> tuple[int, int, int]:
    """Write ``n = p^e * rest`` with ``p = spf[n]`` and ``p`` not dividing ``rest``."""
    p = spf[n]
    q, e = 1, 0
    while n % p == 0:
        n //= p
        q *= p
        e += 1
    return q, e, n
