"""Independent reference computations used only by the tests.

Each oracle deliberately takes a different route from the library code it
checks: naive products instead of Kronecker multiplication, monomial
enumeration plus explicit Dirichlet convolution instead of geometric-series
recursion and multiplicativity, tuple enumeration instead of binomials, and
closed-form incomplete gamma functions instead of contour quadrature.
"""

from __future__ import annotations

import itertools

import mpmath


def sigma_naive(power: int, n: int) -> int:
    return sum(d**power for d in range(1, n + 1) if n % d == 0)


def delta_product(cutoff: int) -> list[int]:
    """q prod (1 - q^n)^24 by schoolbook multiplication; index = power of q."""
    coeffs = [0] * (cutoff + 1)
    coeffs[0] = 1
    for n in range(1, cutoff + 1):
        for _ in range(24):
            for i in range(cutoff, n - 1, -1):
                coeffs[i] -= coeffs[i - n]
    return [0] + coeffs[:cutoff]


def ordered_factorizations(w: int, n: int) -> int:
    """Count ordered w-tuples with product n by explicit recursion."""
    if w == 1:
        return 1
    return sum(ordered_factorizations(w - 1, n // d) for d in range(1, n + 1) if n % d == 0)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def local_coeffs_monomial(alpha, beta, m: int, depth: int) -> list:
    """h_j of the monomials alpha^{m-i} beta^i by summing over exponent vectors."""
    monos = [alpha ** (m - i) * beta**i for i in range(m + 1)]
    out = []
    for j in range(depth + 1):
        acc = mpmath.mpc(0)
        for exps in _compositions(j, m + 1):
            term = mpmath.mpc(1)
            for x, e in zip(monos, exps):
                if e:
                    term *= x**e
            acc += term
        out.append(acc)
    return out


def sym_coeffs_bruteforce(a_of, k: int, level: int, m: int, X: int) -> list:
    """lambda_m(n), n <= X, by convolving the per-prime series directly.

    ``a_of(p)`` returns a(p) as an mpf.  Satake parameters are normalized to
    the unit circle before forming monomials.
    """
    primes = [p for p in range(2, X + 1) if all(p % q for q in range(2, int(p**0.5) + 1))]
    table = {1: mpmath.mpc(1)}
    for p in primes:
        ap = a_of(p) / mpmath.sqrt(p) ** (k - 1)
        if level % p == 0:
            alpha, beta = mpmath.mpc(ap), mpmath.mpc(0)
        else:
            disc = mpmath.sqrt(mpmath.mpc(ap * ap - 4))
            alpha, beta = (ap + disc) / 2, (ap - disc) / 2
        depth = 0
        while p ** (depth + 1) <= X:
            depth += 1
        loc = local_coeffs_monomial(alpha, beta, m, depth)
        # every key so far is coprime to p: extend in place by p^j
        for n in [n for n in table if n * p <= X]:
            v = table[n]
            q = p
            for j in range(1, depth + 1):
                if n * q > X:
                    break
                table[n * q] = v * loc[j]
                q *= p
    return [mpmath.mpf(0)] + [table[n].real for n in range(1, X + 1)]


def tuples_with_product(w: int, n: int) -> int:
    """Ordered tuples counted by itertools over the divisor list (second oracle)."""
    divs = [d for d in range(1, n + 1) if n % d == 0]
    count = 0
    for t in itertools.product(divs, repeat=w - 1):
        prod = 1
        for d in t:
            prod *= d
        if n % prod == 0:
            count += 1
    return count


def incomplete_gamma_completed(a_coeffs, k: int, level: int, s: int, eps: int, X: int):
    """Completed m=1 value (sqrt N / 2 pi)^s Gamma(s) L(f, s) by the classical split.

    Termwise integration of the Mellin transform of f(iy), split at
    y = 1/sqrt(N), gives with x_n = 2 pi n / sqrt(N)
        sum_n a(n) [ x_n^{-s} Gamma(s, x_n) + eps x_n^{s-k} Gamma(k - s, x_n) ].
    ``a_coeffs[n]`` is the unnormalized a(n).
    """
    rN = mpmath.sqrt(level)
    total = mpmath.mpf(0)
    for n in range(1, X + 1):
        x = 2 * mpmath.pi * n / rN
        total += a_coeffs[n] * (
            x ** (-s) * mpmath.gammainc(s, x) + eps * x ** (-(k - s)) * mpmath.gammainc(k - s, x)
        )
    return total
