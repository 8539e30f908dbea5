"""Satake parameters and the Dirichlet coefficients of the symmetric-power Euler product."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import mpmath

from ..formsrc import NewformData, QuadraticElement
from .divisors import divisor_power_upto
from .sieve import prime_power_split, primes_upto, smallest_prime_factor

GUARD_BITS = 24


class DeligneBoundError(ValueError):
    pass


@dataclass(frozen=True)
class SatakeParams:
    p: int
    alpha: mpmath.mpc
    beta: mpmath.mpc
    ramified: bool


def _deligne_violated(a_p, p: int, k: int) -> bool:
    if isinstance(a_p, int):
        return a_p * a_p > 4 * p ** (k - 1)
    if isinstance(a_p, QuadraticElement):
        return (4 * p ** (k - 1) - a_p * a_p).sign() < 0
    # floats/mpf from an embedding: allow for a few ulps of rounding
    slack = 1 + mpmath.ldexp(1, -mpmath.mp.prec + 8)
    return mpmath.mpf(a_p) ** 2 > 4 * mpmath.mpf(p) ** (k - 1) * slack


def satake(a_p, p: int, k: int, ramified: bool) -> SatakeParams:
    """Roots of ``X^2 - a_p X + p^{k-1}``; ``(a_p, 0)`` at a ramified prime.

    The root with nonnegative imaginary part is ``alpha`` (larger real part on a
    tie).  Uses the current mpmath precision.
    """
    if ramified:
        return SatakeParams(p, mpmath.mpc(a_p), mpmath.mpc(0), True)
    if _deligne_violated(a_p, p, k):
        raise DeligneBoundError(f"|a({p})| exceeds 2*{p}^(({k}-1)/2)")
    a = mpmath.mpf(a_p) if not isinstance(a_p, QuadraticElement) else a_p.embed(1)
    disc = 4 * mpmath.mpf(p) ** (k - 1) - a * a
    if disc < 0:
        disc = mpmath.mpf(0)  # within rounding of the Deligne edge
    im = mpmath.sqrt(disc) / 2
    return SatakeParams(p, mpmath.mpc(a / 2, im), mpmath.mpc(a / 2, -im), False)


def _monomials(sp: SatakeParams, m: int, normalized: bool, k: int | None):
    alpha, beta = sp.alpha, sp.beta
    if normalized:
        scale = mpmath.sqrt(mpmath.mpf(sp.p)) ** (k - 1)
        alpha, beta = alpha / scale, beta / scale
    return [alpha ** (m - i) * beta**i for i in range(m + 1)]


def local_factor_coeffs(
    sp: SatakeParams, m: int, depth: int, normalized: bool = False, k: int | None = None
) -> list:
    """Coefficients ``c_0..c_depth`` of ``prod_i (1 - alpha^{m-i} beta^i T)^{-1}``.

    With ``normalized=True`` (requires ``k``) the coefficients are divided by
    ``p^{j m (k-1)/2}``, i.e. this returns ``lambda_m(p^j)``.  Output entries are
    mpc; the caller decides how to treat the (vanishing) imaginary parts.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if normalized and k is None:
        raise ValueError("normalized coefficients need the weight k")
    c = [mpmath.mpc(1)] + [mpmath.mpc(0)] * depth
    for x in _monomials(sp, m, normalized, k):
        # multiply by 1/(1 - x T): c_j += x c_{j-1}, ascending j
        for j in range(1, depth + 1):
            c[j] += x * c[j - 1]
    return c


@dataclass(frozen=True)
class SymPowerCoefficients:
    m: int
    k: int
    level: int
    label: str
    lam: tuple  # lam[n] = lambda_m(n) for 1 <= n <= cutoff; lam[0] = 0
    cutoff: int
    precision: int
    max_imag: mpmath.mpf = field(default=mpmath.mpf(0))

    def __getitem__(self, n: int):
        if not 1 <= n <= self.cutoff:
            raise IndexError(f"lambda({n}) outside 1..{self.cutoff}")
        return self.lam[n]

    def fixed_point(self, bits: int) -> list[int]:
        """``round(lambda(n) * 2^bits)`` for all stored n (index 0 is 0)."""
        with mpmath.workprec(max(self.precision, bits + 16)):
            return [0] + [int(mpmath.nint(mpmath.ldexp(v, bits))) for v in self.lam[1:]]

    def truncated(self, X: int) -> "SymPowerCoefficients":
        if X > self.cutoff:
            raise ValueError(f"only {self.cutoff} coefficients stored, {X} requested")
        return SymPowerCoefficients(
            self.m, self.k, self.level, self.label, self.lam[: X + 1], X, self.precision, self.max_imag
        )


class InsufficientCoefficientsError(ValueError):
    pass


def sym_coeffs(fm: NewformData, m: int, X: int, precision: int) -> SymPowerCoefficients:
    """``lambda_m(n) = a_m(n) / n^{m(k-1)/2}`` for ``n <= X`` via multiplicativity."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if X < 1:
        raise ValueError("cutoff must be >= 1")
    if fm.coeff_cutoff < X:
        raise InsufficientCoefficientsError(
            f"{fm.label}: need a(n) for n <= {X} but only {fm.coeff_cutoff} are stored"
        )
    k, N = fm.weight, fm.level
    spf = smallest_prime_factor(X)
    dw = divisor_power_upto(m + 1, X)
    lam = [mpmath.mpf(0)] * (X + 1)
    worst_imag = mpmath.mpf(0)
    with mpmath.workprec(precision + GUARD_BITS):
        local: dict[int, list] = {}
        for p in primes_upto(X):
            depth, q = 0, 1
            while q * p <= X:
                q *= p
                depth += 1
            a_p = fm.a(p)
            if isinstance(a_p, QuadraticElement):
                ap_real = a_p.embed(fm.embedding)
                if N % p:
                    if _deligne_violated(a_p if fm.embedding == 1 else a_p.conjugate(), p, k):
                        raise DeligneBoundError(f"|a({p})| exceeds the Deligne bound")
                sp = satake(ap_real, p, k, ramified=N % p == 0)
            else:
                sp = satake(a_p, p, k, ramified=N % p == 0)
            cs = local_factor_coeffs(sp, m, depth, normalized=True, k=k)
            vals = []
            for j, c in enumerate(cs):
                scale = dw[p**j] if j else 1
                rel = abs(c.imag) / scale
                if rel > worst_imag:
                    worst_imag = rel
                vals.append(c.real)
            local[p] = vals
        lam[1] = mpmath.mpf(1)
        for n in range(2, X + 1):
            q, e, rest = prime_power_split(n, spf)
            v = local[spf[n]][e]
            lam[n] = v if rest == 1 else v * lam[rest]
    tol = mpmath.ldexp(1, -precision + 8)
    if worst_imag > tol:
        raise ArithmeticError(f"imaginary residue {mpmath.nstr(worst_imag, 5)} in local factors exceeds {tol}")
    with mpmath.workprec(precision):
        lam = tuple(+v for v in lam)
    return SymPowerCoefficients(m, k, N, fm.label, lam, X, precision, +worst_imag)


def coefficient_bound_violations(sc: SymPowerCoefficients) -> list[int]:
    """Indices where ``|lambda_m(n)| > d_{m+1}(n)`` beyond rounding."""
    dw = divisor_power_upto(sc.m + 1, sc.cutoff)
    with mpmath.workprec(sc.precision + 16):
        slack = mpmath.ldexp(1, -sc.precision + 8)
        return [n for n in range(1, sc.cutoff + 1) if abs(sc.lam[n]) > dw[n] * (1 + slack)]


def multiplicativity_violations(sc: SymPowerCoefficients, pairs: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    out = []
    with mpmath.workprec(sc.precision + 16):
        slack = mpmath.ldexp(1, -sc.precision + 10)
        for a, b in pairs:
            if a * b > sc.cutoff:
                continue
            lhs, rhs = sc.lam[a * b], sc.lam[a] * sc.lam[b]
            if abs(lhs - rhs) > slack * (1 + abs(rhs)):
                out.append((a, b))
    return out
