"""Consistency checks of stored coefficients against the Hecke relations."""

from __future__ import annotations

from dataclasses import dataclass, field

from .newform import NewformData, factorize


@dataclass(frozen=True)
class HeckeCheck:
    kind: str  # multiplicative | prime_power | deligne | ramified
    n: int
    detail: str
    passed: bool


@dataclass
class HeckeReport:
    label: str
    cutoff: int
    checks: list[HeckeCheck] = field(default_factory=list)

    @property
    def failures(self) -> list[HeckeCheck]:
        return [c for c in self.checks if not c.passed]

    @property
    def ok(self) -> bool:
        return not self.failures

    def count(self, kind: str) -> int:
        return sum(1 for c in self.checks if c.kind == kind)

    def summary(self) -> str:
        kinds = sorted({c.kind for c in self.checks})
        parts = [f"{k}: {self.count(k)}" for k in kinds]
        return f"{self.label} X={self.cutoff} checks[{', '.join(parts)}] failures={len(self.failures)}"


def _primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i in range(n + 1) if sieve[i]]


def validate_hecke(fm: NewformData) -> HeckeReport:
    """Check multiplicativity, the prime-power recursion, Deligne's bound and ramified values.

    Every identity that can be tested on the stored range is recorded, so the
    report doubles as an audit trail for file-based input.
    """
    X = fm.coeff_cutoff
    if X < 6:
        raise ValueError("validate_hecke needs at least 6 coefficients")
    k, N = fm.weight, fm.level
    a = fm.a
    rep = HeckeReport(fm.label, X)

    # multiplicativity: split off the smallest prime power of every composite n
    for n in range(6, X + 1):
        fac = factorize(n)
        if len(fac) < 2:
            continue
        p = min(fac)
        q = p ** fac[p]
        ok = a(n) == a(q) * a(n // q)
        rep.checks.append(HeckeCheck("multiplicative", n, f"a({n}) = a({q}) a({n // q})", ok))

    for p in _primes_upto(X):
        if N % p == 0:
            # new at p with trivial character: a(p) = -w_p p^{k/2-1}, a(p^e) = a(p)^e
            ok = a(p) * a(p) == p ** (k - 2)
            rep.checks.append(HeckeCheck("ramified", p, f"a({p})^2 = {p}^{k - 2}", ok))
            q = p * p
            while q <= X:
                ok = a(q) == a(q // p) * a(p)
                rep.checks.append(HeckeCheck("prime_power", q, f"a({q}) = a({q // p}) a({p})", ok))
                q *= p
            continue
        bound_sq = 4 * p ** (k - 1)
        ok = fm.sign_of(bound_sq - a(p) * a(p)) >= 0
        rep.checks.append(HeckeCheck("deligne", p, f"|a({p})| <= 2 {p}^(({k}-1)/2)", ok))
        q = p * p
        while q <= X:
            lhs = a(q)
            rhs = a(p) * a(q // p) - p ** (k - 1) * (a(q // (p * p)) if q // (p * p) >= 1 else 0)
            ok = lhs == rhs
            rep.checks.append(
                HeckeCheck("prime_power", q, f"a({q}) = a({p}) a({q // p}) - {p}^{k - 1} a({q // (p * p)})", ok)
            )
            q *= p
    return rep
