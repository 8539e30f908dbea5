"""Zeros strictly inside the unit disk: Schur-Cohn reduction in interval arithmetic.

If ``|a_0| < |a_n|`` then ``p`` has all zeros in ``|z| < 1`` exactly when
``(conj(a_n) p(z) - a_0 p*(z)) / z`` does (``p*(z) = z^n conj(p(1/conj z))``);
``|a_0| >= |a_n|`` rules it out since the product of the roots has modulus
``|a_0 / a_n|``.  Coefficients are carried as real/imaginary interval pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import mpmath
from mpmath import iv

from ..symcoef.divisors import iv_prec
from .roots import RootFindingError, RootSet, find_roots


@dataclass(frozen=True)
class DiskResult:
    verdict: str  # all-inside | not-all-inside | indeterminate
    method: str  # schur-cohn | roots | none
    steps: int = 0
    margin: Optional[mpmath.mpf] = None  # 1 - max(|root| + radius) when the roots decided
    roots: Optional[RootSet] = None
    detail: str = ""


def _civ(c, b):
    c = mpmath.mpc(c)
    b = mpmath.mpf(b)
    return (iv.mpf([c.real - b, c.real + b]), iv.mpf([c.imag - b, c.imag + b]))


def _cmul_conj(a, b):
    """``conj(a) * b`` for interval pairs."""
    ar, ai = a
    br, bi = b
    return (ar * br + ai * bi, ar * bi - ai * br)


def _csub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _abs2(a):
    return a[0] ** 2 + a[1] ** 2


def _scale(a, e):
    f = iv.mpf(2) ** e
    return (a[0] * f, a[1] * f)


def schur_cohn(coeffs, bounds, prec: int) -> tuple[str, int, str]:
    """Interval Schur-Cohn recursion; returns (verdict, steps, detail)."""
    with iv_prec(prec):
        a = [_civ(c, b) for c, b in zip(coeffs, bounds)]
        steps = 0
        while len(a) > 1:
            n = len(a) - 1
            lo, hi = _abs2(a[0]), _abs2(a[n])
            if lo.b < hi.a:
                pass
            elif lo.a >= hi.b:
                return "not-all-inside", steps, f"|a0| >= |an| at step {steps}"
            else:
                return "indeterminate", steps, f"|a0| vs |an| undecided at step {steps}"
            an, a0 = a[n], a[0]
            # conj(a_n) a_{j+1} - a_0 conj(a_{n-j-1})
            new = []
            for j in range(n):
                t1 = _cmul_conj(an, a[j + 1])
                t2 = _cmul_conj(a[n - j - 1], a0)
                new.append(_csub(t1, t2))
            # keep exponents bounded: exact power-of-two rescale
            mid = new[-1][0].mid if new[-1][0].mid != 0 else new[-1][1].mid
            if mid != 0:
                e = -int(mpmath.floor(mpmath.log(abs(mpmath.mpf(mid)), 2)))
                new = [_scale(x, e) for x in new]
            a = new
            steps += 1
        return "all-inside", steps, ""


def disk_from_roots(roots: RootSet) -> tuple[str, Optional[mpmath.mpf]]:
    if any(r is None for r in roots.radii):
        outside = any(r is not None and abs(z) - r > 1 for z, r in zip(roots.roots, roots.radii))
        return ("not-all-inside" if outside else "indeterminate"), None
    with mpmath.workprec(roots.precision):
        reach = max((abs(z) + r for z, r in zip(roots.roots, roots.radii)), default=mpmath.mpf(0))
        if reach < 1:
            return "all-inside", 1 - reach
        if any(abs(z) - r > 1 for z, r in zip(roots.roots, roots.radii)):
            return "not-all-inside", 1 - reach
        return "indeterminate", 1 - reach


def certify_in_disk(poly, *, roots: Optional[RootSet] = None, extra_bits: int = 64) -> DiskResult:
    """Verdict on ``all zeros in |z| < 1``; never ``all-inside`` without a strict margin."""
    coeffs = list(poly.coeffs)
    bounds = list(poly.bounds)
    if len(coeffs) == 1:
        return DiskResult("all-inside", "none", detail="constant polynomial")
    prec = poly.precision + extra_bits + 4 * len(coeffs)
    verdict, steps, detail = schur_cohn(coeffs, bounds, prec)
    if verdict != "indeterminate":
        if roots is None and verdict == "all-inside":
            try:
                roots = find_roots(poly)
            except RootFindingError:
                roots = None
        margin = None
        if roots is not None and roots.determinate:
            margin = disk_from_roots(roots)[1]
        return DiskResult(verdict, "schur-cohn", steps, margin, roots, detail)
    if roots is None:
        try:
            roots = find_roots(poly)
        except RootFindingError as exc:
            return DiskResult("indeterminate", "none", steps, None, None, f"{detail}; {exc}")
    v, margin = disk_from_roots(roots)
    return DiskResult(v, "roots", steps, margin, roots, detail)


def disk_certificate(poly, *, name: Optional[str] = None, params: Optional[dict] = None):
    """:func:`certify_in_disk` packaged as a :class:`ZeroCertificate` (roots included when found)."""
    from .certificate import ZeroCertificate

    res = certify_in_disk(poly)
    roots = res.roots
    if roots is None:
        try:
            roots = find_roots(poly)
        except RootFindingError:
            roots = None
    cert = ZeroCertificate(name or poly.name, dict(params or poly.meta), poly.degree,
                           disk_verdict=res.verdict, disk_method=res.method)
    if roots is not None:
        cert.roots, cert.residuals, cert.radii = roots.roots, roots.residuals, roots.radii
        cert.max_circle_deviation = roots.max_circle_deviation
    if res.detail:
        cert.notes.append(res.detail)
    return cert
