"""Self-inversive polynomials ``z^(d-n) h(z) + lam z^n conj(h)(1/z)`` built from a disk-rooted ``h``."""

from __future__ import annotations

from typing import Optional, Sequence

import mpmath

from ..perpoly.polynomial import ComplexPolynomial, RealPolynomial
from .disk import certify_in_disk


class PreconditionError(ValueError):
    pass


def _as_poly(h, precision):
    if isinstance(h, (RealPolynomial, ComplexPolynomial)):
        return h
    cs = list(h)
    if all(not isinstance(c, (complex, mpmath.mpc)) for c in cs):
        return RealPolynomial(tuple(cs), (0,) * len(cs), precision, "h")
    return ComplexPolynomial(tuple(cs), (0,) * len(cs), precision, "h")


def roots_in_closed_disk(h, tol_bits: int = 40) -> str:
    """Disk verdict for ``h(rho z)`` with ``rho = 1 + 2^-tol_bits``, i.e. zeros of ``h`` in ``|z| <= 1``."""
    if h.degree == 0:
        return "all-inside"
    with mpmath.workprec(h.precision + 16):
        rho = 1 + mpmath.ldexp(1, -tol_bits)
        cs = [c * rho**j for j, c in enumerate(h.coeffs)]
        bs = [b * rho**j * (1 + mpmath.ldexp(1, -60)) + mpmath.ldexp(abs(c), -h.precision) for j, (b, c) in enumerate(zip(h.bounds, cs))]
    return certify_in_disk(type(h)(tuple(cs), tuple(bs), h.precision, h.name)).verdict


def lalin_smyth_construct(h, d: int, lam=1, *, precision: int = 128, check: bool = True,
                          name: Optional[str] = None):
    """``P(z) = z^(d-n) h(z) + lam z^n conj(h)(1/z)`` with ``n = deg h``.

    Requires every zero of ``h`` in the closed unit disk and ``|lam| = 1``;
    the result satisfies ``c_{d-j} = lam conj(c_j)``.
    """
    h = _as_poly(h, precision)
    n = h.degree
    if d < n:
        raise PreconditionError(f"d = {d} is below deg h = {n}")
    with mpmath.workprec(precision + 16):
        lam = mpmath.mpc(lam)
        if abs(abs(lam) - 1) > 1e-10:
            raise PreconditionError("lambda must be unimodular")
        lam = lam / abs(lam)
    if check:
        v = roots_in_closed_disk(h)
        if v != "all-inside":
            raise PreconditionError(f"zeros of h are not confirmed inside the closed unit disk ({v})")
    with mpmath.workprec(precision + 16):
        out = [mpmath.mpc(0)] * (d + 1)
        bnd = [mpmath.mpf(0)] * (d + 1)
        for j, (a, b) in enumerate(zip(h.coeffs, h.bounds)):
            a = mpmath.mpc(a)
            out[d - n + j] += a
            out[n - j] += lam * mpmath.conj(a)
            bnd[d - n + j] += b
            bnd[n - j] += b
        bnd = [b + mpmath.ldexp(abs(c), 2 - precision) for b, c in zip(bnd, out)]
        real = all(c.imag == 0 for c in out)
    label = name or f"P^lam(d={d})"
    meta = {"d": d, "deg_h": n, "lambda": [mpmath.nstr(lam.real, 17), mpmath.nstr(lam.imag, 17)]}
    if real:
        p = RealPolynomial(tuple(c.real for c in out), tuple(bnd), precision, label)
    else:
        p = ComplexPolynomial(tuple(out), tuple(bnd), precision, label)
    p.meta.update(meta)
    return p


def planted_h(roots: Sequence, lead=1, precision: int = 128):
    """``lead * prod (z - r)`` as a polynomial object (real when the roots close under conjugation)."""
    with mpmath.workprec(precision + 16):
        cs = [mpmath.mpc(lead)]
        for r in roots:
            r = mpmath.mpc(r)
            nxt = [mpmath.mpc(0)] * (len(cs) + 1)
            for j, c in enumerate(cs):
                nxt[j + 1] += c
                nxt[j] -= r * c
            cs = nxt
        scale = sum(abs(c) for c in cs)
        bs = [mpmath.ldexp(scale, 4 - precision) * (len(cs))] * len(cs)
        if all(abs(c.imag) <= bs[0] for c in cs):
            return RealPolynomial(tuple(c.real for c in cs), tuple(bs), precision, "h")
        return ComplexPolynomial(tuple(cs), tuple(bs), precision, "h")
