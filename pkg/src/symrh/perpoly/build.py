"""Period polynomial R, its real rotation P (or p), the half polynomial Q (or q) and the comparison polynomials.

With ``W = m(k-1)`` and ``K`` the normaliser (``C`` for odd m, ``c`` for even m)
the real polynomial is

    P(z) = K sum_{n<W} binom(W-1, n) Lambda(W-n) z^n = K i^{-W} N^{W/2} R(z / (i sqrt N)),

and its coefficient of ``z^n`` simplifies to

    (2 pi)^{rn}/n! * prod_{j=1}^{r-1} Gamma((m-j)(k-1)-n)/Gamma((m-j)(k-1)) * N^{-mn/2-1} * L(W-n)

(times ``pi^{n/2} Gamma((W-n)/2 - h0)/Gamma(W/2 - h0)`` for even m).  Replacing
``L`` by 1 in the coefficients of Q gives the comparison polynomial H (h).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional

import mpmath

from ..lvalues import CriticalValueSet
from .polynomial import ComplexPolynomial, RealPolynomial, _up, _ulp_bound

H_VARIANTS = ("exact", "printed")


class DecompositionError(ArithmeticError):
    pass


class ImaginaryResidueError(ArithmeticError):
    pass


def _gamma_int(n: int) -> int:
    if n < 1:
        raise ValueError(f"Gamma({n}) is a pole")
    return math.factorial(n - 1)


def _gamma_ratio_product(m: int, k: int, n: int) -> mpmath.mpf:
    """``prod_{j=1}^{r-1} Gamma((m-j)(k-1) - n) / Gamma((m-j)(k-1))`` as an exact fraction, then rounded."""
    r = (m + 1) // 2
    num, den = 1, 1
    for j in range(1, r):
        a = (m - j) * (k - 1)
        num *= _gamma_int(a - n)
        den *= _gamma_int(a)
    return mpmath.mpf(num) / den


def _half_shift(m: int, k: int) -> int:
    r = (m + 1) // 2
    return (r * (k - 1)) // 2


def normalizer(m: int, k: int, N: int, precision: int = 128) -> mpmath.mpf:
    """``C_{m,f}`` for odd m and ``c_{m,f} = pi^{W/2} Gamma(W/2 - h0)^{-1} C_{m,f}`` for even m."""
    r = (m + 1) // 2
    W = m * (k - 1)
    den = math.factorial(W - 1)
    for j in range(1, r):
        den *= _gamma_int((m - j) * (k - 1))
    with mpmath.workprec(precision + 32):
        C = (2 * mpmath.pi) ** (r * W) / den * mpmath.mpf(N) ** (-mpmath.mpf(m * W) / 2 - 1)
        if m % 2 == 0:
            C = C * mpmath.pi ** (mpmath.mpf(W) / 2) / _gamma_int(W // 2 - _half_shift(m, k))
        return +C


def normalizer_error(precision: int) -> mpmath.mpf:
    """Relative error allowance for :func:`normalizer` (a handful of roundings)."""
    return mpmath.ldexp(1, -(precision + 24))


def _lambda_star(cvs: CriticalValueSet, s: int):
    cv = cvs.at(s)
    return cv.value, cv.budget.total


def build_R(cvs: CriticalValueSet, N: Optional[int] = None) -> ComplexPolynomial:
    """``R(z) = i^W N^{-W/2} sum binom(W-1, n) (sqrt N i z)^n Lambda(W-n)``."""
    N = cvs.level if N is None else N
    W = cvs.weight
    if len(cvs.values) != W:
        raise ValueError(f"need {W} critical values, have {len(cvs.values)}")
    prec = cvs.precision + 16
    coeffs, bounds = [], []
    with mpmath.workprec(prec + 16):
        rN = mpmath.sqrt(N)
        lead = mpmath.mpc(0, 1) ** W * mpmath.mpf(N) ** (-mpmath.mpf(W) / 2)
        for n in range(W):
            if cvs.values[n] is None:
                raise ValueError(f"missing critical value at s={W - n}")
            val, err = _lambda_star(cvs, W - n)
            fac = lead * math.comb(W - 1, n) * (rN * mpmath.mpc(0, 1)) ** n
            c = fac * val
            coeffs.append(c)
            bounds.append(_up(abs(fac) * err) + _ulp_bound(abs(c), prec))
    return ComplexPolynomial(tuple(coeffs), tuple(bounds), prec, "R", _params(cvs))


def _params(cvs: CriticalValueSet) -> dict:
    return {"m": cvs.m, "k": cvs.k, "N": cvs.level, "label": cvs.label, "epsilon": cvs.epsilon}


def build_P(cvs: CriticalValueSet, R: Optional[ComplexPolynomial] = None) -> RealPolynomial:
    """``P(z) = K i^{-W} N^{W/2} R(z/(i sqrt N))`` with real coefficients.

    The factor ``i^{-W} N^{W/2}`` cancels the prefactor of R, so the result is
    real for every parity.  The imaginary residue is checked against the
    bounds and dropped.
    """
    m, k, N, W = cvs.m, cvs.k, cvs.level, cvs.weight
    R = build_R(cvs) if R is None else R
    prec = R.precision
    K = normalizer(m, k, N, prec)
    coeffs, bounds = [], []
    with mpmath.workprec(prec + 16):
        kappa = K * mpmath.mpc(0, 1) ** (-W) * mpmath.mpf(N) ** (mpmath.mpf(W) / 2)
        step = 1 / (mpmath.mpc(0, 1) * mpmath.sqrt(N))
        for n in range(W):
            fac = kappa * step**n
            c = fac * R.coeffs[n]
            b = _up(abs(fac) * R.bounds[n]) + _ulp_bound(abs(c), prec - 4) + _up(abs(c) * normalizer_error(prec))
            if abs(c.imag) > b:
                raise ImaginaryResidueError(
                    f"P coefficient {n}: imaginary part {mpmath.nstr(c.imag, 5)} exceeds bound {mpmath.nstr(b, 5)}"
                )
            coeffs.append(c.real)
            bounds.append(_up(b + abs(c.imag)))
    name = "P" if m % 2 else "p"
    return RealPolynomial(tuple(coeffs), tuple(bounds), prec, name, _params(cvs))


def build_Q(P: RealPolynomial, m: int, k: int) -> RealPolynomial:
    """Half polynomial: odd m gets the halved middle term as constant, even m has none."""
    W = m * (k - 1)
    if P.degree != W - 1:
        raise ValueError("P has the wrong degree")
    if m % 2:
        if W % 2 == 0:
            raise ValueError("odd branch needs W = m(k-1) odd")
        d = (W - 1) // 2
        with mpmath.workprec(P.precision + 16):
            coeffs = [P.coeffs[d] / 2] + [P.coeffs[d - j] for j in range(1, d + 1)]
        bounds = [P.bounds[d] / 2] + [P.bounds[d - j] for j in range(1, d + 1)]
        name = "Q"
    else:
        if W % 2:
            raise ValueError("even branch needs W = m(k-1) even")
        e = (W - 2) // 2
        coeffs = [P.coeffs[e - j] for j in range(e + 1)]
        bounds = [P.bounds[e - j] for j in range(e + 1)]
        name = "q"
    return RealPolynomial(tuple(coeffs), tuple(bounds), P.precision, name, dict(P.meta))


def decomposition_exponents(m: int, k: int) -> tuple[int, int]:
    """``(a, b)`` with ``eps P = z^a Q(z) + eps z^b Q(1/z)`` (``z^b Q(1/z)`` is the reversed Q)."""
    W = m * (k - 1)
    if m % 2:
        d = (W - 1) // 2
        return d, d
    return W // 2, (W - 2) // 2


@dataclass(frozen=True)
class DecompositionReport:
    residuals: tuple
    allowed: tuple
    epsilon: int

    @property
    def violations(self) -> list[int]:
        return [j for j, (r, a) in enumerate(zip(self.residuals, self.allowed)) if r > a]

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def max_residual(self) -> mpmath.mpf:
        return max(self.residuals)

    @property
    def worst_index(self) -> int:
        return max(range(len(self.residuals)), key=lambda j: self.residuals[j] - self.allowed[j])


def verify_decomposition(P: RealPolynomial, Q: RealPolynomial, m: int, k: int, epsilon: int, strict: bool = True):
    """Coefficientwise ``eps P - (z^a Q + eps z^b Q(1/z))`` against the summed bounds."""
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    a, b = decomposition_exponents(m, k)
    q = _Loose(Q.coeffs, Q.bounds, Q.precision, Q.name)
    left = q.shift(a)
    # z^b Q(1/z) is the reversed coefficient list times z^(b - deg Q)
    right = q.reversed().scaled(epsilon).shift(b - Q.degree)
    res, allowed = P.scaled(epsilon).residual(_sum_unchecked(left, right))
    residuals = tuple(abs(x) for x in res)
    rep = DecompositionReport(residuals, tuple(allowed), epsilon)
    if strict and not rep.ok:
        j = rep.worst_index
        raise DecompositionError(
            f"decomposition fails at coefficient {j}: residual {mpmath.nstr(residuals[j], 5)} "
            f"> bound {mpmath.nstr(allowed[j], 5)} (epsilon={epsilon:+d})"
        )
    return rep


class _Loose(RealPolynomial):
    """Coefficient carrier without the certain-degree check (intermediate sums only)."""

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self._coerce(c) for c in self.coeffs))
        with mpmath.workprec(64):
            object.__setattr__(self, "bounds", tuple(mpmath.mpf(b) for b in self.bounds))


def _sum_unchecked(a: RealPolynomial, b: RealPolynomial) -> RealPolynomial:
    c, bd = a._combine(b, 1)
    return _Loose(tuple(c), tuple(bd), max(a.precision, b.precision), "sum")


# ---------------------------------------------------------------- comparison polynomials


def _coef_exact(m: int, k: int, N: int, n: int) -> mpmath.mpf:
    """Coefficient of P at z^n with L replaced by 1."""
    r = (m + 1) // 2
    W = m * (k - 1)
    val = (2 * mpmath.pi) ** (r * n) / math.factorial(n) * _gamma_ratio_product(m, k, n)
    val *= mpmath.mpf(N) ** (-mpmath.mpf(m * n) / 2 - 1)
    if m % 2 == 0:
        h0 = _half_shift(m, k)
        val *= mpmath.pi ** (mpmath.mpf(n) / 2) * mpmath.gamma(mpmath.mpf(W - n) / 2 - h0) / _gamma_int(W // 2 - h0)
    return val


def build_H_M(m: int, k: int, N: int, precision: int = 128, variant: str = "printed"):
    """``(H, M)`` for odd m; M is the sum of the two top-degree terms of H.

    ``variant="printed"`` reproduces the printed coefficients
    ``(2 pi)^n / n! * prod Gamma-ratio * N^{-n/2-1}`` and the printed constant
    term; ``variant="exact"`` uses the coefficients of Q with every L-value
    replaced by 1, which is what the comparison with Q needs for m > 1.  For
    m = 1 they differ only in the N power of the constant term (equal at N = 1).
    """
    if m % 2 == 0:
        raise ValueError("H and M are defined for odd m; use build_h")
    if variant not in H_VARIANTS:
        raise ValueError(f"variant must be one of {H_VARIANTS}")
    W = m * (k - 1)
    d = (W - 1) // 2
    r = (m + 1) // 2
    prec = precision + 16
    coeffs = [mpmath.mpf(0)] * (d + 1)
    with mpmath.workprec(prec + 16):
        for n in range(d):
            if variant == "exact":
                c = _coef_exact(m, k, N, n)
            else:
                c = (2 * mpmath.pi) ** n / math.factorial(n) * _gamma_ratio_product(m, k, n)
                c *= mpmath.mpf(N) ** (-mpmath.mpf(n) / 2 - 1)
            coeffs[d - n] = c
        if variant == "exact":
            coeffs[0] = _coef_exact(m, k, N, d) / 2
        else:
            prod = mpmath.mpf(1)
            for j in range(1, r):
                prod *= mpmath.mpf(_gamma_int(d + 1 - j * (k - 1))) / _gamma_int((m - j) * (k - 1))
            coeffs[0] = (2 * mpmath.pi) ** d / (2 * math.factorial(d)) * prod * mpmath.mpf(N) ** (
                -mpmath.mpf(m * W) / 2 - 1
            )
    bounds = [_ulp_bound(c, prec - 8) for c in coeffs]
    meta = {"m": m, "k": k, "N": N, "variant": variant}
    H = RealPolynomial(tuple(coeffs), tuple(bounds), prec, "H", meta)
    top = [mpmath.mpf(0)] * (d + 1)
    topb = [0] * (d + 1)
    for j in (d, d - 1):
        if j >= 0:
            top[j], topb[j] = coeffs[j], bounds[j]
    M = RealPolynomial(tuple(top), tuple(topb), prec, "M", dict(meta))
    return H, M


def build_h(m: int, k: int, N: int, precision: int = 128, variant: str = "printed") -> RealPolynomial:
    """Comparison polynomial for even m, on the degree convention of q (degree (W-2)/2).

    ``variant="printed"`` keeps the printed coefficient
    ``pi^{-(W-n)/2} Gamma((W-n)/2 - h0) (2 pi)^n/n! prod Gamma-ratio`` (no N);
    ``variant="exact"`` is q with every L-value replaced by 1.
    """
    if m % 2:
        raise ValueError("h is defined for even m; use build_H_M")
    if variant not in H_VARIANTS:
        raise ValueError(f"variant must be one of {H_VARIANTS}")
    W = m * (k - 1)
    e = (W - 2) // 2
    h0 = _half_shift(m, k)
    prec = precision + 16
    coeffs = [mpmath.mpf(0)] * (e + 1)
    with mpmath.workprec(prec + 16):
        for n in range(e + 1):
            if variant == "exact":
                c = _coef_exact(m, k, N, n)
            else:
                c = (
                    mpmath.pi ** (-mpmath.mpf(W - n) / 2)
                    * mpmath.gamma(mpmath.mpf(W - n) / 2 - h0)
                    * (2 * mpmath.pi) ** n
                    / math.factorial(n)
                    * _gamma_ratio_product(m, k, n)
                )
            coeffs[e - n] = c
    bounds = [_ulp_bound(c, prec - 8) for c in coeffs]
    return RealPolynomial(tuple(coeffs), tuple(bounds), prec, "h", {"m": m, "k": k, "N": N, "variant": variant})


# ---------------------------------------------------------------- functional equation of R


def check_R_functional_equation(R: ComplexPolynomial, epsilon: int, N: int, points: int = 20, seed: int = 0):
    """``R(-1/(Nz)) = eps i^{3(W-1)} z^{1-W} N^{(1-W)/2} R(z)`` at random ``|z| = 1/sqrt N``.

    Returns a list of ``(z, residual, allowed)``.
    """
    W = R.degree + 1
    rng = random.Random(seed)
    out = []
    with mpmath.workprec(R.precision + 16):
        rad = 1 / mpmath.sqrt(N)
        fac0 = epsilon * mpmath.mpc(0, 1) ** (3 * (W - 1)) * mpmath.mpf(N) ** (mpmath.mpf(1 - W) / 2)
        err = R.eval_bound(rad)
        for _ in range(points):
            z = rad * mpmath.expjpi(2 * mpmath.mpf(rng.random()))
            lhs = R(-1 / (N * z))
            fac = fac0 * z ** (1 - W)
            rhs = fac * R(z)
            res = abs(lhs - rhs)
            allowed = _up(err * (1 + abs(fac))) + _ulp_bound(abs(lhs) + abs(rhs), R.precision - 8)
            out.append((z, res, allowed))
    return out


# ---------------------------------------------------------------- bundle


@dataclass(frozen=True)
class PeriodPolynomialBundle:
    parity: str
    R: ComplexPolynomial
    P: RealPolynomial
    Q: RealPolynomial
    H: RealPolynomial
    M: Optional[RealPolynomial]
    normalizer: mpmath.mpf
    epsilon: int
    m: int
    k: int
    N: int
    label: str
    variant: str = "printed"
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        W = self.m * (self.k - 1)
        if self.R.degree != W - 1 or self.P.degree != W - 1:
            raise ValueError("R and P must have degree m(k-1)-1")
        want = (W - 1) // 2 if self.parity == "odd" else (W - 2) // 2
        if self.Q.degree != want:
            raise ValueError(f"half polynomial has degree {self.Q.degree}, expected {want}")


def build_bundle(cvs: CriticalValueSet, variant: str = "printed") -> PeriodPolynomialBundle:
    m, k, N = cvs.m, cvs.k, cvs.level
    R = build_R(cvs)
    P = build_P(cvs, R)
    bad = P.palindrome_violations(cvs.epsilon)
    if bad:
        raise DecompositionError(f"P is not {cvs.epsilon:+d}-palindromic at indices {bad[:5]}")
    Q = build_Q(P, m, k)
    if m % 2:
        H, M = build_H_M(m, k, N, cvs.precision, variant)
    else:
        H, M = build_h(m, k, N, cvs.precision, variant), None
    return PeriodPolynomialBundle(
        "odd" if m % 2 else "even", R, P, Q, H, M, normalizer(m, k, N, cvs.precision), cvs.epsilon,
        m, k, N, cvs.label, variant,
    )
