"""Completed critical values: direct series, smoothed approximate functional equation, sign.

Normalisation: ``lambda(n) = a_m(n) / n^{W/2}`` with ``W = m(k-1)``, ``sigma = s - W/2``,
``Q = N^{m/2}`` and ``Lambda(s) = Q^s gamma_m(s) L(s)``, so that
``Lambda(s) = eps Lambda(W + 1 - s)``.  Shifting the contour in
``(1/2 pi i) int Lambda(s+w) A^w dw/w`` gives

    Lambda(s) = Q^s  sum lambda(n) n^-sigma  G_s (n / (Q A))
              + eps Q^s' sum lambda(n) n^-sigma' G_s'(n A / Q),      s' = W + 1 - s.

Both sums are bounded uniformly for ``A`` in ``[1/1.2, 1.2]``, so the
cutoff and the kernels depend on ``s`` and the target only.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import mpmath
import numpy as np

from ..symcoef import SymPowerCoefficients, divisor_power_upto, tail_bound
from ..symcoef.coefficients import InsufficientCoefficientsError
from .budget import ErrorBudget
from .gamma import GammaFactorSpec, gamma_factor, log_abs_gamma_factor
from .kernel import LN2, KernelCache, MellinKernel, _min_arg, plan_kernel

DELTA = 0.25  # direct series needs sigma >= 1 + DELTA
A_SPAN = 1.2  # kernels and cutoffs are valid for A in [1/A_SPAN, A_SPAN]
MAX_CUTOFF = 200_000


class EpsilonError(ArithmeticError):
    pass


class PairingError(ArithmeticError):
    pass


# ---------------------------------------------------------------- float helpers


@lru_cache(maxsize=32)
def _dtable(m: int, X: int) -> tuple[np.ndarray, np.ndarray]:
    d = np.asarray(divisor_power_upto(m + 1, X)[1:], dtype=float)
    return d, np.log(np.arange(1, X + 1, dtype=float))


def _log_dsum(m: int, alpha: float, X: int) -> float:
    """Natural log of ``sum_{n <= X} d_{m+1}(n) n^-alpha`` (floats, log-sum-exp)."""
    d, ln = _dtable(m, X)
    ex = np.log(d) - alpha * ln
    top = ex.max()
    return float(top + math.log(np.exp(ex - top).sum())) + 1e-9


def _log_tail_estimate(m: int, alpha: float, X: int) -> float:
    # sum_{n>X} d_{m+1}(n) n^-alpha ~ X^{1-alpha} log(X)^m / (m! (alpha-1)); used only to
    # steer the cutoff search, the rigorous check is tail_bound
    lx = math.log(max(X, 3))
    return (
        (1 - alpha) * lx + m * math.log(lx + 1) - math.lgamma(m + 1) - math.log(alpha - 1) + math.log(4.0)
    )


def _log_K(spec: GammaFactorSpec, s: float, c: float) -> float:
    """log of ``K`` with ``|G_s(t)| <= K t^-c`` (``c`` right of every pole of ``gamma(s+w)/w``)."""
    x0 = _min_arg(spec, s + c)
    return math.log(4.0 / (2 * math.pi)) + log_abs_gamma_factor(spec, s + c) + 0.5 * max(0.0, math.log(x0 / c))


def _K_rigorous(spec: GammaFactorSpec, s, c) -> mpmath.mpf:
    with mpmath.workprec(64):
        x0 = mpmath.mpf(_min_arg(spec, float(s) + float(c)))
        c = mpmath.mpf(c)
        g = abs(gamma_factor(spec, mpmath.mpf(s) + c))
        return 4 / (2 * mpmath.pi) * g * max(1, mpmath.sqrt(x0 / c)) * (1 + mpmath.mpf(2) ** -30)


# ---------------------------------------------------------------- direct series


def _direct_cutoff(m: int, sigma: float, target, cap: int) -> Optional[int]:
    lt = float(mpmath.log(target))
    if _log_tail_estimate(m, sigma, cap) > lt + 2:
        return None
    lo, hi = 1, cap
    while lo < hi:
        mid = (lo + hi) // 2
        if _log_tail_estimate(m, sigma, mid) <= lt - 1:
            hi = mid
        else:
            lo = mid + 1
    X = lo
    while X <= cap:
        if tail_bound(m, 0, sigma, X) <= target:
            return X
        X = min(cap, int(X * 1.25) + 1) if X < cap else cap + 1
    return None


def lseries_direct(coeffs: SymPowerCoefficients, s, target, precision: Optional[int] = None):
    """``L_{m,f}(s) = sum lambda(n) n^-sigma``; returns ``(value, ErrorBudget)``.

    Needs ``sigma = s - W/2 >= 1 + DELTA``.  The cutoff is the least ``X``
    (up to the stored coefficients) whose rigorous tail bound is below ``target``.
    """
    m, k = coeffs.m, coeffs.k
    W = m * (k - 1)
    sigma = mpmath.mpf(s) - mpmath.mpf(W) / 2
    if sigma < 1 + DELTA:
        raise ValueError(
            f"s={s} has normalised abscissa {mpmath.nstr(sigma, 5)} < {1 + DELTA}; use afe_value instead"
        )
    target = mpmath.mpf(target)
    X = _direct_cutoff(m, float(sigma), target * mpmath.mpf("0.9"), coeffs.cutoff)
    if X is None:
        raise InsufficientCoefficientsError(
            f"direct series at s={s} needs more than the {coeffs.cutoff} stored coefficients"
        )
    tail = tail_bound(m, 0, sigma, X)
    prec = precision or max(mpmath.mp.prec, coeffs.precision)
    wp = prec + 32
    with mpmath.workprec(wp):
        total = mpmath.mpf(0)
        absum = mpmath.mpf(0)
        for n in range(1, X + 1):
            term = coeffs.lam[n] * mpmath.exp(-sigma * mpmath.log(n))
            total += term
            absum += abs(term)
    with mpmath.workprec(64):
        rnd = absum * (8 * (X + 1) * mpmath.ldexp(1, -wp) + mpmath.ldexp(1, 2 - coeffs.precision))
    budget = ErrorBudget(series_truncation=tail, rounding=rnd)
    with mpmath.workprec(prec):
        return +total, budget


# ---------------------------------------------------------------- AFE


@dataclass(frozen=True)
class AfeSetup:
    """Everything about one ``s`` that does not depend on ``A`` or ``eps``."""

    s: int
    X: int
    target: mpmath.mpf
    tail1: mpmath.mpf  # n-tail of the first sum, valid for all A in range
    tail2: mpmath.mpf


def _best_tail_c(spec, Q: float, s: float, m: int, X: int):
    """Minimise the float estimate of the n-tail over the auxiliary abscissa."""
    W = spec.weight
    sigma = s - W / 2
    base = max(spec.rightmost_pole(s), 0.0, 1.0 - sigma)
    best = None
    for dlt in (0.25, 0.5, 1, 2, 3, 5, 8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256):
        c = base + dlt
        val = (
            s * math.log(Q)
            + _log_K(spec, s, c)
            + c * math.log(A_SPAN * Q)
            + _log_tail_estimate(m, sigma + c, X)
        )
        if best is None or val < best[0]:
            best = (val, c)
    return best


def _tail_rigorous(spec, N: int, s: int, m: int, X: int, c: float) -> mpmath.mpf:
    W = spec.weight
    with mpmath.workprec(64):
        Q = mpmath.mpf(N) ** (mpmath.mpf(m) / 2)
        sigma = mpmath.mpf(s) - mpmath.mpf(W) / 2
        return (
            Q**s
            * _K_rigorous(spec, s, c)
            * (A_SPAN * Q) ** c
            * tail_bound(m, 0, sigma + mpmath.mpf(c), X)
            * (1 + mpmath.mpf(2) ** -30)
        )


def required_cutoff(spec: GammaFactorSpec, N: int, s: int, target) -> tuple[int, mpmath.mpf, mpmath.mpf]:
    """Least (up to 25 %) ``X`` with both AFE n-tails below ``target/4``.

    Returns ``(X, tail1, tail2)`` with the rigorous tail bounds at that ``X``.
    """
    m, W = spec.m, spec.weight
    sp = W + 1 - s
    Q = float(N) ** (m / 2)
    lt = float(mpmath.log(mpmath.mpf(target) / 4))

    def est(X):
        return max(_best_tail_c(spec, Q, s, m, X)[0], _best_tail_c(spec, Q, sp, m, X)[0])

    X = 1
    while est(X) > lt - 1:
        X *= 2
        if X > MAX_CUTOFF:
            raise InsufficientCoefficientsError(f"AFE at s={s} needs a(n) for n <= X with X > {MAX_CUTOFF}")
    lo, hi = max(1, X // 2), X
    while lo < hi:
        mid = (lo + hi) // 2
        if est(mid) <= lt - 1:
            hi = mid
        else:
            lo = mid + 1
    X = lo
    quarter = mpmath.mpf(target) / 4
    for _ in range(40):
        t1 = _tail_rigorous(spec, N, s, m, X, _best_tail_c(spec, Q, s, m, X)[1])
        t2 = _tail_rigorous(spec, N, sp, m, X, _best_tail_c(spec, Q, sp, m, X)[1])
        if t1 <= quarter and t2 <= quarter:
            return X, t1, t2
        X = int(X * 1.25) + 1
        if X > MAX_CUTOFF:
            break
    raise InsufficientCoefficientsError(f"AFE at s={s}: no cutoff up to {MAX_CUTOFF} meets the tail target")


_DEFAULT_CACHE = KernelCache()
_LOGN_CACHE: dict = {}
_LOGN_LOCK = threading.Lock()


def _log_table(X: int, bits: int) -> list:
    key = bits
    with _LOGN_LOCK:
        tab = _LOGN_CACHE.get(key)
    if tab is None or len(tab) <= X:
        with mpmath.workprec(bits):
            tab = [mpmath.mpf(0)] + [mpmath.log(n) for n in range(1, X + 1)]
        with _LOGN_LOCK:
            old = _LOGN_CACHE.get(key)
            if old is None or len(old) < len(tab):
                _LOGN_CACHE[key] = tab
    return tab


def _kernel_for(spec, N: int, s: int, X: int, target, cache: KernelCache) -> MellinKernel:
    """Kernel at ``s`` whose error keeps its weighted sum below ``target/5``."""
    m, W = spec.m, spec.weight
    Q = float(N) ** (m / 2)
    sigma = s - W / 2
    lg_tk = float(mpmath.log(mpmath.mpf(target) / 5, 2))
    t_lo = 1.0 / (A_SPAN * Q)

    def eps_log2(decay: float) -> float:
        return lg_tk - (s * math.log(Q) + _log_dsum(m, sigma + decay, X)) / LN2 - 1.0

    key = (spec.m, spec.k, N, int(s), X, int(math.floor(lg_tk)))

    def factory():
        plan = plan_kernel(spec, float(s), t_lo, eps_log2, n_evals=3 * X)
        return MellinKernel(spec, s, plan)

    kern = cache.get(key, factory)
    if kern.error_log2_at_tlo > eps_log2(kern.plan.decay) + 1.0:
        raise ArithmeticError(f"kernel at s={s} misses its error target")
    return kern


def _kernel_sum(coeffs, kern: MellinKernel, spec, N: int, s: int, X: int, log_scale, target, prec: int):
    """``Q^s sum_{n<=X} lambda(n) n^-sigma G_s(exp(log n - log_scale))`` plus budget parts."""
    m, W = spec.m, spec.weight
    bits = kern.plan.omega_bits + 40
    logs = _log_table(X, max(bits, prec + 32))
    wp = prec + 48
    with mpmath.workprec(wp):
        sigma = mpmath.mpf(s) - mpmath.mpf(W) / 2
        total = mpmath.mpf(0)
        absum = mpmath.mpf(0)
        for n in range(1, X + 1):
            lam = coeffs.lam[n]
            if not lam:
                continue
            with mpmath.workprec(bits):
                g = kern.value_from_log(logs[n] - log_scale)
            term = lam * mpmath.exp(-sigma * logs[n]) * g
            total += term
            absum += abs(term)
        Qs = mpmath.mpf(N) ** (mpmath.mpf(m * s) / 2)
        total *= Qs
        absum *= Qs
    with mpmath.workprec(64):
        # kernel error: E_lo (t/t_lo)^-decay with t/t_lo >= n, bounded by the d_{m+1} sum
        decay = kern.plan.decay
        lg = kern.error_log2_at_tlo * LN2 + float(s) * math.log(float(N) ** (m / 2)) + _log_dsum(
            m, float(sigma) + decay, X
        )
        kerr = mpmath.exp(mpmath.mpf(lg)) * (1 + mpmath.mpf(2) ** -20)
        rnd = absum * (8 * (X + 2) * mpmath.ldexp(1, -wp) + mpmath.ldexp(1, 2 - coeffs.precision))
    return total, kerr, rnd


@dataclass(frozen=True)
class AfeParts:
    s: int
    A: mpmath.mpf
    P1: mpmath.mpf
    P2: mpmath.mpf
    budget: ErrorBudget
    X: int
    precision: int = 128

    def value(self, epsilon: int):
        with mpmath.workprec(self.precision + 16):
            return self.P1 + epsilon * self.P2


def afe_parts(
    coeffs: SymPowerCoefficients,
    spec: GammaFactorSpec,
    N: int,
    s: int,
    A,
    target,
    cache: Optional[KernelCache] = None,
    precision: Optional[int] = None,
    setup: Optional[AfeSetup] = None,
) -> AfeParts:
    """Both AFE sums at ``s`` and scale ``A``; the budget covers ``P1 + eps P2`` for either sign."""
    m, W = spec.m, spec.weight
    if not 1 <= s <= W:
        raise ValueError(f"s={s} outside the critical range 1..{W}")
    A = mpmath.mpf(A)
    if not (1 / mpmath.mpf(A_SPAN) - 1e-12 <= A <= A_SPAN + 1e-12):
        raise ValueError(f"A must lie in [1/{A_SPAN}, {A_SPAN}]")
    target = mpmath.mpf(target)
    if setup is None or setup.s != s or setup.target != target:
        X, t1, t2 = required_cutoff(spec, N, s, target)
        setup = AfeSetup(s, X, target, t1, t2)
    X = setup.X
    if X > coeffs.cutoff:
        raise InsufficientCoefficientsError(f"AFE at s={s} needs a(n) for n <= {X}, have {coeffs.cutoff}")
    cache = cache if cache is not None else _DEFAULT_CACHE
    prec = precision or max(mpmath.mp.prec, 64)
    sp = W + 1 - s
    k1 = _kernel_for(spec, N, s, X, target, cache)
    k2 = _kernel_for(spec, N, sp, X, target, cache)
    with mpmath.workprec(max(k1.plan.omega_bits, k2.plan.omega_bits, prec) + 40):
        logQ = mpmath.log(mpmath.mpf(N)) * m / 2
        logA = mpmath.log(A)
        scale1, scale2 = logQ + logA, logQ - logA
    P1, e1, r1 = _kernel_sum(coeffs, k1, spec, N, s, X, scale1, target, prec)
    P2, e2, r2 = _kernel_sum(coeffs, k2, spec, N, sp, X, scale2, target, prec)
    with mpmath.workprec(64):
        # quadrature terms are reported together: the kernel bound does not
        # separate truncation and discretisation after weighting
        budget = ErrorBudget(
            series_truncation=setup.tail1 + setup.tail2,
            quadrature_truncation=0,
            quadrature_discretization=e1 + e2,
            rounding=r1 + r2,
        )
    with mpmath.workprec(prec):
        return AfeParts(s, A, +P1, +P2, budget, X, prec)


def afe_value(
    coeffs: SymPowerCoefficients,
    spec: GammaFactorSpec,
    N: int,
    s: int,
    epsilon: int,
    A=1,
    target=None,
    cache: Optional[KernelCache] = None,
    precision: Optional[int] = None,
):
    """``Lambda(s)`` from the smoothed two-sum formula with sign ``epsilon``; ``(value, ErrorBudget)``."""
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    prec = precision or mpmath.mp.prec
    if target is None:
        target = default_target(spec, N, s, prec)
    parts = afe_parts(coeffs, spec, N, s, A, target, cache, prec)
    with mpmath.workprec(prec):
        return +parts.value(epsilon), parts.budget


def completed_scale(spec: GammaFactorSpec, N: int, s: int) -> mpmath.mpf:
    """``Q^s |gamma(s)|`` at the upper member of the pair ``{s, W+1-s}``."""
    W = spec.weight
    hi = max(s, W + 1 - s)
    with mpmath.workprec(64):
        return mpmath.mpf(N) ** (mpmath.mpf(spec.m * hi) / 2) * abs(gamma_factor(spec, hi))


def default_target(spec: GammaFactorSpec, N: int, s: int, precision: int, rel=None) -> mpmath.mpf:
    rel = mpmath.ldexp(1, -(precision - 24)) if rel is None else mpmath.mpf(rel)
    return rel * completed_scale(spec, N, s)


# ---------------------------------------------------------------- epsilon


def epsilon_test_points(spec: GammaFactorSpec) -> tuple[int, int]:
    W = spec.weight
    s1 = W // 2 + 1  # ceil of the centre (W+1)/2
    return s1, min(W, s1 + 1)


def determine_epsilon(
    coeffs: SymPowerCoefficients,
    spec: GammaFactorSpec,
    N: int,
    precision: int = 96,
    hint: Optional[int] = None,
    cache: Optional[KernelCache] = None,
) -> int:
    """The sign for which the AFE value is independent of ``A`` at two points.

    Each point is evaluated at ``A = 1`` and ``A = 1.2``.  The wrong sign
    shifts the difference by ``2 |P2(1) - P2(1.2)|``, which is far above the
    budgets whenever the mirror sum really depends on ``A``.
    """
    stable = {1: True, -1: True}
    details = []
    for s in sorted(set(epsilon_test_points(spec))):
        tgt = default_target(spec, N, s, precision)
        a = afe_parts(coeffs, spec, N, s, 1, tgt, cache, precision)
        b = afe_parts(coeffs, spec, N, s, A_SPAN, tgt, cache, precision)
        allowed = a.budget.total + b.budget.total
        for eps in (1, -1):
            with mpmath.workprec(precision + 32):
                diff = abs(a.value(eps) - b.value(eps))
            details.append((s, eps, diff, allowed))
            if diff > allowed:
                stable[eps] = False
    good = [e for e in (1, -1) if stable[e]]
    if len(good) == 2:
        raise EpsilonError(
            "both signs are A-stable within budgets; raise the precision to separate them"
        )
    if not good:
        worst = max(details, key=lambda t: t[2] / t[3])
        raise EpsilonError(
            "neither sign is A-stable (inconsistent coefficients or gamma factor?); "
            f"worst s={worst[0]} eps={worst[1]} diff={mpmath.nstr(worst[2], 4)} allowed={mpmath.nstr(worst[3], 4)}"
        )
    eps = good[0]
    if hint is not None and hint != eps:
        raise EpsilonError(f"computed sign {eps:+d} contradicts the supplied hint {hint:+d}")
    return eps


# ---------------------------------------------------------------- all critical values


DIRECT_MAX_X = 10_000


def _direct_plan(spec: GammaFactorSpec, N: int, s: int, rel_target, cap: int) -> Optional[int]:
    """Cutoff for the direct series at ``s`` meeting ``rel_target`` relative to ``L``, or None."""
    sigma = s - spec.weight / 2
    if sigma < 1 + DELTA:
        return None
    # |L(s)| >= prod_p (1 + p^-sigma)^-(m+1) >= zeta(sigma)^-(m+1); an absolute
    # target of rel * zeta^-(m+1) is therefore relative
    with mpmath.workprec(64):
        floor_L = mpmath.zeta(sigma) ** -(spec.m + 1)
    return _direct_cutoff(spec.m, sigma, mpmath.mpf(rel_target) * floor_L / 4, cap)


def fetch_coefficients(fm, m: int, X: int, precision: int) -> SymPowerCoefficients:
    """Symmetric-power coefficients up to ``X``, regenerating built-in forms when needed."""
    from ..formsrc import builtin_newform

    if fm.coeff_cutoff < X:
        if fm.source != "builtin":
            raise InsufficientCoefficientsError(
                f"{fm.label}: need a(n) for n <= {X} but only {fm.coeff_cutoff} are stored"
            )
        fm = builtin_newform(fm.weight, X)
    return sym_coeffs_cached(fm, m, X, precision)


_COEFF_CACHE: dict = {}


def sym_coeffs_cached(fm, m: int, X: int, precision: int) -> SymPowerCoefficients:
    from ..symcoef import sym_coeffs

    key = (fm.label, fm.level, fm.weight, fm.embedding, m, precision)
    have = _COEFF_CACHE.get(key)
    if have is not None and have.cutoff >= X:
        return have.truncated(X) if have.cutoff > X else have
    out = sym_coeffs(fm, m, X, precision)
    _COEFF_CACHE[key] = out
    return out


def coefficient_plan(fm, m: int, precision: int = 128, target=None, check_pairs: bool = True):
    """``(cutoff, plans)``: how many coefficients ``critical_values`` will ask for, and per upper point
    the strategy ``(kind, X, setup)``."""
    spec = GammaFactorSpec(m, fm.weight)
    N, W = fm.level, spec.weight
    rel = mpmath.ldexp(1, -(precision - 24)) if target is None else mpmath.mpf(target)
    cap = DIRECT_MAX_X if fm.source == "builtin" else min(DIRECT_MAX_X, fm.coeff_cutoff)
    high = [s for s in range(1, W + 1) if 2 * s >= W + 1]
    plans: dict[int, tuple] = {}
    need = 1
    for s in high:
        Xd = _direct_plan(spec, N, s, rel, cap)
        T = rel * completed_scale(spec, N, s)
        if Xd is not None:
            plans[s] = ("direct", Xd, None)
            need = max(need, Xd)
        else:
            X, t1, t2 = required_cutoff(spec, N, s, T)
            plans[s] = ("afe", X, AfeSetup(s, X, T, t1, t2))
            need = max(need, X)
    if check_pairs:
        for s in high:
            sp = W + 1 - s
            if sp < s and plans[s][0] == "direct":
                X, _, _ = required_cutoff(spec, N, sp, rel * completed_scale(spec, N, s))
                need = max(need, X)
    for s in epsilon_test_points(spec):
        need = max(need, required_cutoff(spec, N, s, default_target(spec, N, s, 96))[0])
    return need, plans


def critical_values(
    fm,
    m: int,
    precision: int = 128,
    target=None,
    cache: Optional[KernelCache] = None,
    coeffs: Optional[SymPowerCoefficients] = None,
    check_pairs: bool = True,
):
    """``Lambda(W - n)`` for ``n = 0..W-1`` with strategies, sign and pairing check.

    ``target`` is relative: the error of ``Lambda(s)`` is kept below
    ``target * Q^s' |gamma(s')|`` with ``s'`` the upper member of the pair
    (default ``2^-(precision-24)``).  Points above the centre use the direct
    series when its cutoff is affordable, the AFE otherwise; points below the
    centre are reflected, and with ``check_pairs`` an independent AFE at
    ``A = 1.1`` is computed there for the pairing test.
    """
    from .budget import CriticalValue, CriticalValueSet

    spec = GammaFactorSpec(m, fm.weight)
    N, W = fm.level, spec.weight
    rel = mpmath.ldexp(1, -(precision - 24)) if target is None else mpmath.mpf(target)
    cache = cache if cache is not None else _DEFAULT_CACHE
    cprec = precision + 32
    need, plans = coefficient_plan(fm, m, precision, rel, check_pairs)
    high = sorted(plans)

    if coeffs is None or coeffs.cutoff < need or coeffs.precision < cprec:
        coeffs = fetch_coefficients(fm, m, need, cprec)

    hint = fm.epsilon_hint_m1 if m == 1 else None
    eps = determine_epsilon(coeffs, spec, N, 96, hint, cache)

    values: dict[int, CriticalValue] = {}
    with mpmath.workprec(precision + 16):
        for s in high:
            kind, X, setup = plans[s]
            if kind == "direct":
                Ls, b = lseries_direct(coeffs.truncated(X), s, _direct_target(spec, s, rel), precision + 16)
                g = gamma_factor(spec, s)
                fac = mpmath.mpf(N) ** (mpmath.mpf(m * s) / 2) * g
                val = fac * Ls
                b = b.scaled(fac) + ErrorBudget(rounding=abs(val) * mpmath.ldexp(1, -(precision + 8)))
                values[s] = CriticalValue(s, +val, b, "direct")
            else:
                parts = afe_parts(coeffs, spec, N, s, 1, setup.target, cache, precision + 16, setup)
                values[s] = CriticalValue(s, parts.value(eps), parts.budget, "afe")
        for s in range(1, W + 1):
            if s in values:
                continue
            up = values[W + 1 - s]
            chk_v = chk_b = None
            if check_pairs:
                T = rel * completed_scale(spec, N, s)
                parts = afe_parts(coeffs, spec, N, s, mpmath.mpf("1.1"), T, cache, precision + 16)
                chk_v, chk_b = parts.value(eps), parts.budget
            values[s] = CriticalValue(s, eps * up.value, up.budget, "reflect", chk_v, chk_b)

    out = CriticalValueSet(
        m, fm.weight, N, fm.label,
        tuple(values[W - n] for n in range(W)),
        eps, precision, rel,
        {"cutoff": coeffs.cutoff},
    )
    bad = [(s, r, a) for s, r, a in out.pairing_residuals() if r > a]
    if bad:
        s, r, a = bad[0]
        raise PairingError(
            f"{fm.label} m={m}: pairing fails at s={s}: residual {mpmath.nstr(r, 5)} > {mpmath.nstr(a, 5)}"
        )
    return out


def _direct_target(spec, s, rel):
    sigma = s - spec.weight / 2
    with mpmath.workprec(64):
        return mpmath.mpf(rel) * mpmath.zeta(sigma) ** -(spec.m + 1) / 4
