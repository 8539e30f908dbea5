"""Inverse Mellin kernel ``G_s(t) = (1/2 pi i) int_(c) gamma_m(s+w) t^{-w} dw/w``.

The integral runs along a vertical line right of every singularity of the
integrand and is discretised by the trapezoid rule,

    G_s(t) = (h / 2 pi) t^{-c} [ 2 Re sum_{j=0}^{J} g_j t^{-i j h} - g_0 ],
    g_j = gamma(s + c + i j h) / (c + i j h),

so the node values depend on ``s`` only and are shared by every ``t``.  For a
given ``t`` the sum is a polynomial in ``omega = t^{-ih}``; it is evaluated by
a Horner loop on Python integers (fixed point), which is several times
faster than mpc arithmetic at the same accuracy.

Error terms, all for ``t >= t_lo`` and scaling at least like
``(t / t_lo)^{-(c-d)}``:

* discretisation: ``2 M / (exp(2 pi d / h) - 1) / (2 pi)``, with ``M`` bounding
  ``int |F|`` on the lines ``c +- d``, via ``|Gamma(x+iy)| <= Gamma(x) min(1, x/|y|)``;
* truncation of the node sum at ``Y = J h``: ``B(Y) / (pi kappa Y)`` with a
  Stirling majorant ``B`` whose logarithmic derivative is at most ``-kappa``;
* fixed-point rounding of the Horner recursion (explicit bound below).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Callable, Optional

import mpmath

from .budget import ErrorBudget
from .gamma import GammaFactorSpec, gamma_factor, log_abs_gamma_factor, log_stirling_majorant

LN2 = math.log(2.0)


class KernelTargetError(ArithmeticError):
    pass


@dataclass(frozen=True)
class KernelPlan:
    s: float
    c: float
    d: float
    h: float
    J: int
    wp: int  # precision for the node values
    unit_exp: int  # node values are integers in units of 2^unit_exp
    omega_bits: int  # fixed-point bits of omega
    t_lo: float
    log2_disc: float
    log2_trunc: float
    log2_round: float
    cost: float

    @property
    def decay(self) -> float:
        return self.c - self.d

    def log2_error(self) -> float:
        m = max(self.log2_disc, self.log2_trunc, self.log2_round)
        return m + math.log2(
            2.0 ** (self.log2_disc - m) + 2.0 ** (self.log2_trunc - m) + 2.0 ** (self.log2_round - m)
        )


def _log_prefactor(spec: GammaFactorSpec, x: float) -> float:
    # log of |(2 pi)^{-r z}| (times |pi^{-z/2}|) for Re z = x
    out = -spec.r * x * math.log(2 * math.pi)
    if spec.half_shift is not None:
        out -= x / 2 * math.log(math.pi)
    return out


def _log_trunc(spec: GammaFactorSpec, s: float, c: float, t_lo: float, Y: float) -> float:
    """Natural log of the node-sum truncation bound at ``Y`` (line ``c``)."""
    z = s + c
    args = [z - sh for sh in spec.shifts]
    logB = _log_prefactor(spec, z)
    kappa = 0.0
    for a in args:
        logB += log_stirling_majorant(a, Y)
        kappa += math.atan2(Y, a)
    if spec.half_shift is not None:
        a = z / 2 - spec.half_shift
        logB += log_stirling_majorant(a, Y / 2)
        kappa += 0.5 * math.atan2(Y / 2, a)
    return logB - c * math.log(t_lo) - math.log(Y) - math.log(math.pi * kappa)


def _min_arg(spec: GammaFactorSpec, x: float) -> float:
    vals = [x - sh for sh in spec.shifts]
    if spec.half_shift is not None:
        vals.append(2 * (x / 2 - spec.half_shift))  # |Gamma(a + iy/2)| <= Gamma(a) * 2a/|y|
    return min(vals)


def plan_kernel(
    spec: GammaFactorSpec,
    s: float,
    t_lo: float,
    eps_log2: Callable[[float], float],
    n_evals: int = 1,
) -> KernelPlan:
    """Pick the line ``c``, strip half-width ``d``, step ``h`` and node count ``J``.

    ``eps_log2(decay)`` returns log2 of the permitted kernel error at ``t_lo``
    when the error decays like ``(t/t_lo)^-decay``.  Candidates are compared
    by a crude cost model (gamma evaluations plus Horner steps).
    """
    s = float(s)
    lower = max(spec.rightmost_pole(s), 0.0)
    logt = math.log(t_lo)
    best: Optional[KernelPlan] = None
    for a in (0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0):
        for theta in (0.5, 0.75, 0.9, 0.97):
            c = lower + a
            d = theta * a
            decay = c - d
            lg_eps = eps_log2(decay) * LN2  # natural log of the kernel target
            x_lo, x_hi = s + c - d, s + c + d
            # discretisation: M bound on the two boundary lines
            lg_line = max(
                log_abs_gamma_factor(spec, x_lo) - (c - d) * logt,
                log_abs_gamma_factor(spec, x_hi) - (c + d) * logt,
            )
            lgM = math.log(4.0 / (2 * math.pi)) + lg_line + 0.5 * math.log(_min_arg(spec, x_hi) / (c - d))
            # disc <= eps/3  <=>  exp(2 pi d / h) >= 1 + 6 M / eps
            ratio = lgM + math.log(6.0) - lg_eps
            denom = math.log1p(math.exp(ratio)) if ratio < 700 else ratio
            h = 2 * math.pi * d / denom
            # truncation <= eps/3
            target = lg_eps - math.log(3.0)
            Y = 1.0
            while _log_trunc(spec, s, c, t_lo, Y) > target:
                Y *= 2
                if Y > 1e7:
                    break
            if Y > 1e7:
                continue
            lo, hi = Y / 2, Y
            for _ in range(30):
                mid = (lo + hi) / 2
                if _log_trunc(spec, s, c, t_lo, mid) > target:
                    lo = mid
                else:
                    hi = mid
            Y = hi
            J = max(1, int(math.ceil(Y / h)))
            # fixed-point sizes
            lg_g0 = log_abs_gamma_factor(spec, s + c) - math.log(c)
            lg_sum = lg_g0 + math.log(J + 1)
            lg_deltaS = target + math.log(math.pi / h) + c * logt  # allowed |e_0|
            unit_exp = int(math.floor((lg_deltaS - math.log(10 * J)) / LN2))
            omega_bits = int(math.ceil((math.log(4 * J) + lg_sum - lg_deltaS) / LN2)) + 2
            omega_bits = max(omega_bits, int(math.log2(J)) + 8)
            wp = max(64, int(math.ceil(lg_g0 / LN2)) - unit_exp + 24)
            int_bits = max(wp, omega_bits)
            cost = J * (len(spec.arguments(0.0)) + 1) * (wp / 64.0) ** 1.6 * 40.0 + J * n_evals * (
                int_bits / 64.0
            ) ** 1.3
            lg2_disc = (lgM - denom + math.log(2.0) - math.log(-math.expm1(-denom))) / LN2
            plan = KernelPlan(
                s, c, d, h, J, wp, unit_exp, omega_bits, t_lo,
                log2_disc=lg2_disc, log2_trunc=_log_trunc(spec, s, c, t_lo, J * h) / LN2,
                log2_round=target / LN2, cost=cost,
            )
            if best is None or plan.cost < best.cost:
                best = plan
    if best is None:
        raise KernelTargetError(f"no admissible contour for s={s}; increase precision or the target")
    return best


class MellinKernel:
    """Node values for one ``s`` plus fixed-point evaluation at many ``t``."""

    def __init__(self, spec: GammaFactorSpec, s, plan: KernelPlan):
        self.spec = spec
        self.s = mpmath.mpf(s)
        self.plan = plan
        self._build()

    def _build(self):
        p = self.plan
        with mpmath.workprec(p.wp):
            c = mpmath.mpf(p.c)
            h = mpmath.mpf(p.h)
            self.h = h
            self.c = c
            g0 = None
            re_ints, im_ints = [], []
            abs_sum = mpmath.mpf(0)
            for j in range(p.J + 1):
                w = mpmath.mpc(c, j * h)
                g = gamma_factor(self.spec, self.s + w) / w
                if j == 0:
                    g0 = mpmath.re(g)
                abs_sum += abs(g)
                re_ints.append(int(mpmath.nint(mpmath.ldexp(mpmath.re(g), -p.unit_exp))))
                im_ints.append(int(mpmath.nint(mpmath.ldexp(mpmath.im(g), -p.unit_exp))))
            self.g0 = +g0
            self._re = re_ints
            self._im = im_ints
            self.abs_sum = abs_sum
        # rigorous re-evaluation of the rounding term with the actual node sum
        with mpmath.workprec(64):
            J = p.J
            unit = mpmath.ldexp(1, p.unit_exp)
            e0 = 2 * J * (self.abs_sum * mpmath.ldexp(1, -p.omega_bits) + mpmath.mpf("2.5") * unit)
            e0 += (J + 1) * unit  # node rounding, |g_j - u G_j| <= u
            rnd = (mpmath.mpf(p.h) / mpmath.pi) * mpmath.mpf(p.t_lo) ** (-p.c) * e0
            self.log2_round = float(mpmath.log(rnd, 2)) + 1e-9
        self.error_log2_at_tlo = max(p.log2_disc, p.log2_trunc, self.log2_round) + math.log2(3.0)

    def error_bound(self, t) -> mpmath.mpf:
        """Bound on ``|G_computed(t) - G_s(t)|`` for ``t >= t_lo``."""
        t = mpmath.mpf(t)
        if t < self.plan.t_lo * (1 - 1e-12):
            raise ValueError("kernel evaluated below its planned range")
        with mpmath.workprec(64):
            return mpmath.mpf(2) ** self.error_log2_at_tlo * (
                t / mpmath.mpf(self.plan.t_lo)
            ) ** (-self.plan.decay)

    def value_from_log(self, log_t) -> mpmath.mpf:
        """``G_s(t)`` given ``log t`` (mpf, accurate to the fixed-point width)."""
        p = self.plan
        b = p.omega_bits
        with mpmath.workprec(b + 40):
            theta = -self.h * log_t
            wr = int(mpmath.nint(mpmath.ldexp(mpmath.cos(theta), b)))
            wi = int(mpmath.nint(mpmath.ldexp(mpmath.sin(theta), b)))
            re, im = self._re, self._im
            ar, ai = re[-1], im[-1]
            for j in range(p.J - 1, -1, -1):
                tr = (ar * wr - ai * wi) >> b
                ai = ((ar * wi + ai * wr) >> b) + im[j]
                ar = tr + re[j]
            S_re = mpmath.ldexp(ar, p.unit_exp)
            val = self.h / (2 * mpmath.pi) * mpmath.exp(-self.c * log_t) * (2 * S_re - self.g0)
            return +val

    def value(self, t) -> mpmath.mpf:
        with mpmath.workprec(self.plan.omega_bits + 40):
            return self.value_from_log(mpmath.log(mpmath.mpf(t)))


class KernelCache:
    """Per-``s`` kernel memo with get-or-compute semantics under concurrency."""

    def __init__(self):
        self._lock = threading.Lock()
        self._items: dict = {}
        self._pending: dict = {}

    def get(self, key, factory: Callable[[], MellinKernel]) -> MellinKernel:
        while True:
            with self._lock:
                if key in self._items:
                    return self._items[key]
                ev = self._pending.get(key)
                if ev is None:
                    ev = threading.Event()
                    self._pending[key] = ev
                    owner = True
                else:
                    owner = False
            if owner:
                try:
                    k = factory()
                    with self._lock:
                        self._items[key] = k
                    return k
                finally:
                    with self._lock:
                        self._pending.pop(key, None)
                    ev.set()
            ev.wait()

    def __len__(self):
        return len(self._items)


def inverse_mellin_G(spec: GammaFactorSpec, s, t, target, precision: Optional[int] = None):
    """``G_s(t)`` to absolute error ``target``; returns ``(value, ErrorBudget)``."""
    t = mpmath.mpf(t)
    if t <= 0:
        raise ValueError("t must be positive")
    target = mpmath.mpf(target)
    if target <= 0:
        raise ValueError("target must be positive")
    lg = float(mpmath.log(target, 2)) - 2.0
    plan = plan_kernel(spec, float(s), float(t), lambda decay: lg, n_evals=1)
    kern = MellinKernel(spec, s, plan)
    val = kern.value(t)
    budget = ErrorBudget(
        series_truncation=mpmath.mpf(0),
        quadrature_truncation=mpmath.mpf(2) ** plan.log2_trunc,
        quadrature_discretization=mpmath.mpf(2) ** plan.log2_disc,
        rounding=mpmath.mpf(2) ** kern.log2_round,
    )
    if budget.total > target:
        raise KernelTargetError(
            f"kernel error {mpmath.nstr(budget.total, 5)} exceeds target {mpmath.nstr(target, 5)}; raise precision"
        )
    with mpmath.workprec(precision or mpmath.mp.prec):
        return +val, budget
