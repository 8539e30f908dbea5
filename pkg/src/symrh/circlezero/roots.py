"""All roots of a polynomial: Newton-polygon start, float Aberth warm-up, multiprecision Aberth polish."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np

from ..kernels import aberth as aberth_float


class RootFindingError(ArithmeticError):
    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


@dataclass(frozen=True)
class RootSet:
    roots: tuple  # mpc
    residuals: tuple  # |p(root)|
    radii: tuple  # error radius per root, None when indeterminate
    precision: int
    iterations: int
    zero_multiplicity: int = 0

    def __len__(self):
        return len(self.roots)

    @property
    def max_circle_deviation(self) -> mpmath.mpf:
        with mpmath.workprec(self.precision):
            return max((abs(abs(z) - 1) for z in self.roots), default=mpmath.mpf(0))

    @property
    def max_modulus(self) -> mpmath.mpf:
        return max((abs(z) for z in self.roots), default=mpmath.mpf(0))

    @property
    def determinate(self) -> bool:
        return all(r is not None for r in self.radii)


def _coeff_list(poly) -> tuple[list, list]:
    coeffs = [mpmath.mpc(c) for c in poly.coeffs]
    bounds = list(getattr(poly, "bounds", [0] * len(coeffs)))
    return coeffs, bounds


def newton_polygon_starts(coeffs: list, offset: float = 0.4) -> list:
    """Initial points on circles whose radii come from the upper hull of ``log|c_j|``."""
    n = len(coeffs) - 1
    pts = [(j, float(mpmath.log(abs(c)))) for j, c in enumerate(coeffs) if c != 0]
    hull: list = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x1) <= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    out = []
    seg = 0
    for (i, yi), (j, yj) in zip(hull, hull[1:]):
        cnt = j - i
        logr = (yi - yj) / cnt
        for t in range(cnt):
            ang = 2 * math.pi * t / cnt + offset + 0.7 * seg
            out.append(mpmath.mpc(mpmath.cos(ang), mpmath.sin(ang)) * mpmath.exp(logr))
        seg += 1
    if len(out) != n:
        raise RootFindingError("Newton polygon did not cover the degree")
    return out


def _horner2(coeffs, z):
    p = coeffs[-1]
    dp = mpmath.mpc(0)
    for c in reversed(coeffs[:-1]):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _float_stage(coeffs, start):
    top = max(abs(c) for c in coeffs)
    e = int(mpmath.floor(mpmath.log(top, 2)))
    scaled = [mpmath.ldexp(c.real, -e) + 1j * mpmath.ldexp(c.imag, -e) for c in coeffs]
    arr = np.array([complex(c) for c in scaled], dtype=np.complex128)
    nz = [c for c in coeffs if c != 0]
    if any(a == 0 for a, c in zip(arr, coeffs) if c != 0) or not np.all(np.isfinite(arr)):
        return None
    st = np.array([complex(z) for z in start], dtype=np.complex128)
    if not np.all(np.isfinite(st)) or np.any(st == 0) or len(nz) == 0:
        return None
    roots, its, ok = aberth_float(arr, st, maxiter=500, tol=1e-13)
    if not np.all(np.isfinite(roots)):
        return None
    return [mpmath.mpc(complex(z)) for z in roots], its


def _mp_aberth(coeffs, z, target_bits: int, maxiter: int):
    """Aberth steps until every relative correction is below ``2^-target_bits`` or every
    ``|p(z_i)|`` sits at the Horner rounding floor (clusters, multiple roots)."""
    n = len(z)
    tol = mpmath.ldexp(1, -target_bits)
    floor_fac = 4 * (n + 1) * mpmath.ldexp(1, -mpmath.mp.prec)
    absc = [abs(c) for c in coeffs]
    for it in range(1, maxiter + 1):
        worst = mpmath.mpf(0)
        noisy = True
        for i in range(n):
            zi = z[i]
            p, dp = _horner2(coeffs, zi)
            if p == 0:
                continue
            az, mag = abs(zi), mpmath.mpf(0)
            for c in reversed(absc):
                mag = mag * az + c
            if abs(p) > floor_fac * mag:
                noisy = False
            if dp == 0:
                dp = mpmath.mpc(tol)
            ratio = p / dp
            acc = mpmath.mpc(0)
            for j in range(n):
                if j != i:
                    d = zi - z[j]
                    if d != 0:
                        acc += 1 / d
            corr = ratio / (1 - ratio * acc)
            z[i] = zi - corr
            rel = abs(corr) / max(abs(z[i]), tol)
            if rel > worst:
                worst = rel
        if worst < tol or noisy:
            return z, it, True
    return z, maxiter, False


def find_roots(poly, precision: Optional[int] = None, maxiter: int = 400) -> RootSet:
    """Every root with ``|p(root)|``, and an error radius ``deg * (|p| + coefficient error) / |p'|``.

    A radius is ``None`` (indeterminate) when the disk would reach half-way to
    the nearest other root, which is what happens at (near) multiple roots.
    """
    prec = precision or getattr(poly, "precision", mpmath.mp.prec)
    coeffs, bounds = _coeff_list(poly)
    if len(coeffs) < 2:
        return RootSet((), (), (), prec, 0)
    if coeffs[-1] == 0 or (bounds and not abs(coeffs[-1]) > bounds[-1]):
        raise RootFindingError("leading coefficient is not certain")
    wp = prec + 32
    with mpmath.workprec(wp):
        coeffs = [+c for c in coeffs]
        z0 = 0
        while z0 < len(coeffs) - 1 and coeffs[z0] == 0:
            z0 += 1
        # exact zero roots only when the stripped coefficients carry no error
        zero_exact = not bounds or all(b == 0 for b in bounds[:z0])
        core = coeffs[z0:]
        n = len(core) - 1
        roots: list = []
        its = 0
        if n == 1:
            roots = [-core[0] / core[1]]
        elif n > 1:
            start = newton_polygon_starts(core)
            fl = _float_stage(core, start)
            if fl is not None:
                start, its = fl
            roots, it2, ok = _mp_aberth(core, list(start), prec + 8, maxiter)
            its += it2
            if not ok:
                raise RootFindingError(f"Aberth iteration did not converge in {maxiter} steps", roots)
        norm = sum(abs(c) for c in coeffs)
        deg = len(coeffs) - 1
        all_roots = [mpmath.mpc(0)] * z0 + roots
        residuals, radii = [], []
        limit = mpmath.ldexp(norm, -(prec // 2))
        for i, z in enumerate(all_roots):
            if i < z0:
                residuals.append(mpmath.mpf(0))
                radii.append(mpmath.mpf(0) if zero_exact else None)
                continue
            p, dp = _horner2(coeffs, z)
            res = abs(p)
            residuals.append(res)
            if res > limit:
                raise RootFindingError(f"residual {mpmath.nstr(res, 5)} above 2^-(prec/2)*||p||", all_roots)
            cerr = mpmath.mpf(0)
            mag = mpmath.mpf(0)
            az = abs(z)
            for b, c in zip(reversed(bounds), reversed(coeffs)):
                cerr = cerr * az + b
                mag = mag * az + abs(c)
            # Horner rounding at wp bits
            cerr += 2 * (deg + 1) * mpmath.ldexp(mag, -wp)
            if dp == 0:
                radii.append(None)
                continue
            rad = deg * (res + cerr) / abs(dp)
            others = [abs(z - w) for j, w in enumerate(roots) if j + z0 != i]
            sep = min(others) if others else mpmath.inf
            if z0 and az <= rad:
                radii.append(None)  # touches the exact zero root
            elif rad * 2 >= sep:
                radii.append(None)
            else:
                radii.append(rad * (1 + mpmath.ldexp(1, -20)))
    with mpmath.workprec(prec):
        return RootSet(
            tuple(+z for z in all_roots),
            tuple(+r for r in residuals),
            tuple(None if r is None else +r for r in radii),
            prec,
            its,
            z0,
        )
