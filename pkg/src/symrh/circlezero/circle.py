"""Zeros on the unit circle by sign changes of the real circle function.

For ``p`` of degree ``d`` with ``c_{d-j} = lam * conj(c_j)`` (``|lam| = 1``) the
function ``S(t) = exp(-i d t / 2) p(exp(i t))`` satisfies ``conj(S) = conj(lam) S``,
so ``F(t) = Re(nu S(t))`` with ``nu = lam^(-1/2)`` carries all of ``S``.  Every
certified sign change of ``F`` on ``[t0, t0 + 2 pi)`` is a distinct zero on the
circle; ``d`` of them account for every zero.  ``F(t + 2 pi) = (-1)^d F(t)``.
"""

from __future__ import annotations

import math
from typing import Optional

import mpmath
import numpy as np

from ..kernels import circle_function
from .certificate import ZeroCertificate
from .roots import RootFindingError, find_roots

GRID_CAP = 2**20
GRID_OFFSET = 0.3183098861837907  # keeps samples off t = 0 and t = pi
MP_RESCUE_LIMIT = 4096


class NotSelfInversiveError(ValueError):
    pass


def _unimodular(lam, prec):
    with mpmath.workprec(prec):
        lam = mpmath.mpc(lam)
        # float input is normalised, matching lalin_smyth_construct
        if abs(abs(lam) - 1) > 1e-10:
            raise ValueError("lambda must have modulus 1")
        return lam / abs(lam)


def self_inversive_violations(poly, lam) -> list[int]:
    """Indices with ``|c_{d-j} - lam conj(c_j)|`` above the combined bounds."""
    d = poly.degree
    prec = poly.precision
    lam = _unimodular(lam, prec + 16)
    bad = []
    with mpmath.workprec(prec + 16):
        for j in range(d + 1):
            cj = mpmath.mpc(poly.coeffs[j])
            diff = abs(mpmath.mpc(poly.coeffs[d - j]) - lam * mpmath.conj(cj))
            slack = poly.bounds[j] + poly.bounds[d - j] + mpmath.ldexp(abs(cj), 4 - prec)
            if diff > slack * (1 + mpmath.ldexp(1, -40)):
                bad.append(j)
    return bad


class CircleFunction:
    """Float samples of ``F`` with rigorous per-sample error bounds."""

    def __init__(self, poly, lam, backend: Optional[str] = None):
        self.poly = poly
        self.degree = d = poly.degree
        prec = poly.precision
        self.lam = _unimodular(lam, prec + 16)
        self.backend = backend
        with mpmath.workprec(prec + 32):
            self.nu = 1 / mpmath.sqrt(self.lam)
            vs = [self.nu * mpmath.mpc(c) for c in poly.coeffs]
            top = max(abs(v) for v in vs)
            self.exp2 = int(mpmath.floor(mpmath.log(top, 2))) if top > 0 else 0
            vs = [mpmath.ldexp(v.real, -self.exp2) + 1j * mpmath.ldexp(v.imag, -self.exp2) for v in vs]
            self.cr = np.array([float(v.real) for v in vs])
            self.ci = np.array([float(v.imag) for v in vs])
            conv = sum(abs(v - mpmath.mpc(complex(float(v.real), float(v.imag)))) for v in vs)
            bnd = mpmath.ldexp(sum(poly.bounds), -self.exp2)
            self.static_err = float(mpmath.mpf(conv + bnd) * (1 + mpmath.ldexp(1, -30))) * (1 + 1e-12)
            self.mp_coeffs = [mpmath.mpc(c) for c in poly.coeffs]
        self.expo = np.arange(d + 1, dtype=np.float64) - d / 2.0

    def sample(self, thetas: np.ndarray):
        vals, errs = circle_function(self.cr, self.ci, self.expo, thetas, backend=self.backend)
        return vals, errs + self.static_err

    def mp_value(self, theta: float):
        """``F(theta)`` at high precision with an error bound (same scaling as ``sample``)."""
        prec = self.poly.precision
        with mpmath.workprec(prec + 32):
            t = mpmath.mpf(theta)
            z = mpmath.expjpi(t / mpmath.pi)
            acc = mpmath.mpc(0)
            for c in reversed(self.mp_coeffs):
                acc = acc * z + c
            val = mpmath.re(self.nu * mpmath.expjpi(-self.degree * t / (2 * mpmath.pi)) * acc)
            val = mpmath.ldexp(val, -self.exp2)
            norm = mpmath.ldexp(sum(abs(c) for c in self.mp_coeffs), -self.exp2)
            err = norm * (self.degree + 8) * mpmath.ldexp(1, -(prec + 20))
            err += mpmath.ldexp(sum(self.poly.bounds), -self.exp2)
            return float(val), float(err) * (1 + 1e-9) + 1e-300


def _signs(vals, errs):
    s = np.zeros(vals.shape[0], dtype=np.int8)
    s[vals > errs] = 1
    s[vals < -errs] = -1
    return s


def count_sign_changes(signs: np.ndarray, wrap_sign: int) -> int:
    """Changes along the certified samples, closing the loop with ``F(t0 + 2 pi) = wrap_sign * F(t0)``."""
    nz = signs[signs != 0]
    if nz.size == 0:
        return 0
    changes = int(np.count_nonzero(nz[1:] != nz[:-1]))
    if nz[0] * wrap_sign != nz[-1]:
        changes += 1
    return changes


def sign_change_count(cf: CircleFunction, grid: int, offset: float = GRID_OFFSET):
    thetas = 2.0 * math.pi * (np.arange(grid, dtype=np.float64) + offset) / grid
    vals, errs = cf.sample(thetas)
    signs = _signs(vals, errs)
    unsure = np.flatnonzero(signs == 0)
    if 0 < unsure.size <= MP_RESCUE_LIMIT:
        for i in unsure:
            v, e = cf.mp_value(float(thetas[i]))
            signs[i] = 1 if v > e else (-1 if v < -e else 0)
    wrap = -1 if cf.degree % 2 else 1
    return count_sign_changes(signs, wrap), int(np.count_nonzero(signs == 0))


def certify_on_circle(
    poly,
    epsilon=1,
    *,
    grid_start: Optional[int] = None,
    grid_cap: int = GRID_CAP,
    with_roots: bool = True,
    backend: Optional[str] = None,
    name: Optional[str] = None,
    params: Optional[dict] = None,
) -> ZeroCertificate:
    """Certify that every zero of a self-inversive polynomial lies on ``|z| = 1``.

    ``epsilon`` is the palindrome sign for real input, or any unimodular
    ``lam`` with ``c_{d-j} = lam conj(c_j)``.  The grid doubles until ``d``
    sign changes are seen or ``grid_cap`` is passed.
    """
    d = poly.degree
    bad = self_inversive_violations(poly, epsilon)
    if bad:
        raise NotSelfInversiveError(f"coefficients {bad[:6]} break the self-inversive symmetry")
    cert = ZeroCertificate(name or poly.name, dict(params or poly.meta), d)
    if d == 0:
        cert.sign_changes = 0
        cert.circle_verdict = "certified"
        cert.max_circle_deviation = mpmath.mpf(0)
        return cert
    cf = CircleFunction(poly, epsilon, backend)
    grid = grid_start or max(64, 1 << (4 * d - 1).bit_length())
    best, unsure = sign_change_count(cf, grid)
    roots = None
    if with_roots or best < d:
        try:
            roots = find_roots(poly)
        except RootFindingError as exc:
            cert.notes.append(f"root finding failed: {exc}")
    off = roots is not None and off_circle_count(roots) > 0
    # refining cannot help once a root is provably off the circle
    while best < d and not off and grid < grid_cap:
        grid *= 2
        cnt, unsure = sign_change_count(cf, grid)
        best = max(best, cnt)
    cert.grid_points = grid
    cert.sign_changes = min(best, d)
    if best > d:
        cert.notes.append(f"{best} sign changes exceed the degree; coefficient data inconsistent")
    if roots is not None:
        cert.roots, cert.residuals, cert.radii = roots.roots, roots.residuals, roots.radii
        cert.max_circle_deviation = roots.max_circle_deviation
    if best >= d:
        cert.circle_verdict = "certified"
    else:
        cert.notes.append(f"{best} of {d} sign changes at {grid} points ({unsure} undecided samples)")
        cert.circle_verdict = "failed" if off else "numeric-only"
    return cert


def off_circle_count(roots) -> int:
    """Roots whose error disk misses the unit circle."""
    return sum(1 for z, r in zip(roots.roots, roots.radii) if r is not None and abs(abs(z) - 1) > r)
