"""Float64 inner loops: divisor sieve, circle sampling, Horner on the circle, Aberth.

Every kernel has a numba version (``*_loop``) and a vectorised numpy version
(``*_vec``).  The public wrappers dispatch on :data:`symrh._accel.HAVE_NUMBA`
unless an explicit ``backend`` is passed.  The float results are only ever
used together with the running error bounds returned next to them; anything
that must be certified is re-derived from those bounds.
"""

from __future__ import annotations

import numpy as np

from ._accel import HAVE_NUMBA, njit

UNIT_ROUNDOFF = 2.0**-53


def _pick(backend: str | None) -> str:
    if backend is None:
        return "numba" if HAVE_NUMBA else "numpy"
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


# ---------------------------------------------------------------- divisor sieve


@njit
def _divisor_power_loop(w, limit):
    out = np.zeros(limit + 1, dtype=np.int64)
    for n in range(1, limit + 1):
        out[n] = 1
    nxt = np.zeros(limit + 1, dtype=np.int64)
    for _ in range(w - 1):
        for n in range(limit + 1):
            nxt[n] = 0
        for d in range(1, limit + 1):
            v = out[d]
            for q in range(d, limit + 1, d):
                nxt[q] += v
        for n in range(limit + 1):
            out[n] = nxt[n]
    return out


def _divisor_power_vec(w, limit):
    out = np.zeros(limit + 1, dtype=np.int64)
    out[1:] = 1
    for _ in range(w - 1):
        nxt = np.zeros(limit + 1, dtype=np.int64)
        for d in range(1, limit + 1):
            nxt[d::d] += out[d]
        out = nxt
    return out


def divisor_power_table(w: int, limit: int, backend: str | None = None) -> np.ndarray:
    """``d_w(n)`` for ``0 <= n <= limit`` (entry 0 is 0) by repeated convolution with 1."""
    if w < 1:
        raise ValueError("w must be >= 1")
    if limit < 0:
        raise ValueError("limit must be >= 0")
    if _pick(backend) == "numba":
        return _divisor_power_loop(w, limit)
    return _divisor_power_vec(w, limit)


# ------------------------------------------------------- real circle function


@njit
def _circle_function_loop(cr, ci, expo, thetas):
    g = thetas.shape[0]
    n = cr.shape[0]
    vals = np.empty(g)
    errs = np.empty(g)
    u = 2.0**-53
    for i in range(g):
        th = thetas[i]
        acc = 0.0
        mag = 0.0
        for j in range(n):
            arg = expo[j] * th
            c = np.cos(arg)
            s = np.sin(arg)
            acc += cr[j] * c - ci[j] * s
            mag += (abs(cr[j]) + abs(ci[j])) * (abs(arg) + 3.0 + 2.0 * n)
        vals[i] = acc
        errs[i] = 2.0 * u * mag
    return vals, errs


def _circle_function_vec(cr, ci, expo, thetas, chunk=4096):
    vals = np.empty(thetas.shape[0])
    errs = np.empty(thetas.shape[0])
    n = cr.shape[0]
    weight = np.abs(cr) + np.abs(ci)
    for lo in range(0, thetas.shape[0], chunk):
        th = thetas[lo : lo + chunk]
        arg = np.multiply.outer(th, expo)
        vals[lo : lo + chunk] = np.cos(arg) @ cr - np.sin(arg) @ ci
        errs[lo : lo + chunk] = 2.0 * UNIT_ROUNDOFF * ((np.abs(arg) + 3.0 + 2.0 * n) @ weight)
    return vals, errs


def circle_function(cr, ci, expo, thetas, backend: str | None = None):
    """Sample ``F(t) = sum_j cr_j cos(e_j t) - ci_j sin(e_j t)`` with float error bounds.

    Returns ``(values, bounds)``; each bound covers argument rounding, the
    trig evaluations and the summation for the theta actually sampled.
    """
    cr = np.ascontiguousarray(cr, dtype=np.float64)
    ci = np.ascontiguousarray(ci, dtype=np.float64)
    expo = np.ascontiguousarray(expo, dtype=np.float64)
    thetas = np.ascontiguousarray(thetas, dtype=np.float64)
    if _pick(backend) == "numba":
        return _circle_function_loop(cr, ci, expo, thetas)
    return _circle_function_vec(cr, ci, expo, thetas)


# ------------------------------------------------------- Horner on the circle


@njit
def _horner_circle_loop(coef_re, coef_im, thetas):
    g = thetas.shape[0]
    n = coef_re.shape[0]
    out_re = np.empty(g)
    out_im = np.empty(g)
    errs = np.empty(g)
    u = 2.0**-53
    absum = 0.0
    wsum = 0.0
    for j in range(n):
        a = np.sqrt(coef_re[j] ** 2 + coef_im[j] ** 2)
        absum += a
        wsum += j * a
    for i in range(g):
        zr = np.cos(thetas[i])
        zi = np.sin(thetas[i])
        ar = 0.0
        ai = 0.0
        for j in range(n - 1, -1, -1):
            tr = ar * zr - ai * zi + coef_re[j]
            ai = ar * zi + ai * zr + coef_im[j]
            ar = tr
        out_re[i] = ar
        out_im[i] = ai
        errs[i] = 2.0 * u * ((4.0 * n + 4.0) * absum + 2.0 * wsum)
    return out_re, out_im, errs


def _horner_circle_vec(coef_re, coef_im, thetas):
    n = coef_re.shape[0]
    z = np.exp(1j * thetas)
    acc = np.zeros(thetas.shape[0], dtype=np.complex128)
    coef = coef_re + 1j * coef_im
    for j in range(n - 1, -1, -1):
        acc = acc * z + coef[j]
    mags = np.abs(coef)
    err = 2.0 * UNIT_ROUNDOFF * ((4.0 * n + 4.0) * mags.sum() + 2.0 * (np.arange(n) * mags).sum())
    return acc.real.copy(), acc.imag.copy(), np.full(thetas.shape[0], err)


def horner_circle(coefs, thetas, backend: str | None = None):
    """Evaluate ``sum c_j z^j`` at ``z = exp(i theta)``; returns (values, error bounds)."""
    coefs = np.asarray(coefs, dtype=np.complex128)
    thetas = np.ascontiguousarray(thetas, dtype=np.float64)
    re = np.ascontiguousarray(coefs.real)
    im = np.ascontiguousarray(coefs.imag)
    if _pick(backend) == "numba":
        vr, vi, err = _horner_circle_loop(re, im, thetas)
    else:
        vr, vi, err = _horner_circle_vec(re, im, thetas)
    return vr + 1j * vi, err


# ------------------------------------------------------------------- Aberth


@njit
def _aberth_loop(coef, z, maxiter, tol):
    n = z.shape[0]
    deg = coef.shape[0] - 1
    for it in range(maxiter):
        worst = 0.0
        for i in range(n):
            zi = z[i]
            p = coef[deg] + 0j
            dp = 0j
            for j in range(deg - 1, -1, -1):
                dp = dp * zi + p
                p = p * zi + coef[j]
            if p == 0:
                continue
            ratio = p / dp
            acc = 0j
            for j in range(n):
                if j != i:
                    acc += 1.0 / (zi - z[j])
            corr = ratio / (1.0 - ratio * acc)
            z[i] = zi - corr
            scale = abs(z[i])
            if scale < 1e-300:
                scale = 1e-300
            rel = abs(corr) / scale
            if rel > worst:
                worst = rel
        if worst < tol:
            return z, it + 1, True
    return z, maxiter, False


def _aberth_vec(coef, z, maxiter, tol):
    deg = coef.shape[0] - 1
    for it in range(maxiter):
        p = np.full(z.shape, coef[deg], dtype=np.complex128)
        dp = np.zeros_like(z)
        for j in range(deg - 1, -1, -1):
            dp = dp * z + p
            p = p * z + coef[j]
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        acc = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(p == 0, 0.0, p / dp)
            corr = ratio / (1.0 - ratio * acc)
        corr = np.where(np.isfinite(corr), corr, 0.0)
        z = z - corr
        rel = np.abs(corr) / np.maximum(np.abs(z), 1e-300)
        if rel.max(initial=0.0) < tol:
            return z, it + 1, True
    return z, maxiter, False


def aberth(coefs, start, maxiter: int = 500, tol: float = 1e-14, backend: str | None = None):
    """Aberth-Ehrlich iteration in complex128; ``coefs`` ascending by degree.

    Returns ``(roots, iterations, converged)``.  The numba path updates in
    Gauss-Seidel order and the numpy path in Jacobi order, so iterates differ
    slightly; both converge to the same root set.
    """
    coefs = np.ascontiguousarray(coefs, dtype=np.complex128)
    z = np.array(start, dtype=np.complex128)
    if _pick(backend) == "numba":
        return _aberth_loop(coefs, z, maxiter, tol)
    return _aberth_vec(coefs, z, maxiter, tol)
