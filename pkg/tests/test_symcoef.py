import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from symrh.formsrc import builtin_newform, load_newform
from symrh.data import shipped_form_paths
from symrh.symcoef import (
    DeligneBoundError,
    InsufficientCoefficientsError,
    coefficient_bound_violations,
    divisor_power,
    divisor_power_upto,
    local_factor_coeffs,
    multiplicativity_violations,
    satake,
    sym_coeffs,
    tail_bound,
    zeta_interval,
)

from oracles import local_coeffs_monomial, ordered_factorizations


def test_satake_examples():
    mpmath.mp.prec = 128
    sp = satake(0, 2, 12, False)
    r = mpmath.sqrt(2) ** 11
    assert abs(sp.alpha - 1j * r) < 1e-30 and abs(sp.beta + 1j * r) < 1e-30
    sp = satake(-24, 2, 12, False)
    assert abs(sp.alpha + sp.beta + 24) < 1e-30
    assert abs(sp.alpha * sp.beta - 2048) < 1e-28
    assert abs(abs(sp.alpha) - r) < 1e-30
    sp = satake(8, 2, 8, True)
    assert sp.alpha == 8 and sp.beta == 0 and sp.ramified
    with pytest.raises(DeligneBoundError):
        satake(100, 2, 12, False)


def test_local_factor_examples():
    mpmath.mp.prec = 128
    sp = satake(-24, 2, 12, False)
    c = local_factor_coeffs(sp, 1, 3)
    assert c[0] == 1
    assert abs(c[2] - (24**2 - 2**11)) < 1e-25
    c2 = local_factor_coeffs(sp, 2, 2)
    assert abs(c2[1] - (-1472)) < 1e-25
    lam = local_factor_coeffs(sp, 2, 2, normalized=True, k=12)
    assert abs(lam[1] + mpmath.mpf("0.71875")) < 1e-30


@given(st.integers(-100, 100), st.sampled_from([2, 3, 5, 7]), st.integers(1, 4), st.integers(0, 6))
def test_local_factor_symmetric_in_roots(ap, p, m, depth):
    mpmath.mp.prec = 96
    k = 12
    if ap * ap > 4 * p ** (k - 1):
        return
    sp = satake(ap, p, k, False)
    swapped = type(sp)(sp.p, sp.beta, sp.alpha, False)
    a = local_factor_coeffs(sp, m, depth)
    b = local_factor_coeffs(swapped, m, depth)
    oracle = local_coeffs_monomial(sp.alpha, sp.beta, m, depth)
    for x, y, z in zip(a, b, oracle):
        scale = 1 + abs(z)
        assert abs(x - y) < 1e-20 * scale and abs(x - z) < 1e-20 * scale


def test_sym_coeffs_examples():
    fm = builtin_newform(12, 60)
    sc = sym_coeffs(fm, 2, 60, 128)
    mpmath.mp.prec = 128
    assert sc[1] == 1
    assert abs(sc[2] + mpmath.mpf("0.71875")) < mpmath.mpf(2) ** -120
    assert not multiplicativity_violations(sc, [(2, 3), (4, 9), (5, 12), (7, 8)])
    assert abs(sc[6] - sc[2] * sc[3]) < mpmath.mpf(2) ** -118
    with pytest.raises(InsufficientCoefficientsError, match="n <= 61"):
        sym_coeffs(fm, 2, 61, 128)


def test_sym_coeffs_majorant_and_level_two():
    for fm in (builtin_newform(16, 3000), load_newform(shipped_form_paths()["2.8.a.a"]).truncated(3000)):
        for m in (1, 2, 3):
            sc = sym_coeffs(fm, m, 3000, 96)
            assert coefficient_bound_violations(sc) == []


def test_sym_coeffs_quadratic_form():
    fm = load_newform(shipped_form_paths()["1.30.a.a"]).truncated(500)
    sc = sym_coeffs(fm, 3, 500, 128)
    assert coefficient_bound_violations(sc) == []
    # m = 1 reproduces a(n)/n^{29/2}
    sc1 = sym_coeffs(fm, 1, 500, 128)
    mpmath.mp.prec = 128
    for n in (2, 3, 10, 97, 500):
        assert abs(sc1[n] - fm.a_real(n) / mpmath.mpf(n) ** mpmath.mpf(14.5)) < mpmath.mpf(2) ** -110


def test_divisor_power_examples():
    assert all(divisor_power(w, 1) == 1 for w in range(1, 8))
    assert divisor_power(2, 6) == 4
    assert divisor_power(3, 4) == 6
    assert divisor_power(1, 97) == 1


def test_divisor_power_convolution_recursion():
    for w in range(2, 6):
        prev = divisor_power_upto(w - 1, 500)
        cur = divisor_power_upto(w, 500)
        for n in range(1, 501):
            assert cur[n] == sum(prev[d] for d in range(1, n + 1) if n % d == 0)
            assert cur[n] == divisor_power(w, n)


def test_zeta_interval_contains_zeta():
    for s in ("1.25", "2", "3.5", "30"):
        z = zeta_interval(mpmath.mpf(s), 200)
        with mpmath.workprec(260):
            ref = mpmath.zeta(mpmath.mpf(s))
        assert z.a <= ref <= z.b
        assert z.delta < mpmath.mpf(2) ** -180


def test_tail_bound_examples():
    b = tail_bound(0, 12, 2, 1)
    assert abs(b - (mpmath.zeta(2) - 1)) < 1e-15
    assert b >= mpmath.zeta(2) - 1
    with pytest.raises(ValueError):
        tail_bound(1, 12, 1, 10)


def test_tail_bound_sigma30_regression():
    # The first omitted term alone is d_{m+1}(10001) 10001^{-30} with
    # 10001 = 73 * 137, so no bound below 1e-120 can be valid; the locked
    # values sit just above the sum of the first few thousand omitted terms.
    for m, locked in ((0, "3.4433e-118"), (1, "3.5661e-117"), (3, "8.6107e-116")):
        b = tail_bound(m, 12, 30, 10**4)
        with mpmath.workprec(700):
            first = divisor_power(m + 1, 10001) * mpmath.mpf(10001) ** -30
            partial = sum(
                divisor_power(m + 1, n) * mpmath.mpf(n) ** -30 for n in range(10001, 14001)
            )
        assert b >= partial > first
        assert abs(b / mpmath.mpf(locked) - 1) < 1e-3


def test_tail_bound_monotone_in_x():
    vals = [tail_bound(2, 12, mpmath.mpf("1.5"), X) for X in (1, 10, 100, 1000, 4000, 9000)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 0
