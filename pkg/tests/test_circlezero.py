import json
import random

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symrh.circlezero import (
    NotSelfInversiveError,
    PreconditionError,
    ZeroCertificate,
    certify_in_disk,
    certify_on_circle,
    count_sign_changes,
    disk_certificate,
    find_roots,
    lalin_smyth_construct,
    planted_h,
    rouche_margin,
    self_inversive_violations,
)
from symrh.perpoly import build_H_M, real_polynomial


@pytest.fixture(autouse=True)
def _prec128():
    mpmath.mp.prec = 128


def poly(*coeffs):
    """Exact real polynomial from coefficients listed constant term first."""
    return real_polynomial([mpmath.mpf(c) for c in coeffs])


# ---------------------------------------------------------------- roots


def test_roots_of_z2_minus_1():
    rs = find_roots(poly(-1, 0, 1))
    got = sorted(float(z.real) for z in rs.roots)
    assert got == [-1.0, 1.0]
    assert all(r == 0 for r in rs.residuals)
    assert rs.max_circle_deviation == 0


def test_planted_degree_30_recovered():
    rng = random.Random(7)
    planted = [mpmath.mpc(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)) for _ in range(30)]
    h = planted_h(planted)
    rs = find_roots(h)
    assert len(rs.roots) == 30
    norm = h.norm1()
    for z, res in zip(rs.roots, rs.residuals):
        assert res < mpmath.ldexp(norm, -64)
    for p in planted:
        j = min(range(30), key=lambda i: abs(rs.roots[i] - p))
        assert rs.radii[j] is not None
        assert abs(rs.roots[j] - p) <= rs.radii[j]


def test_zero_roots_are_split_off():
    rs = find_roots(poly(0, 0, 0, 2, 1))  # z^3 (z + 2)
    assert rs.zero_multiplicity == 3
    assert sum(1 for z in rs.roots if z == 0) == 3
    assert any(abs(z + 2) < 1e-30 for z in rs.roots)


def test_double_root_radius_is_indeterminate():
    rs = find_roots(poly(1, -2, 1))  # (z - 1)^2
    assert any(r is None for r in rs.radii)
    assert not rs.determinate


# ---------------------------------------------------------------- circle


def test_z2_plus_1_certified():
    c = certify_on_circle(poly(1, 0, 1), 1)
    assert c.circle_verdict == "certified" and c.sign_changes == 2
    assert all(abs(abs(z) - 1) < 1e-30 and abs(z.real) < 1e-30 for z in c.roots)


def test_off_circle_palindrome_fails():
    c = certify_on_circle(poly(1, "-2.5", 1), 1)
    assert c.sign_changes == 0
    assert c.circle_verdict == "failed"
    assert c.grid_points < 2**20  # stops once the roots are provably off


def test_odd_degree_antipalindrome():
    c = certify_on_circle(poly(-1, 0, 0, 1), -1)  # z^3 - 1
    assert c.circle_verdict == "certified" and c.sign_changes == 3


def test_not_self_inversive_rejected():
    with pytest.raises(NotSelfInversiveError):
        certify_on_circle(poly(1, 2, 3), 1)
    assert self_inversive_violations(poly(1, 2, 1), 1) == []
    assert self_inversive_violations(poly(1, 2, 1), -1) != []


def test_count_sign_changes_wraps():
    s = np.array([1, 1, -1, -1, 0, 1], dtype=np.int8)
    assert count_sign_changes(s, 1) == 2
    assert count_sign_changes(s, -1) == 3
    assert count_sign_changes(np.zeros(4, dtype=np.int8), 1) == 0


def test_certificate_invariants():
    with pytest.raises(ValueError):
        ZeroCertificate("p", {}, 2, circle_verdict="certified", sign_changes=1)
    with pytest.raises(ValueError):
        ZeroCertificate("p", {}, 2, roots=(mpmath.mpc(1),))
    with pytest.raises(ValueError):
        ZeroCertificate("p", {}, 2, disk_verdict="maybe")


def test_certificate_json_layout():
    c = certify_on_circle(poly(1, 0, 1), 1)
    doc = json.loads(json.dumps(c.to_json(20)))
    assert doc["degree"] == 2 and doc["sign_changes"] == 2
    assert len(doc["roots"]) == 2 and all(len(r) == 2 for r in doc["roots"])
    assert doc["verdicts"]["circle"] == "certified"
    for key in ("poly", "residuals", "max_circle_deviation"):
        assert key in doc


# ---------------------------------------------------------------- disk


def test_disk_examples():
    assert certify_in_disk(poly("-0.5", 1)).verdict == "all-inside"
    assert certify_in_disk(poly(-2, 1)).verdict == "not-all-inside"
    # a root exactly on the circle is never reported inside
    assert certify_in_disk(poly(-1, 1)).verdict != "all-inside"


def test_disk_H_m3_k30_N2():
    H, _ = build_H_M(3, 30, 2)
    res = certify_in_disk(H)
    assert res.verdict == "all-inside" and res.method == "schur-cohn"


def test_disk_certificate_record():
    cert = disk_certificate(poly("0.25", "-1", 1))  # (z - 1/2)^2
    assert cert.disk_verdict == "all-inside"
    assert cert.degree == 2


@settings(max_examples=30)
@given(st.lists(st.tuples(st.floats(-1.4, 1.4), st.floats(-1.4, 1.4)), min_size=1, max_size=8))
def test_disk_verdict_agrees_with_roots(pts):
    planted = [mpmath.mpc(x, y) for x, y in pts]
    if any(abs(abs(z) - 1) < 1e-3 for z in planted):
        return
    h = planted_h(planted)
    res = certify_in_disk(h)
    inside = max(abs(z) for z in planted) < 1
    if res.verdict == "all-inside":
        assert inside
        rs = find_roots(h)
        assert rs.max_modulus < 1
    elif res.verdict == "not-all-inside":
        assert not inside


# ---------------------------------------------------------------- Rouche


def test_rouche_example():
    A = poly("0.1", 0, 0, 0, 0, 1)
    B = poly(0, 0, 0, 0, 0, 1)
    rep = rouche_margin(A, B)
    assert abs(rep.margin - mpmath.mpf("0.9")) < 1e-12  # float samples
    assert rep.positive and rep.certified_margin <= rep.margin


def test_rouche_needs_64_samples():
    with pytest.raises(ValueError):
        rouche_margin(poly(1, 1), poly(0, 1), samples=32)


def test_rouche_negative_margin():
    rep = rouche_margin(poly(2, 1), poly(0, 1))
    assert not rep.positive and rep.margin < 0


def test_rouche_H_M_m3_k30_N2():
    H, M = build_H_M(3, 30, 2)
    assert rouche_margin(H, M).positive


# ---------------------------------------------------------------- self-inversive construction


def test_lalin_smyth_examples():
    p = lalin_smyth_construct([1], 3, 1)
    assert [float(c) for c in p.coeffs] == [1.0, 0.0, 0.0, 1.0]
    assert certify_on_circle(p, 1).circle_verdict == "certified"
    p = lalin_smyth_construct([mpmath.mpf("-0.5"), 1], 2, 1)
    assert [float(c) for c in p.coeffs] == [1.0, -1.0, 1.0]  # z^2 - z + 1
    c = certify_on_circle(p, 1)
    assert c.circle_verdict == "certified"
    assert all(abs(abs(z) - 1) < 1e-30 for z in c.roots)


def test_lalin_smyth_preconditions():
    with pytest.raises(PreconditionError):
        lalin_smyth_construct([-2, 1], 3, 1)  # root 2 outside
    with pytest.raises(PreconditionError):
        lalin_smyth_construct([1], 3, 2)
    with pytest.raises(PreconditionError):
        lalin_smyth_construct([1, 1, 1], 1, 1)


def test_planted_8_roots_lambda_minus_1():
    rng = random.Random(3)
    roots = [mpmath.mpc(*(0.95 * rng.random() * np.array([np.cos(t), np.sin(t)])))
             for t in (rng.uniform(0, 2 * np.pi) for _ in range(8))]
    p = lalin_smyth_construct(planted_h(roots), 10, -1)
    assert certify_on_circle(p, -1).circle_verdict == "certified"


_root = st.tuples(st.floats(0, 0.98), st.floats(0, 2 * np.pi))


@given(
    roots=st.lists(_root, max_size=8),
    extra=st.integers(0, 4),
    phi=st.floats(0, 2 * np.pi),
)
def test_lalin_smyth_always_certifies(roots, extra, phi):
    zs = [mpmath.mpc(r * np.cos(t), r * np.sin(t)) for r, t in roots]
    h = planted_h(zs)
    lam = mpmath.expj(phi)
    p = lalin_smyth_construct(h, h.degree + extra, lam)
    if p.degree < 1:
        return
    c = certify_on_circle(p, lam)
    assert c.circle_verdict == "certified"
    # two-method agreement: every root's error disk meets the circle
    for z, r in zip(c.roots, c.radii):
        if r is not None:
            assert abs(abs(z) - 1) <= r + mpmath.mpf(2) ** -100
