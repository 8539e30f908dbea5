import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from symrh.circlezero import find_roots
from symrh.data import shipped_form_paths
from symrh.formsrc import builtin_newform, load_newform
from symrh.lvalues import CriticalValue, CriticalValueSet, ErrorBudget, critical_values
from symrh.perpoly import (
    DecompositionError,
    DegreeUncertainError,
    build_bundle,
    build_H_M,
    build_h,
    build_P,
    build_Q,
    build_R,
    check_R_functional_equation,
    decomposition_exponents,
    normalizer,
    real_polynomial,
    verify_decomposition,
)

from oracles import incomplete_gamma_completed


@pytest.fixture(scope="module")
def delta():
    return builtin_newform(12, 200)


@pytest.fixture(scope="module")
def delta_m1(delta):
    return critical_values(delta, 1, 128)


@pytest.fixture(scope="module")
def bundle_m1(delta_m1):
    return build_bundle(delta_m1)


@pytest.fixture(scope="module")
def bundle_m2(delta):
    return build_bundle(critical_values(delta, 2, 128))


@pytest.fixture(scope="module")
def bundle_level2():
    fm = load_newform(shipped_form_paths()["2.8.a.a"])
    return build_bundle(critical_values(fm, 2, 128))


@pytest.fixture(autouse=True)
def _prec128():
    mpmath.mp.prec = 128


def synthetic_set(m, k, N, eps, uppers, scale=1):
    """A pairing-consistent CriticalValueSet from arbitrary values at the upper points."""
    W = m * (k - 1)
    vals = {}
    up = [s for s in range(1, W + 1) if 2 * s >= W + 1]
    for s, v in zip(up, uppers):
        v = mpmath.mpf(v) * scale
        if 2 * s == W + 1 and eps == -1:
            v = mpmath.mpf(0)
        vals[s] = CriticalValue(s, v, ErrorBudget(rounding=abs(v) * mpmath.mpf(2) ** -100), "direct")
    for s in range(1, W + 1):
        if s not in vals:
            hi = vals[W + 1 - s]
            vals[s] = CriticalValue(s, eps * hi.value, hi.budget, "reflect")
    return CriticalValueSet(m, k, N, "synthetic", tuple(vals[W - n] for n in range(W)), eps, 128, mpmath.mpf(2) ** -100)


# ---------------------------------------------------------------- R


def test_R_degree(bundle_m1, bundle_m2):
    assert bundle_m1.R.degree == 10
    assert bundle_m2.R.degree == 21 and bundle_m2.P.degree == 21


def test_R_m1_is_classical_period_polynomial(delta, bundle_m1):
    """``r_f(z) = -(k-2)!/(2 pi i)^{k-1} sum (2 pi i z)^n / n! L(k-1-n)`` with L from the oracle."""
    mpmath.mp.prec = 128
    k = 12
    a = [0] + [delta.a(n) for n in range(1, 201)]
    with mpmath.workprec(192):
        L = {}
        for s in range(1, k):
            lam = incomplete_gamma_completed(a, k, 1, s, 1, 200)
            L[s] = lam / ((2 * mpmath.pi) ** -s * mpmath.factorial(s - 1))
        tpi = 2 * mpmath.pi * mpmath.mpc(0, 1)
        for z in (mpmath.mpc("0.3", "0.7"), mpmath.mpc(-1, "0.2"), mpmath.mpf(2)):
            ref = -mpmath.factorial(k - 2) / tpi ** (k - 1) * sum(
                (tpi * z) ** n / mpmath.factorial(n) * L[k - 1 - n] for n in range(k - 1)
            )
            got = bundle_m1.R(z)
            assert abs(got - ref) <= bundle_m1.R.eval_bound(abs(z)) + abs(ref) * mpmath.mpf(2) ** -100


@pytest.mark.parametrize("name", ["bundle_m1", "bundle_m2", "bundle_level2"])
def test_R_functional_equation(name, request):
    b = request.getfixturevalue(name)
    res = check_R_functional_equation(b.R, b.epsilon, b.N)
    assert len(res) == 20
    assert all(r <= a for _, r, a in res)
    # the wrong sign fails
    assert not all(r <= a for _, r, a in check_R_functional_equation(b.R, -b.epsilon, b.N))


def test_R_needs_every_value(delta_m1):
    short = CriticalValueSet(1, 12, 1, "x", delta_m1.values[:-1], 1, 128, delta_m1.target)
    with pytest.raises(ValueError):
        build_R(short)


# ---------------------------------------------------------------- P and Q


def test_normalizer_m1_closed_form():
    mpmath.mp.prec = 128
    for k, N in ((12, 1), (8, 2), (4, 5)):
        want = (2 * mpmath.pi) ** (k - 1) / (math.factorial(k - 2) * mpmath.mpf(N) ** (mpmath.mpf(k - 1) / 2 + 1))
        assert abs(normalizer(1, k, N) / want - 1) < mpmath.mpf(2) ** -120


@pytest.mark.parametrize("name", ["bundle_m1", "bundle_m2", "bundle_level2"])
def test_P_palindrome(name, request):
    b = request.getfixturevalue(name)
    assert b.P.palindrome_violations(b.epsilon) == []
    d = b.P.degree
    for j in range(d + 1):
        assert abs(b.P.coeffs[j] - b.epsilon * b.P.coeffs[d - j]) <= b.P.bounds[j] + b.P.bounds[d - j]


def test_P_coefficients_are_normalized_critical_values(delta_m1, bundle_m1):
    C = bundle_m1.normalizer
    for n in range(11):
        want = C * math.comb(10, n) * delta_m1.completed(11 - n)
        assert abs(bundle_m1.P.coeffs[n] - want) <= bundle_m1.P.bounds[n] + abs(want) * mpmath.mpf(2) ** -110


def test_P_roots_map_to_R_roots(bundle_level2):
    """P(z) = kappa R(z / (i sqrt N)): each root of P lands on a root of R."""
    b = bundle_level2
    mpmath.mp.prec = 128
    rs = find_roots(b.P)
    rN = mpmath.sqrt(b.N)
    scale = b.R.norm1() * mpmath.mpf(2) ** -60
    for z in rs.roots:
        w = z / (mpmath.mpc(0, 1) * rN)
        assert abs(b.R(w)) < scale
        assert abs(abs(w) - 1 / rN) < 1e-20
    # the map stated the other way round does not send roots to roots
    bad = [abs(b.R(z * mpmath.mpc(0, 1) * rN)) for z in rs.roots]
    assert max(bad) > scale


def test_Q_constant_term_is_halved_middle(delta_m1, bundle_m1):
    C = bundle_m1.normalizer
    want = C * math.comb(10, 5) * delta_m1.completed(6) / 2
    assert abs(bundle_m1.Q.coeffs[0] - want) <= bundle_m1.Q.bounds[0] + abs(want) * mpmath.mpf(2) ** -110


def test_Q_degrees(bundle_m1, bundle_m2):
    assert bundle_m1.Q.degree == 5
    assert bundle_m2.Q.degree == 10  # (m(k-1) - 2) / 2, no halved term
    assert bundle_m2.Q.coeffs[0] == bundle_m2.P.coeffs[10]
    fake = real_polynomial([1] * 33)
    assert build_Q(fake, 3, 12).degree == 16


def test_Q_parity_mismatch():
    with pytest.raises(ValueError, match="odd"):
        build_Q(real_polynomial([1] * 22), 1, 23)  # W = 22 is even
    with pytest.raises(ValueError, match="degree"):
        build_Q(real_polynomial([1] * 10), 2, 12)
    assert decomposition_exponents(3, 12) == (16, 16)
    assert decomposition_exponents(2, 12) == (11, 10)


# ---------------------------------------------------------------- decomposition


@pytest.mark.parametrize("name", ["bundle_m1", "bundle_m2", "bundle_level2"])
def test_decomposition_holds(name, request):
    b = request.getfixturevalue(name)
    rep = verify_decomposition(b.P, b.Q, b.m, b.k, b.epsilon)
    assert rep.ok and len(rep.residuals) == b.P.degree + 1


def test_decomposition_residual_m1_regression(bundle_m1):
    rep = verify_decomposition(bundle_m1.P, bundle_m1.Q, 1, 12, 1)
    assert rep.max_residual < 1e-30


def test_decomposition_flipped_sign_fails(bundle_m1):
    with pytest.raises(DecompositionError, match="coefficient"):
        verify_decomposition(bundle_m1.P, bundle_m1.Q, 1, 12, -1)


# ---------------------------------------------------------------- H, M, h


def test_H_leading_coefficient_and_M_terms():
    mpmath.mp.prec = 128
    for m, k, N in ((1, 12, 1), (3, 20, 2), (5, 30, 3)):
        H, M = build_H_M(m, k, N)
        d = (m * (k - 1) - 1) // 2
        assert H.degree == d and M.degree == d
        assert abs(H.coeffs[-1] - mpmath.mpf(1) / N) < mpmath.mpf(2) ** -120
        nz = [j for j, c in enumerate(M.coeffs) if c != 0]
        assert nz == [d - 1, d]
        diff, _ = H.residual(M)
        assert all(diff[j] == 0 for j in (d - 1, d))
        assert all(diff[j] == H.coeffs[j] for j in range(d - 1))


def test_M_m1_root():
    mpmath.mp.prec = 128
    k, N = 12, 4
    _, M = build_H_M(1, k, N)
    assert abs(M.coeffs[-2] - 2 * mpmath.pi * mpmath.mpf(N) ** -1.5) < 1e-35
    rs = find_roots(M)
    assert rs.zero_multiplicity == (k - 2) // 2 - 1
    nonzero = [z for z in rs.roots if z != 0]
    assert len(nonzero) == 1 and abs(nonzero[0] + mpmath.pi) < 1e-30


def test_H_variants_for_m1():
    mpmath.mp.prec = 128
    a, _ = build_H_M(1, 16, 1, variant="printed")
    b, _ = build_H_M(1, 16, 1, variant="exact")
    for x, y in zip(a.coeffs, b.coeffs):
        assert abs(x - y) <= abs(x) * mpmath.mpf(2) ** -110
    # at N > 1 only the printed constant term differs (N power of the boundary term)
    a, _ = build_H_M(1, 16, 3, variant="printed")
    b, _ = build_H_M(1, 16, 3, variant="exact")
    for x, y in zip(a.coeffs[1:], b.coeffs[1:]):
        assert abs(x - y) <= abs(x) * mpmath.mpf(2) ** -110
    assert abs(a.coeffs[0] / b.coeffs[0] - mpmath.mpf(3) ** (-mpmath.mpf(15) / 2 + mpmath.mpf(7) / 2)) < 1e-30


def test_H_parity_guards():
    with pytest.raises(ValueError):
        build_H_M(2, 12, 1)
    with pytest.raises(ValueError):
        build_h(3, 12, 1)
    with pytest.raises(ValueError):
        build_H_M(3, 12, 1, variant="other")
    assert build_h(2, 12, 1).degree == 10


def test_degree_must_be_certain():
    with pytest.raises(DegreeUncertainError):
        real_polynomial([1, 1e-40], [0, 1e-30])


# ---------------------------------------------------------------- properties on synthetic values


_params = st.sampled_from([(1, 4, 1), (1, 8, 2), (2, 6, 1), (2, 4, 3), (3, 4, 2), (3, 6, 5)])


@given(p=_params, eps=st.sampled_from([1, -1]), data=st.data())
def test_synthetic_bundles_satisfy_identities(p, eps, data):
    mpmath.mp.prec = 128
    m, k, N = p
    W = m * (k - 1)
    count = sum(1 for s in range(1, W + 1) if 2 * s >= W + 1)
    uppers = data.draw(st.lists(st.floats(0.05, 20), min_size=count, max_size=count))
    b = build_bundle(synthetic_set(m, k, N, eps, uppers))
    assert b.P.palindrome_violations(eps) == []
    assert verify_decomposition(b.P, b.Q, m, k, eps).ok
    assert all(r <= a for _, r, a in check_R_functional_equation(b.R, eps, N, points=5))


@given(p=_params, eps=st.sampled_from([1, -1]), scale=st.floats(1e-3, 1e3), data=st.data())
def test_scaling_values_scales_P_and_Q(p, eps, scale, data):
    mpmath.mp.prec = 128
    m, k, N = p
    W = m * (k - 1)
    count = sum(1 for s in range(1, W + 1) if 2 * s >= W + 1)
    uppers = data.draw(st.lists(st.floats(0.05, 20), min_size=count, max_size=count))
    b1 = build_bundle(synthetic_set(m, k, N, eps, uppers))
    b2 = build_bundle(synthetic_set(m, k, N, eps, uppers, scale=mpmath.mpf(scale)))
    for x, y, e in zip(b1.P.coeffs, b2.P.coeffs, b2.P.bounds):
        assert abs(y - scale * x) <= e + abs(y) * mpmath.mpf(2) ** -100
    for x, y, e in zip(b1.Q.coeffs, b2.Q.coeffs, b2.Q.bounds):
        assert abs(y - scale * x) <= e + abs(y) * mpmath.mpf(2) ** -100
    assert verify_decomposition(b2.P, b2.Q, m, k, eps).ok
