import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from symrh.formsrc import (
    BUILTIN_WEIGHTS,
    IntegerSeries,
    LevelNotSquarefreeError,
    MalformedFileError,
    NewformData,
    NotNormalizedError,
    OddWeightError,
    QuadraticElement,
    builtin_newform,
    eisenstein_series,
    kronecker_multiply,
    load_newform,
    save_newform,
    validate_hecke,
)
from symrh.data import shipped_form_paths

from oracles import delta_product, sigma_naive


def test_eisenstein_examples():
    assert eisenstein_series(4, 2).coeffs == (1, 240, 2160)
    assert eisenstein_series(6, 2).coeffs == (1, -504, -16632)
    assert eisenstein_series(4, 0).coeffs == (1,)
    with pytest.raises(ValueError):
        eisenstein_series(8, 3)


def test_eisenstein_matches_divisor_sums():
    e4, e6 = eisenstein_series(4, 2000), eisenstein_series(6, 2000)
    for n in range(1, 2001, 7):
        assert e4[n] == 240 * sigma_naive(3, n)
        assert e6[n] == -504 * sigma_naive(5, n)


def test_builtin_examples():
    d = builtin_newform(12, 2)
    assert d.coeffs == (1, -24)
    assert builtin_newform(12, 1).coeffs == (1,)
    assert builtin_newform(16, 2).coeffs == (1, 216)
    with pytest.raises(ValueError):
        builtin_newform(24, 5)
    with pytest.raises(ValueError):
        builtin_newform(14, 5)


def test_delta_matches_product_formula():
    ref = delta_product(300)
    d = builtin_newform(12, 300)
    assert list(d.coeffs) == ref[1:301]


@pytest.mark.parametrize("k", BUILTIN_WEIGHTS)
def test_builtin_forms_pass_hecke(k):
    rep = validate_hecke(builtin_newform(k, 2000))
    assert rep.ok, rep.failures[:3]
    assert rep.count("multiplicative") > 0 and rep.count("deligne") > 0


def test_hecke_examples():
    d = builtin_newform(12, 10)
    assert d.a(6) == d.a(2) * d.a(3) == -6048
    assert d.a(4) == d.a(2) ** 2 - 2**11 == -1472
    assert validate_hecke(d).ok
    bad = list(d.coeffs)
    bad[5] += 1
    rep = validate_hecke(NewformData(1, 12, "bad", tuple(bad), None, "file"))
    assert any(c.kind == "multiplicative" and c.n == 6 for c in rep.failures)


def test_hecke_needs_six_coefficients():
    with pytest.raises(ValueError):
        validate_hecke(builtin_newform(12, 5))


@given(
    st.lists(st.integers(-(10**30), 10**30), min_size=1, max_size=25),
    st.lists(st.integers(-(10**6), 10**6), min_size=1, max_size=25),
    st.integers(0, 50),
)
def test_kronecker_matches_schoolbook(a, b, order):
    ref = [sum(a[i] * b[j - i] for i in range(len(a)) if 0 <= j - i < len(b)) for j in range(order + 1)]
    got = kronecker_multiply(a, b, order)
    assert got == ref


def test_series_exact_division():
    s = IntegerSeries((2, 4, 6))
    assert s.exact_div(2).coeffs == (1, 2, 3)
    with pytest.raises(ArithmeticError):
        s.exact_div(4)


def _write(tmp_path: Path, doc: dict) -> Path:
    p = tmp_path / "f.json"
    p.write_text(json.dumps(doc))
    return p


def test_load_examples(tmp_path):
    fm = load_newform(_write(tmp_path, {"level": 1, "weight": 12, "label": "d", "coefficients": ["1", "-24", "252"]}))
    assert (fm.level, fm.weight, fm.coeff_cutoff) == (1, 12, 3)
    assert fm.source == "file"
    with pytest.raises(NotNormalizedError, match="not normalized"):
        load_newform(_write(tmp_path, {"level": 1, "weight": 12, "coefficients": ["2", "1"]}))
    with pytest.raises(LevelNotSquarefreeError, match="level 4 not squarefree"):
        load_newform(_write(tmp_path, {"level": 4, "weight": 12, "coefficients": ["1"]}))
    with pytest.raises(OddWeightError):
        load_newform(_write(tmp_path, {"level": 1, "weight": 11, "coefficients": ["1"]}))
    with pytest.raises(MalformedFileError):
        load_newform(_write(tmp_path, {"level": 1, "coefficients": ["1"]}))
    with pytest.raises(MalformedFileError):
        load_newform(_write(tmp_path, {"level": 1, "weight": 12, "coefficients": ["1", "x"]}))
    bad = tmp_path / "broken.json"
    bad.write_text('{"level": 1, "weight"')
    with pytest.raises(MalformedFileError):
        load_newform(bad)


def test_roundtrip_builtin(tmp_path):
    fm = builtin_newform(18, 400)
    save_newform(fm, tmp_path / "x.json")
    back = load_newform(tmp_path / "x.json")
    assert back.coeffs == fm.coeffs and back.epsilon_hint_m1 == fm.epsilon_hint_m1
    save_newform(back, tmp_path / "y.json")
    assert (tmp_path / "x.json").read_bytes() == (tmp_path / "y.json").read_bytes()


def test_quadratic_field_roundtrip(tmp_path):
    path = shipped_form_paths()["1.30.a.a"]
    fm = load_newform(path)
    assert fm.field_sqrt == 51349
    assert fm.a(2) == QuadraticElement(Fraction(4320), Fraction(-96), 51349)
    save_newform(fm, tmp_path / "q.json")
    assert load_newform(tmp_path / "q.json").coeffs == fm.coeffs


def test_quadratic_sign_exact():
    x = QuadraticElement(Fraction(7), Fraction(-1), 48)  # 7 - sqrt 48 > 0
    assert x.sign(1) == 1 and x.sign(-1) == 1
    y = QuadraticElement(Fraction(6), Fraction(-1), 48)  # 6 - 6.93 < 0
    assert y.sign(1) == -1
    assert (x * x.inverse()) == 1


@pytest.mark.parametrize("label", ["2.8.a.a", "3.6.a.a", "5.4.a.a", "1.30.a.a", "2.30.a.a", "2.30.a.b"])
def test_shipped_forms_validate(label):
    fm = load_newform(shipped_form_paths()[label])
    rep = validate_hecke(fm.truncated(1500))
    assert rep.ok, rep.failures[:3]
