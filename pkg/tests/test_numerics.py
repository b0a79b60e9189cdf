from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from coinduel.numerics import (
    CertifiedSign,
    InvalidProbability,
    Method,
    PrecisionConfig,
    Sign,
    UncertifiedSign,
    certify_sign,
    format_probability,
    parse_probability,
)


@pytest.mark.parametrize(
    "text, value",
    [("0.18", Fraction(9, 50)), ("1e-5", Fraction(1, 100000)), ("1/3", Fraction(1, 3)),
     ("1e-100", Fraction(1, 10**100)), (".5", Fraction(1, 2)), ("2E-3", Fraction(1, 500))],
)
def test_parse_examples(text, value):
    assert parse_probability(text) == value


@pytest.mark.parametrize("text", ["0", "1", "1.5", "-0.2", "abc", "1/0", "3/2", "0.1.2", "nan", "inf", ""])
def test_parse_rejects(text):
    with pytest.raises(InvalidProbability):
        parse_probability(text)


def test_parse_rejects_non_string():
    with pytest.raises(InvalidProbability):
        parse_probability(0.5)


@given(st.integers(1, 10**6), st.integers(0, 12))
def test_decimal_round_trip(num, k):
    den = 10**k
    if not 0 < num < den:
        return
    r = Fraction(num, den)
    assert parse_probability(format_probability(r)) == r


@given(st.fractions(min_value=Fraction(1, 10**9), max_value=Fraction(1) - Fraction(1, 10**9)))
def test_any_rational_round_trip(r):
    if 0 < r < 1:
        assert parse_probability(format_probability(r)) == r


@given(st.integers(-10**30, 10**30), st.integers(1, 10**30), st.integers(-10**30, 10**30), st.integers(1, 10**30))
def test_fraction_arithmetic_matches_cross_multiplication(a, b, c, d):
    x, y = Fraction(a, b), Fraction(c, d)
    assert (x < y) == (a * d < c * b)
    s = x + y
    assert s.numerator * b * d == (a * d + c * b) * s.denominator
    m = x * y
    assert m.numerator * b * d == a * c * m.denominator


def test_certify_well_separated():
    cfg = PrecisionConfig(30, 240)
    assert certify_sign(lambda d: (1.0, 1e-30), cfg).sign is Sign.POSITIVE
    assert certify_sign(lambda d: (-2.5, 0.1), cfg).sign is Sign.NEGATIVE


def test_certify_escalates_to_four_times():
    cfg = PrecisionConfig(20, 1000)
    calls = []

    def ev(digits):
        calls.append(digits)
        return 1e-50, (1.0 if digits < 80 else 1e-60)

    res = certify_sign(ev, cfg)
    assert res.sign is Sign.POSITIVE and res.digits_used == 80
    assert calls == [20, 40, 80]


def test_certify_exhausts():
    with pytest.raises(UncertifiedSign) as exc:
        certify_sign(lambda d: (0.0, 1.0), PrecisionConfig(10, 40))
    assert exc.value.digits == 40


def test_precision_config_validation():
    with pytest.raises(ValueError):
        PrecisionConfig(50, 10)
    with pytest.raises(ValueError):
        PrecisionConfig(10, 100, 1)
    assert list(PrecisionConfig(10, 70).schedule()) == [10, 20, 40, 70]


def test_certified_sign_invariants():
    with pytest.raises(ValueError):
        CertifiedSign(Sign.ZERO, Method.QUADRATURE, 30)
    with pytest.raises(ValueError):
        CertifiedSign(Sign.POSITIVE, Method.EXACT_RATIONAL, 10)
    assert CertifiedSign.exact(Fraction(0)).sign is Sign.ZERO
