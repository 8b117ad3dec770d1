from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arithcode.exact import (
    DomainError,
    as_bits,
    as_rational,
    binary_expansion,
    dyadic_value,
    format_rational,
    parse_rational,
)


def test_arithmetic_examples():
    assert F(1, 9) + F(2, 27) == F(5, 27)
    assert F(1, 3) * 0 == 0
    assert F(19, 81) + F(1, 3) * F(8, 81) == F(65, 243)
    with pytest.raises(ZeroDivisionError):
        F(1, 3) / F(0)


@given(st.integers(), st.integers(min_value=1, max_value=2**256))
def test_canonical_form(num, den):
    r = F(num, den)
    assert r.denominator > 0
    from math import gcd

    assert gcd(abs(r.numerator), r.denominator) == 1


@given(
    st.integers(-(2**256), 2**256),
    st.integers(1, 2**256),
    st.integers(-(2**256), 2**256),
    st.integers(1, 2**256),
)
def test_exactness_against_cross_multiplication(a, b, c, d):
    x, y = F(a, b), F(c, d)
    s, prod = x + y, x * y
    assert s.numerator * b * d == (a * d + c * b) * s.denominator
    assert prod.numerator * b * d == a * c * prod.denominator
    if c:
        quo = x / y
        assert quo.numerator * b * c == a * d * quo.denominator


@pytest.mark.parametrize(
    "r, k, bits",
    [
        (F(179, 729), 10, "0011111011"),
        (F(65, 243), 10, "0100010001"),
        (F(1, 2), 3, "100"),
        (F(0), 4, "0000"),
        (F(3, 8), 5, "01100"),
    ],
)
def test_binary_expansion(r, k, bits):
    assert binary_expansion(r, k) == bits


@pytest.mark.parametrize("r", [F(1), F(-1, 3), F(3, 2)])
def test_binary_expansion_domain(r):
    with pytest.raises(DomainError):
        binary_expansion(r, 3)


def test_binary_expansion_needs_positive_count():
    with pytest.raises(DomainError):
        binary_expansion(F(1, 3), 0)


@pytest.mark.parametrize("bits, value", [("01", F(1, 4)), ("010000", F(1, 4)), ("", F(0)), ("111", F(7, 8))])
def test_dyadic_value(bits, value):
    assert dyadic_value(bits) == value


@given(st.text(alphabet="01", min_size=1, max_size=80))
def test_expansion_roundtrip(bits):
    assert binary_expansion(dyadic_value(bits), len(bits)) == bits


@given(
    st.fractions(min_value=0, max_value=F(999999, 1000000)),
    st.fractions(min_value=0, max_value=F(999999, 1000000)),
    st.integers(1, 60),
)
def test_expansion_monotone(r, s, k):
    if r > s:
        r, s = s, r
    assert binary_expansion(r, k) <= binary_expansion(s, k)


def test_rational_text_format():
    assert parse_rational("2/3") == F(2, 3)
    assert parse_rational(" 5 ") == F(5)
    assert parse_rational("4/6") == F(2, 3)
    assert format_rational(F(4, 6)) == "2/3"
    assert format_rational(F(3)) == "3"
    for bad in ("1/0", "a/b", "1.5", ""):
        with pytest.raises(DomainError):
            parse_rational(bad)


def test_floats_are_refused():
    with pytest.raises(TypeError):
        as_rational(0.5)
    assert as_rational("1/3") == F(1, 3)


def test_as_bits():
    assert as_bits([0, 1, 1]) == "011"
    with pytest.raises(DomainError):
        as_bits("0120")
    with pytest.raises(DomainError):
        as_bits([0, 2])
