from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from detineq.exact import (
    I,
    ONE,
    ZERO,
    GaussianRational,
    InputError,
    compare,
    format_entry,
    format_rational,
    modulus_squared,
    normalize,
    parse_entry,
    parse_rational,
)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=40)
gaussians = st.builds(GaussianRational, fractions, fractions)


def as_pair(z):
    return z.real, z.imag


def test_normalize_reduces_and_fixes_sign():
    assert normalize(6, -4) == Fraction(-3, 2)
    with pytest.raises(InputError):
        normalize(1, 0)


@given(fractions, fractions)
def test_compare_matches_fraction_ordering(a, b):
    assert compare(a, b) == (a > b) - (a < b)


def test_gaussian_is_reduced():
    z = GaussianRational.from_parts(4, -6, -8)
    assert z.parts == (-2, 3, 4)
    assert GaussianRational.from_parts(0, 0, 7).parts == (0, 0, 1)


@given(gaussians, gaussians)
def test_arithmetic_matches_pair_oracle(z, w):
    # oracle: arithmetic on (re, im) pairs of Fractions
    a, b = as_pair(z)
    c, d = as_pair(w)
    assert as_pair(z + w) == (a + c, b + d)
    assert as_pair(z - w) == (a - c, b - d)
    assert as_pair(z * w) == (a * c - b * d, a * d + b * c)
    if w:
        q = z / w
        assert q * w == z


@given(gaussians)
def test_conjugate_and_modulus(z):
    assert z * z.conjugate() == modulus_squared(z)
    assert (z * z.conjugate()).is_real()


def test_equality_with_plain_numbers():
    assert GaussianRational(Fraction(3, 4)) == Fraction(3, 4)
    assert GaussianRational(2) == 2
    assert I * I == -1
    assert ONE + ZERO == 1
    assert complex(GaussianRational(1, -2)) == complex(1, -2)
    assert hash(GaussianRational(5)) == hash(Fraction(5))


def test_power():
    assert (ONE + I) ** 2 == 2 * I
    assert (ONE + I) ** -2 == GaussianRational(0, Fraction(-1, 2))


def test_parse_and_format_rational():
    assert parse_rational("-3/4") == Fraction(-3, 4)
    assert parse_rational("6/8") == Fraction(3, 4)
    assert format_rational(Fraction(2)) == "2/1"
    for bad in ["3", "1/0", "a/b", "1.5/2", ""]:
        with pytest.raises(InputError):
            parse_rational(bad)


def test_parse_entry_forms():
    assert parse_entry("3/5+4/5i") == GaussianRational(Fraction(3, 5), Fraction(4, 5))
    assert parse_entry("0/1-1/2i") == GaussianRational(0, Fraction(-1, 2))
    assert parse_entry("7/1") == 7
    with pytest.raises(InputError):
        parse_entry("3/5+i")


@given(gaussians)
def test_entry_round_trip(z):
    assert parse_entry(format_entry(z)) == z
