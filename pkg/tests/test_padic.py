from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from e0struct.errors import PrecisionError
from e0struct.padic import (
    INF,
    PadicNumber,
    arithmetic,
    from_rational,
    is_prime,
    parse_rational,
    residue,
    valuation_rational,
)

PRIMES = st.sampled_from([2, 3, 5, 7, 11])
NONZERO = st.fractions(max_denominator=500).filter(lambda q: q != 0)


def test_from_rational_splits_valuation_and_unit():
    x = from_rational(Fraction(18), 1, 3, 4)
    assert (x.valuation, x.unit, x.precision) == (2, 2, 4)
    assert str(x) == "2*3^2 + O(3^6)"


def test_negative_valuation_and_fraction_input():
    x = PadicNumber.from_rational(1, 10, 5, 3)
    assert x.valuation == -1
    assert x.unit * 2 % 125 == 1


def test_exact_zero():
    z = from_rational(0, 1, 7)
    assert z.is_exact_zero and z.valuation == INF
    assert str(z) == "0"
    assert (z + from_rational(3, 1, 7)).unit == 3


def test_cancellation_leaves_an_inexact_zero():
    x = from_rational(1, 1, 5, 4)
    y = from_rational(1 + 5**6, 1, 5, 4)
    d = x - y
    assert not d.is_exact_zero
    assert d.precision == 0 and d.valuation == 4
    assert str(d) == "O(5^4)"


def test_equality_queries_state_digits():
    x = from_rational(1, 1, 5, 4)
    y = from_rational(1 + 5**6, 1, 5, 4)
    assert x.is_equal(y, 4)
    with pytest.raises(PrecisionError):
        x.is_equal(y, 5)
    assert not x.is_equal(2, 1)


def test_division_by_inexact_zero_is_refused():
    x = from_rational(3, 1, 3, 2)
    with pytest.raises(PrecisionError):
        from_rational(1, 1, 3) / (x - x)
    with pytest.raises(ZeroDivisionError):
        x / from_rational(0, 1, 3)


def test_residue_and_precision_guard():
    x = from_rational(-1, 1, 2, 5)
    assert x.residue(5) == 31
    with pytest.raises(PrecisionError):
        x.residue(6)
    with pytest.raises(ValueError):
        from_rational(1, 2, 2).residue(1)


def test_with_precision_drops_digits():
    x = from_rational(100, 1, 5, 6)
    assert x.with_precision(3).absolute_precision == 3
    assert x.with_precision(2).precision == 0


def test_to_dict():
    assert from_rational(12, 1, 2, 3).to_dict() == {"prime": 2, "valuation": 2, "unit": 3, "precision": 3}
    assert from_rational(0, 1, 2).to_dict()["valuation"] == "inf"


def test_prime_mismatch():
    with pytest.raises(ValueError):
        arithmetic("add", from_rational(1, 1, 2), from_rational(1, 1, 3))
    with pytest.raises(ValueError):
        arithmetic("pow", from_rational(1, 1, 2), from_rational(1, 1, 2))


def test_parse_rational():
    assert parse_rational(" -5/6 ") == Fraction(-5, 6)
    assert parse_rational("17") == 17
    for bad in ("", "x", "1/0", "1.5"):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_small_helpers():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert valuation_rational(Fraction(9, 2), 3) == 2
    assert residue(Fraction(1, 3), 7) == 5


@settings(max_examples=200, deadline=None)
@given(PRIMES, NONZERO, NONZERO, st.sampled_from(["add", "sub", "mul", "div"]))
def test_arithmetic_matches_rationals(p, q1, q2, op):
    m = 8
    x, y = from_rational(q1, 1, p, m), from_rational(q2, 1, p, m)
    exact = {"add": q1 + q2, "sub": q1 - q2, "mul": q1 * q2, "div": q1 / q2}[op]
    got = arithmetic(op, x, y)
    if exact == 0:
        assert got.precision == 0
        return
    # every digit the result claims to know must be right
    assert got.is_equal(exact, got.absolute_precision)
    if op in ("mul", "div"):
        assert got.precision == m
    else:
        assert got.absolute_precision == min(x.absolute_precision, y.absolute_precision)


@settings(max_examples=100, deadline=None)
@given(PRIMES, NONZERO, st.integers(min_value=0, max_value=6))
def test_power_matches_repeated_product(p, q, n):
    x = from_rational(q, 1, p, 6)
    assert (x**n).is_equal(Fraction(q) ** n, x.valuation * n + 6)
