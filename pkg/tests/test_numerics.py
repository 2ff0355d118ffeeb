from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gtakagi.numerics import RatInterval, as_rational, format_rational, parse_rational, rat

fractions = st.fractions(max_denominator=10 ** 6)


def intervals():
    return st.tuples(fractions, fractions).map(lambda t: RatInterval(min(t), max(t)))


def test_rat_is_canonical():
    assert rat(2, 4) == Fraction(1, 2)
    assert rat(-3, -6) == Fraction(1, 2)
    with pytest.raises(ValueError):
        rat(1, 0)


@pytest.mark.parametrize("text,value", [
    ("1/3", Fraction(1, 3)), ("-2/4", Fraction(-1, 2)), ("7", Fraction(7)),
    ("0.125", Fraction(1, 8)), ("−1/2", Fraction(-1, 2)), (" 3/9 ", Fraction(1, 3)),
])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["", "abc", "1/0", "1//2", "nan?"])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_as_rational_rejects_floats():
    with pytest.raises(TypeError):
        as_rational(0.5)
    assert as_rational("2/6") == Fraction(1, 3)
    assert as_rational(4) == Fraction(4)


@given(fractions)
def test_format_parse_roundtrip(q):
    assert parse_rational(format_rational(q)) == q


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        RatInterval(1, 0)


@given(intervals(), intervals())
def test_addition_contains_pointwise_sums(I, J):
    S = I + J
    assert I.lo + J.lo in S and I.hi + J.hi in S and I.midpoint + J.midpoint in S
    assert S.width == I.width + J.width


@given(intervals(), fractions)
def test_scale_by_negative_flips(I, c):
    S = I.scale(c)
    assert I.lo * c in S and I.hi * c in S
    assert S.width == abs(c) * I.width


@given(intervals(), intervals())
def test_intersection_and_hull(I, J):
    H = I.hull(J)
    assert I in H and J in H
    K = I.intersect(J)
    if K is None:
        assert I.hi < J.lo or J.hi < I.lo
    else:
        assert K in I and K in J


@given(intervals(), fractions)
def test_distance_to(I, x):
    d = I.distance_to(x)
    assert d >= 0
    assert (d == 0) == (x in I)


def test_str_and_point():
    assert str(RatInterval(Fraction(-1, 2), 2)) == "[-1/2, 2]"
    assert RatInterval.point(3).is_point()
    assert RatInterval.around(1, Fraction(1, 4)) == RatInterval(Fraction(3, 4), Fraction(5, 4))
    assert RatInterval.hull_of([3, -1, 2]) == RatInterval(-1, 3)
    assert -RatInterval(1, 2) == RatInterval(-2, -1)
