from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gtakagi.decomposition import build_counterexample, build_radix
from gtakagi.derivatives import (
    BinaryExpansion,
    FormulaInapplicable,
    chord_limit_check,
    classify,
    dini,
    local_min_witness,
    parse_binary,
    partial_sum_liminf_limsup,
    shifted_sum_test,
    subdifferential_estimate,
    superdifferential_estimate,
    takagi_superdiff_formula,
)
from gtakagi.evaluation import GeneralizedTakagi, WeightSequence
from gtakagi.numerics import RatInterval

one = WeightSequence.const(1)
alt = WeightSequence.alternating(1)


@pytest.mark.parametrize("x,kind,n0", [
    (Fraction(1, 2), "in_D", 1), (Fraction(1, 3), "generic", None), (Fraction(0), "in_D", 0),
])
def test_classify_radix2(x, kind, n0):
    pc = classify(build_radix(2, 20), x)
    assert (pc.kind, pc.n0) == (kind, n0)


def test_classify_perpetual_midpoint():
    pc = classify(build_radix(3, 10), Fraction(1, 2))
    assert pc.kind == "in_D_tilde" and pc.tilde_levels == tuple(range(11))


def test_dini_takagi_third(takagi):
    est = dini(takagi, Fraction(1, 3), 12)
    # left quotients sit near +2 and right quotients near -1 at 1/3
    assert est.D_minus.distance_to(2) < Fraction(1, 100)
    assert est.d_plus.distance_to(-1) < Fraction(1, 100)
    assert len(est.certified_empty_depths()) >= 10


def test_dini_negated_at_five_sixths(takagi):
    est = dini(takagi.negated(), Fraction(5, 6), 14)
    assert est.D_minus.distance_to(1) < Fraction(1, 4)
    assert est.d_plus.distance_to(2) < Fraction(1, 4)


def test_counterexample_dini_contracts():
    T = GeneralizedTakagi(build_counterexample(40), alt)
    widths = []
    for depth in (4, 8, 12):
        est = dini(T, Fraction(0), depth)
        widths.append(max(abs(est.d_plus_lower), abs(est.d_plus_upper),
                          abs(est.D_minus_lower), abs(est.D_minus_upper)))
    assert widths[0] > widths[1] > widths[2]


@pytest.mark.parametrize("x", [Fraction(1, 2), Fraction(1, 4), Fraction(3, 4)])
@pytest.mark.parametrize("zeta", [0, 1, -1, 10, -10])
def test_local_min_witnesses(takagi, x, zeta):
    assert local_min_witness(takagi, x, Fraction(zeta)).ok


def test_local_min_requires_nonnegative_weights():
    T = GeneralizedTakagi(build_radix(2, 64), alt)
    with pytest.raises(ValueError):
        local_min_witness(T, Fraction(1, 2), Fraction(0))


def test_subdiff_verdicts(takagi):
    assert subdifferential_estimate(takagi, Fraction(1, 3), 12).verdict == "empty-certified"
    assert subdifferential_estimate(takagi, Fraction(1, 2), 12).verdict == "all-R-evidence"
    zero = GeneralizedTakagi(build_radix(2, 64), WeightSequence.const(0))
    res = subdifferential_estimate(zero, Fraction(1, 3), 10)
    assert res.verdict == "derivative-candidate" and res.interval == RatInterval(0, 0)


def test_superdiff_is_negated_subdiff(takagi):
    sup = superdifferential_estimate(takagi, Fraction(1, 3), 14)
    sub = subdifferential_estimate(takagi.negated(), Fraction(1, 3), 14)
    assert sup.verdict == sub.verdict
    assert sup.interval == -sub.interval
    assert Fraction(0) in sup.interval or sup.interval.distance_to(0) < Fraction(1, 50)


@pytest.mark.parametrize("text,value,formula", [
    ("11010(10)", Fraction(5, 6), (-2, -1)),
    ("(01)", Fraction(1, 3), (0, 1)),
    ("10(10)", Fraction(2, 3), (-1, 0)),
])
def test_formula_values(text, value, formula):
    e = parse_binary(text)
    assert e.value == value
    iv = takagi_superdiff_formula(e)
    assert (iv.lo, iv.hi) == formula


def test_formula_needs_alternating_tail():
    with pytest.raises(FormulaInapplicable):
        takagi_superdiff_formula(parse_binary("1(011)"))
    with pytest.raises(ValueError):
        parse_binary("12(0)")


@given(st.lists(st.integers(0, 1), max_size=8), st.lists(st.integers(0, 1), min_size=1, max_size=5))
def test_binary_value_matches_digits(prefix, period):
    e = BinaryExpansion(tuple(prefix), tuple(period))
    approx = sum(Fraction(e.digit(n), 2 ** n) for n in range(1, 60))
    assert 0 <= e.value - approx <= Fraction(1, 2 ** 59)
    assert parse_binary(str(e)) == e


def test_partial_sum_limits():
    lim = partial_sum_liminf_limsup(alt, 40)
    assert (lim.a_est.lo, lim.b_est.hi) == (0, 1)
    assert lim.exact == (0, 1)
    tri = partial_sum_liminf_limsup(WeightSequence.triple_pattern(), 60)
    assert tri.exact == (0, 1)
    assert tri.a_est.lo >= -Fraction(1, 2 ** 8) and tri.b_est.hi <= 1 + Fraction(1, 2 ** 8)


def test_shifted_sum_report():
    d = build_radix(4, 40)
    pos = shifted_sum_test(GeneralizedTakagi(d, one), Fraction(1, 2), 10)
    neg = shifted_sum_test(GeneralizedTakagi(d, alt), Fraction(1, 2), 10)
    assert pos.consistent and pos.sign == 1
    assert neg.exact_liminf == -2 and neg.verdict == "empty-certified" and neg.consistent
    with pytest.raises(ValueError):
        shifted_sum_test(GeneralizedTakagi(d, one), Fraction(1, 3), 10)


def test_chord_limit_check():
    assert chord_limit_check([Fraction(1, n) for n in range(1, 60)] + [0] * 60).cauchy
    assert not chord_limit_check([n % 2 for n in range(40)]).cauchy
    grows = chord_limit_check([0] * 10, [Fraction(2) ** n for n in range(10)], mode="right")
    assert not grows.applicable
    with pytest.raises(ValueError):
        chord_limit_check([0, 1], mode="left")
