import csv
import io
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gtakagi.decomposition import build_divisor_chain, build_radix, build_uneven
from gtakagi.evaluation import GeneralizedTakagi, WeightSequence, reduced_instance
from gtakagi.sequences import (
    TRACE_COLUMNS,
    delta_trace,
    gamma_trace,
    generic_chord_trace,
    midpoint_chord_trace,
    neighbors,
    reduce_to_D1,
    secant,
    slopes,
    write_trace_csv,
)

one = WeightSequence.const(1)
alt = WeightSequence.alternating(1)


def reduced(d, w, x):
    return reduce_to_D1(GeneralizedTakagi(d, w), x).instance


def test_neighbors_radix3():
    nb = neighbors(build_radix(3, 3), Fraction(1, 2), 3)
    assert nb.a[1] == Fraction(1, 3) and nb.b[1] == Fraction(2, 3)
    assert nb.c[1] == Fraction(1, 2) and not any(nb.in_level)
    with pytest.raises(ValueError):
        neighbors(build_radix(3, 3), Fraction(0), 3)


def test_secant_contains_exact_quotient(takagi):
    u, v = Fraction(1, 3), Fraction(3, 8)
    s = secant(takagi, u, v, Fraction(1, 10 ** 6))
    exact_v = takagi.exact_value(v)
    tu = takagi.evaluate(u, Fraction(1, 10 ** 9))
    assert ((exact_v - tu.midpoint) / (v - u)) in s
    assert s.width <= 2 * Fraction(1, 10 ** 6) / (v - u)


@given(st.integers(2, 5), st.integers(0, 4), st.integers(1, 80), st.integers(81, 200))
def test_slopes_match_finite_differences(r, k, p, q):
    d = build_radix(r, 8)
    x = Fraction(p, q)
    h = Fraction(1, r ** (k + 6) * q)
    left, right = slopes(d, k, x)
    assert (d.distance(k, x + h) - d.distance(k, x)) / h == right
    assert (d.distance(k, x) - d.distance(k, x - h)) / h == left


def test_reduction_quarter_point(takagi):
    R = reduce_to_D1(takagi, Fraction(1, 4))
    assert R.n0 == 2
    # 1/4 is the midpoint of (0, 1/2): g_1 has a peak there
    h = Fraction(1, 2 ** 20)
    G = lambda z: takagi.partial_sum(R.n0 - 1, z)
    x = Fraction(1, 4)
    assert (G(x + h) - G(x)) / h == R.G_plus == 0
    assert (G(x) - G(x - h)) / h == R.G_minus == 2
    assert R.instance.weights(0) == 0 and R.instance.decomposition.contains(1, x)


@given(st.integers(2, 4), st.integers(1, 30), st.integers(1, 6))
def test_reduction_preserves_quotients(r, p, m):
    T = GeneralizedTakagi(build_radix(r, 40), alt)
    q = r ** 3
    x = Fraction(p % q or 1, q)
    R = reduce_to_D1(T, x)
    y = x + Fraction(1, r ** (R.n0 + m))
    full = (T.exact_value(y) - T.exact_value(x)) / (y - x)
    rest = (R.instance.exact_value(y) - R.instance.exact_value(x)) / (y - x)
    assert full == rest + R.G_plus


def test_delta_radix2_is_n_minus_1():
    S = reduced(build_radix(2, 64), one, Fraction(1, 2))
    for side in ("right", "left"):
        tr = delta_trace(S, Fraction(1, 2), side, 12)
        assert tr.deltas == [n - 1 for n in tr.indices]
        assert all(r.secant_ok and r.delta == 1 for r in tr.rows if r.delta is not None)


def test_delta_requires_reduction(takagi):
    with pytest.raises(ValueError):
        delta_trace(takagi, Fraction(1, 2))


def test_chain_alternating_trace():
    S = reduced(build_divisor_chain([1, 2, 6, 12, 24], 64), alt, Fraction(1, 2))
    tr = delta_trace(S, Fraction(1, 2), "right", 10)
    assert tr.deltas == [Fraction(0) if n % 2 else Fraction(-1) for n in tr.indices]
    assert all(r.lemma2_ok is not False and r.secant_ok for r in tr.rows)


def test_uneven_trace_exercises_gamma_expansion():
    S = reduced(build_uneven(14), alt, Fraction(1, 3))
    tr = gamma_trace(S, Fraction(1, 3), "right", 10)
    assert {r.delta for r in tr.rows} >= {Fraction(3, 5), Fraction(2, 3)}
    checked = [r for r in tr.rows if r.lemma3_ok is not None]
    assert checked and all(r.lemma3_ok for r in checked)
    assert all(r.delta_in_range for r in tr.rows)


@given(st.sampled_from([2, 3, 10]), st.data(),
       st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=7), min_size=1, max_size=4))
def test_delta_is_running_weight_sum(r, data, prefix):
    x = Fraction(data.draw(st.integers(1, r - 1)), r)
    w = WeightSequence.prefix_then(prefix, alt)
    S = reduced(build_radix(r, 64), w, x)
    for side in ("right", "left"):
        tr = delta_trace(S, x, side, 8)
        for row in tr.rows:
            assert row.Delta == sum((S.weights(k) for k in range(1, row.n)), Fraction(0))


def test_midpoint_chord_lifted_radix3():
    T = reduced_instance(GeneralizedTakagi(build_radix(3, 64), one), -1)
    rows = midpoint_chord_trace(T, Fraction(1, 2), 12)
    assert [r.quotient for r in rows] == [-r.n for r in rows]
    assert all(r.identity_ok and r.ratio == Fraction(1, 2) for r in rows)


def test_midpoint_chord_alternating():
    rows = midpoint_chord_trace(GeneralizedTakagi(build_radix(3, 64), alt), Fraction(1, 2), 8)
    assert [r.quotient for r in rows] == [-1 if n % 2 == 0 else 0 for n in range(len(rows))]


def test_generic_chord_takagi_third(takagi):
    rows = generic_chord_trace(takagi, Fraction(1, 3), 12)
    assert all(r.identity_ok and r.ratio_ok for r in rows)
    assert {r.quotient for r in rows} == {0, 1}
    with pytest.raises(ValueError):
        generic_chord_trace(takagi, Fraction(1, 2), 4)


@pytest.mark.parametrize("x", [Fraction(1, 5), Fraction(2, 7)])
def test_generic_chord_chain_modes(x):
    rows = generic_chord_trace(GeneralizedTakagi(build_divisor_chain([1, 2, 6, 12, 24], 64), one), x, 12)
    assert all(r.identity_ok and r.ratio_ok for r in rows)
    assert {"straddle", "right", "left"} & {r.mode for r in rows}


def test_trace_csv_columns():
    S = reduced(build_radix(2, 64), one, Fraction(1, 2))
    buf = io.StringIO()
    write_trace_csv(delta_trace(S, Fraction(1, 2), "right", 4).rows, buf)
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    assert rows[0] == TRACE_COLUMNS
    assert [r[4] for r in rows[1:]] == ["0", "1", "2", "3"]
