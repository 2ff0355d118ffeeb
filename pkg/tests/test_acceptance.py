"""Acceptance gate: one test per criterion, each at its stated tolerance.

Independent oracles are used wherever possible: radix and divisor-chain values
come from the closed form ``sum w_k phi(q_k x) / q_k`` rather than from the
decomposition machinery.
"""

import random
import time
from fractions import Fraction

from gtakagi.cli import main
from gtakagi.decomposition import (
    build_counterexample,
    build_divisor_chain,
    build_radix,
    build_uneven,
)
from gtakagi.derivatives import dini, local_min_witness, parse_binary, takagi_superdiff_formula
from gtakagi.evaluation import GeneralizedTakagi, WeightSequence, phi, reduced_instance
from gtakagi.harness import (
    check_c0_counterexample,
    check_counterexample_derivative,
    check_superdiff_example,
)
from gtakagi.numerics import RatInterval
from gtakagi.sequences import delta_trace, midpoint_chord_trace, reduce_to_D1

ZETAS = [Fraction(z) for z in (0, 1, -1, 10, -10)]


def closed_form(denominators, w, N):
    """``z -> sum_{k<=N} w_k phi(q_k z) / q_k`` for ``D_k = (1/q_k) Z``."""
    ws = [w(k) for k in range(N + 1)]
    qs = [denominators(k) for k in range(N + 1)]
    return lambda z: sum((wk * phi(q * z) / q for wk, q in zip(ws, qs) if wk), Fraction(0))


def test_1_delta_equals_weight_sums(acceptance):
    start = time.perf_counter()
    depth, checked, bad = 20, 0, []
    for r in (2, 3, 10):
        d = build_radix(r, 64)
        for w in (WeightSequence.const(1), WeightSequence.alternating(1)):
            T = GeneralizedTakagi(d, w)
            for j in range(1, r):
                x = Fraction(j, r)
                R = reduce_to_D1(T, x)
                assert R.n0 == 1 and R.offset == 0
                S = R.instance
                oracle = closed_form(lambda k: r ** k, S.weights, depth + 2)
                for side, sign in (("right", 1), ("left", -1)):
                    for row in delta_trace(S, x, side, depth).rows:
                        n = row.n
                        expected = sum((S.weights(k) for k in range(1, n)), Fraction(0))
                        y = x + sign * Fraction(1, r ** n)
                        # left quotients are reported for the reflected function
                        direct = sign * (oracle(y) - oracle(x)) / (y - x)
                        checked += 1
                        if not (row.Delta == expected == direct):
                            bad.append((r, w.describe(), x, side, n, row.Delta, expected, direct))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 5
    acceptance(1, ok, f"{checked} exact Delta_n identities, {len(bad)} mismatches, {elapsed:.2f}s (< 5s)")
    assert not bad, bad[:3]
    assert elapsed < 5


def test_2_delta_gamma_bookkeeping(acceptance):
    start = time.perf_counter()
    depth = 15
    chain = [1, 2, 6, 12, 24]
    cases = [
        ("chain", build_divisor_chain(chain, 64), WeightSequence.alternating(1), Fraction(1, 2)),
        ("chain", build_divisor_chain(chain, 64), WeightSequence.const(1), Fraction(1, 3)),
        ("radix 2", build_radix(2, 64), WeightSequence.const(1), Fraction(1, 2)),
        ("radix 3", build_radix(3, 64), WeightSequence.alternating(1), Fraction(1, 3)),
        ("uneven", build_uneven(depth + 3), WeightSequence.alternating(1), Fraction(1, 3)),
    ]
    failures, counts = [], {"delta": 0, "gamma": 0, "secant": 0}
    for name, d, w, x in cases:
        R = reduce_to_D1(GeneralizedTakagi(d, w), x)
        S = R.instance
        if name == "uneven":
            value = S.exact_value
        else:
            q = d.denominator if name == "chain" else (lambda k, r=int(name[-1]): r ** k)
            value = closed_form(lambda j: q(max(0, j + R.offset)), S.weights, depth + 4)
        for side, sign in (("right", 1), ("left", -1)):
            tr = delta_trace(S, x, side, depth)
            ys = {row.n: row.y for row in tr.rows}
            for row in tr.rows:
                n = row.n
                direct = sign * (value(row.y) - value(x)) / (row.y - x)
                counts["secant"] += 1
                if direct != row.Delta or not row.secant_ok:
                    failures.append((name, side, n, "Delta", row.Delta, direct))
                if row.delta_extracted is not None:
                    counts["delta"] += 1
                    if not (tr.rho <= row.delta_extracted <= 1 and row.delta_extracted == row.delta):
                        failures.append((name, side, n, "delta", row.delta_extracted))
                if row.Gamma is not None and n + 1 in ys:
                    y1 = ys[n + 1]
                    g_direct = sign * (value(row.y) - value(y1)) / (row.y - y1)
                    counts["secant"] += 1
                    if g_direct != row.Gamma:
                        failures.append((name, side, n, "Gamma", row.Gamma, g_direct))
                if row.lemma3_ok is not None:
                    counts["gamma"] += 1
                    if not row.lemma3_ok:
                        failures.append((name, side, n, "Gamma expansion", row.Gamma))
    elapsed = time.perf_counter() - start
    ok = not failures and counts["gamma"] > 0 and elapsed < 10
    acceptance(2, ok, f"{counts['delta']} delta_n in [rho,1], {counts['gamma']} Gamma expansions, "
                      f"{counts['secant']} secant matches, {len(failures)} failures, {elapsed:.2f}s (< 10s)")
    assert not failures, failures[:3]
    assert counts["gamma"] > 0 and elapsed < 10


def test_3_midpoint_identity(acceptance):
    depth = 15
    T = GeneralizedTakagi(build_radix(3, 64), WeightSequence.const(1))
    lifted = reduced_instance(T, -1)  # w'_0 = 0, w'_j = w_{j-1}: the same function
    x = Fraction(1, 2)
    rows = midpoint_chord_trace(lifted, x, depth + 1)
    oracle = closed_form(lambda k: 3 ** k, T.weights, 2 * depth + 6)
    bad = []
    for row in rows:
        n = row.n
        if n < 1:
            continue
        direct = (oracle(row.v) - oracle(row.u)) / (row.v - row.u)
        if not (row.quotient == direct == -n and row.ratio <= 1):
            bad.append((n, row.quotient, direct, row.ratio))
    levels = [row.n for row in rows if row.n >= 1]
    ok = not bad and levels == list(range(1, depth + 1))
    acceptance(3, ok, f"quotient = -n for n = 1..{depth}, ratio <= 1/rho = 1 at every level; {len(bad)} mismatches")
    assert ok, bad[:3]


def test_4_counterexample_derivative(acceptance):
    start = time.perf_counter()
    res = check_counterexample_derivative(10, include_zero=False, seed=0)
    rho8 = build_counterexample(8).rho_level(8)
    elapsed = time.perf_counter() - start
    ok = res.status == "pass" and rho8 < Fraction(1, 10) and elapsed < 30
    acceptance(4, ok, f"{res.asserted} exact bound/plateau assertions, worst ratio to 2(2/3)^n = "
                      f"{res.witnesses['worst_ratio_to_bound']}, rho_8 = {rho8} (< 1/10), {elapsed:.2f}s (< 30s)")
    assert ok, res


def test_5_c0_failure_example(acceptance):
    K = 12
    res = check_c0_counterexample(K)
    right = Fraction(-1, 2) + sum((Fraction(1, 2 ** k) for k in range(2, K + 1)), Fraction(0))
    left = Fraction(1, 2) - sum((Fraction(1, 2 ** k) for k in range(2, K + 1)), Fraction(0))
    ok = res.status == "pass" and abs(right) <= Fraction(1, 2 ** K) and abs(left) <= Fraction(1, 2 ** K)
    acceptance(5, ok, f"pair cancellation and rewriting ({res.asserted} assertions); "
                      f"lateral partials {right}, {left} within 2^-{K} of 0")
    assert ok, res


def test_6_superdifferential_formula(acceptance):
    e = parse_binary("11010(10)")
    # 0.11010 + 2^-5 * (2/3)
    assert e.value == Fraction(26, 32) + Fraction(1, 32) * Fraction(2, 3) == Fraction(5, 6)
    formula = takagi_superdiff_formula(e)
    res = check_superdiff_example(20)
    ok = formula == RatInterval(-2, -1) and -formula == RatInterval(1, 2) and res.status == "pass"
    acceptance(6, ok, f"formula {formula}, negation {-formula}; at horizon 20 D-(-T) in "
                      f"{res.witnesses['D_minus(-T)']}, d+(-T) in {res.witnesses['d_plus(-T)']}")
    assert ok, res


def test_7_nonnegative_weights(acceptance, takagi):
    wits = [local_min_witness(takagi, x, z) for x in (Fraction(1, 2), Fraction(1, 4), Fraction(3, 4))
            for z in ZETAS]
    est = dini(takagi, Fraction(1, 3), 16)
    depths = est.certified_empty_depths()
    pairs_ok = all(l.lo > r.hi for n, r, l in est.history if n in depths)
    ok = all(w.ok for w in wits) and len(depths) >= 10 and pairs_ok
    acceptance(7, ok, f"{sum(w.ok for w in wits)}/15 local-minimum certificates; "
                      f"empty subdifferential at 1/3 certified at {len(depths)} depths (>= 10)")
    assert ok


def test_8_enclosure_soundness(acceptance, takagi):
    start = time.perf_counter()
    rng = random.Random(2024)
    eps = Fraction(1, 10 ** 6)
    bad = []
    for _ in range(100):
        q = rng.randrange(2, 10 ** 6)
        x = Fraction(rng.randrange(0, q + 1), q)
        a, b = takagi.evaluate(x, eps), takagi.evaluate(x, eps / 10)
        ref = RatInterval.around(takagi.partial_sum(30, x), takagi.tail_bound(30))
        if not (b in a and ref in a and ref in b and a.width <= 2 * eps):
            bad.append(x)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 10
    acceptance(8, ok, f"100 random points, nested eps/eps10 enclosures containing the depth-30 "
                      f"enclosure; {len(bad)} failures, {elapsed:.2f}s (< 10s)")
    assert ok, bad[:3]


def test_9_full_harness(acceptance, capsys):
    start = time.perf_counter()
    code = main(["verify", "--all", "--depth", "15", "--counter-depth", "10"])
    elapsed = time.perf_counter() - start
    summary = capsys.readouterr().out.strip().splitlines()[-1]
    ok = code == 0 and elapsed < 60
    acceptance(9, ok, f"verify --all --depth 15 exit {code}, {summary}, {elapsed:.1f}s (< 60s)")
    assert ok
