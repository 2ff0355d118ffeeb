import csv
import io
import time
from fractions import Fraction

from gtakagi.decomposition import build_counterexample, build_divisor_chain, build_radix, build_uneven
from gtakagi.evaluation import GeneralizedTakagi, WeightSequence
from gtakagi.harness import (
    CSV_COLUMNS,
    _finish,
    _Tally,
    check_c0_counterexample,
    check_counterexample_derivative,
    check_lemma2_lemma3,
    check_mainD_family,
    check_prop_sencillo,
    check_rpar,
    conditions_hold,
    run_suite,
)

one = WeightSequence.const(1)
alt = WeightSequence.alternating(1)


def test_points_of_D_check_passes_on_radix():
    r = check_prop_sencillo(GeneralizedTakagi(build_radix(2, 64), one), Fraction(1, 2), 12)
    assert r.status == "pass" and r.asserted > 0


def test_points_of_D_check_gated_on_counterexample():
    r = check_prop_sencillo(GeneralizedTakagi(build_counterexample(12), alt), Fraction(1, 2), 8)
    assert r.status == "inapplicable" and "gap conditions" in r.message and r.asserted == 0


def test_conditions_on_chain_by_parity():
    ok, _ = conditions_hold(build_divisor_chain([1, 2, 6, 12, 24], 64), 30)
    assert ok


def test_lemma_checks_on_uneven():
    r = check_lemma2_lemma3(GeneralizedTakagi(build_uneven(12), alt), Fraction(1, 3), 10)
    assert r.status == "pass" and r.witnesses["lemma3_indices"] > 0


def test_weight_recursion_check_with_summable_weights():
    T = GeneralizedTakagi(build_radix(2, 64), WeightSequence.geometric(1, Fraction(1, 2)))
    r = check_mainD_family(T, Fraction(1, 2), 10)
    assert r.status == "pass"


def test_chord_check_rejects_points_of_D():
    r = check_rpar(GeneralizedTakagi(build_radix(2, 64), one), Fraction(1, 2), 8)
    assert r.status == "inapplicable" and "in D" in r.message


def test_c0_counterexample_records_partials():
    r = check_c0_counterexample(12)
    assert r.status == "pass"
    assert abs(Fraction(r.witnesses["right_partial"])) <= Fraction(1, 2 ** 12)


def test_counterexample_derivative_small_depth():
    for zero in (False, True):
        r = check_counterexample_derivative(5, zero, seed=3)
        assert r.status == "pass" and r.seed == 3
        assert Fraction(r.witnesses["worst_ratio_to_bound"]) <= 1


def test_fail_carries_witness():
    t = _Tally()
    t.check(True, n=1)
    t.check(False, n=2, value=Fraction(1, 3))
    r = _finish("demo", "instance", 2, t, time.perf_counter())
    assert r.status == "fail" and r.witnesses == {"n": 2, "value": "1/3"}


def test_nothing_passes_vacuously():
    r = _finish("demo", "instance", 0, _Tally(), time.perf_counter())
    assert r.status == "inapplicable" and r.message


def test_unknown_filter_warns():
    s = run_suite("no-such-check")
    assert s.results == [] and s.warnings and s.exit_code == 0


def test_filter_and_reports_are_deterministic(tmp_path):
    paths = []
    for i in range(2):
        rep, tab = tmp_path / f"r{i}.txt", tmp_path / f"r{i}.csv"
        s = run_suite("rpar", depth=10, report_path=rep, csv_path=tab)
        assert {r.check_id for r in s.results} == {"rpar"} and s.exit_code == 0
        paths.append((rep.read_bytes(), tab.read_bytes()))
    assert paths[0] == paths[1]
    rows = list(csv.reader(io.StringIO(paths[0][1].decode())))
    assert rows[0] == CSV_COLUMNS and len(rows) == 1 + len(s.results)
