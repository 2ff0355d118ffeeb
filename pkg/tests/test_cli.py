import csv
from fractions import Fraction

import pytest

from gtakagi.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_one_third(capsys):
    code, out, _ = run(capsys, "eval", "--radix", "2", "--weights", "const 1", "--x", "1/3",
                       "--eps", "1/1000000")
    assert code == 0
    lo, hi = out.split("\t")[1].strip("[]").split(", ")
    assert Fraction(lo) <= Fraction(2, 3) <= Fraction(hi)


def test_eval_exact_point(capsys):
    code, out, _ = run(capsys, "eval", "--radix", "2", "--x", "1/2,1/8")
    assert code == 0 and "[1/2, 1/2]\texact" in out and "[3/8, 3/8]" in out


@pytest.mark.parametrize("argv", [
    ["eval", "--radix", "2", "--x", "1/3", "--bogus"],
    ["eval", "--radix", "2", "--x", "one"],
    ["eval", "--radix", "2", "--x", "1/3", "--eps", "0.x"],
    ["eval", "--x", "1/3"],
    ["eval", "--radix", "2", "--weights", "nope", "--x", "1/3"],
    ["eval", "--radix", "2", "--x", "3/2"],
    ["verify"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert main(argv) == 2


def test_build_then_validate(tmp_path, capsys):
    for flags in (["--radix", "3"], ["--chain", "1,2,6,12,24"], ["--counterexample"],
                  ["--counterexample-zero"], ["--uneven"]):
        f = tmp_path / "d.txt"
        assert main(["build", *flags, "--depth", "5", "--out", str(f)]) == 0
        assert main(["validate", str(f)]) == 0
    assert "axioms hold" in capsys.readouterr().out


def test_validate_reports_axiom_failure(capsys):
    assert main(["validate", "--counterexample", "--levels", "8", "--rho", "1/5"]) == 1


def test_trace_midpoint_csv(tmp_path, capsys):
    out = tmp_path / "trace.csv"
    code = main(["trace", "--radix", "3", "--weights", "alt 1", "--x", "1/2", "--depth", "12",
                 "--out", str(out)])
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 12 and {r["mode"] for r in rows} == {"midpoint"}
    assert [Fraction(r["Delta_n"]) for r in rows] == [-1 if n % 2 == 0 else 0 for n in range(12)]


def test_dini_and_subdiff(capsys):
    assert main(["dini", "--radix", "2", "--x", "1/3", "--depth", "10"]) == 0
    assert main(["subdiff", "--radix", "2", "--x", "1/3,1/2", "--depth", "10"]) == 0
    out = capsys.readouterr().out
    assert "empty" in out and "all of R" in out
    assert main(["subdiff", "--super", "--radix", "2", "--x", "5/6", "--depth", "10"]) == 0


def test_subdiff_overrides(capsys):
    assert main(["subdiff", "--radix", "2", "--x", "1/2", "--zeta", "0,5", "--depth", "8"]) == 0
    assert "{0, 5}" in capsys.readouterr().out
    assert main(["subdiff", "--radix", "2", "--weights", "const 0", "--x", "1/3", "--depth", "8",
                 "--tolerance", "1/10"]) == 0
    assert "derivative-candidate [0, 0]" in capsys.readouterr().out


def test_verify_filter(capsys):
    assert main(["verify", "--filter", "c0_counterexample"]) == 0
    assert "PASS" in capsys.readouterr().out
    assert main(["verify", "--filter", "nothing-matches"]) == 0


def test_plot_takagi(tmp_path, capsys):
    stem = tmp_path / "tk"
    assert main(["plot", "--radix", "2", "--resolution", "1025", "--depth", "12", "--out", str(stem),
                 "--base-point", "1/2"]) == 0
    rows = list(csv.DictReader((tmp_path / "tk.csv").open()))
    assert len(rows) == 1025
    assert all(0 <= Fraction(r["lower"]) and Fraction(r["upper"]) <= Fraction(2, 3) for r in rows)
    assert all(r["lower"] == r["upper"] for r in rows)  # every k/1024 lies in D
    svg = (tmp_path / "tk.svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg
    assert (tmp_path / "tk_quotients.csv").exists()
    first = (tmp_path / "tk.svg").read_bytes()
    main(["plot", "--radix", "2", "--resolution", "1025", "--depth", "12", "--out", str(stem)])
    assert (tmp_path / "tk.svg").read_bytes() == first


def test_plot_zero_and_counterexample(tmp_path, capsys):
    assert main(["plot", "--radix", "2", "--weights", "const 0", "--resolution", "9",
                 "--out", str(tmp_path / "z")]) == 0
    assert {r["upper"] for r in csv.DictReader((tmp_path / "z.csv").open())} == {"0"}
    assert main(["plot", "--counterexample", "--weights", "alt 1", "--resolution", "9", "--depth", "9",
                 "--out", str(tmp_path / "c")]) == 0
    xs = [Fraction(r["x"]) for r in csv.DictReader((tmp_path / "c.csv").open())]
    assert xs[0] == -1 and xs[-1] == 1
    assert main(["plot", "--radix", "2", "--resolution", "1", "--out", str(tmp_path / "q")]) == 2
