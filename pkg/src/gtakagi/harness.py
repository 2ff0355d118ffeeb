"""Named, deterministic checks binding the implementation to the theory's finite identities."""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .decomposition import (
    ChainDecomposition,
    Decomposition,
    build_c0_counterexample,
    build_counterexample,
    build_divisor_chain,
    build_radix,
    build_uneven,
    validate,
)
from .derivatives import (
    DEFAULT_ZETAS,
    classify,
    dini,
    local_min_witness,
    parse_binary,
    shifted_sum_test,
    subdifferential_estimate,
    takagi_superdiff_formula,
    chord_limit_check,
)
from .evaluation import GeneralizedTakagi, WeightSequence, pair_sum_H
from .numerics import RatInterval, format_rational
from .sequences import (
    delta_trace,
    effective_rho,
    generic_chord_trace,
    midpoint_chord_trace,
    reduce_to_D1,
)

__all__ = [
    "CheckResult",
    "check_prop_sencillo",
    "check_lemma2_lemma3",
    "check_mainD_family",
    "check_c0_counterexample",
    "check_rpar",
    "check_counterexample_derivative",
    "check_superdiff_example",
    "check_nonnegative_weights",
    "check_shifted_sums",
    "conditions_hold",
    "SuiteSummary",
    "run_suite",
    "CHECK_FAMILIES",
]


@dataclass
class CheckResult:
    check_id: str
    instance: str
    depth: int
    status: str  # pass | fail | inapplicable
    witnesses: dict = field(default_factory=dict)
    seed: int | None = None
    wall_time: float = 0.0
    asserted: int = 0
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


class _Tally:
    """Counts asserted indices and keeps the first counterwitness."""

    def __init__(self):
        self.asserted = 0
        self.failure: dict | None = None

    def check(self, ok: bool, **witness) -> bool:
        self.asserted += 1
        if not ok and self.failure is None:
            self.failure = {k: _show(v) for k, v in witness.items()}
        return ok


def _show(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, RatInterval):
        return str(v)
    return v


def _finish(check_id: str, instance: str, depth: int, tally: _Tally, start: float,
            seed: int | None = None, extra: dict | None = None, message: str = "") -> CheckResult:
    wit = dict(extra or {})
    if tally.failure is not None:
        wit.update(tally.failure)
        status = "fail"
    elif tally.asserted == 0:
        status = "inapplicable"
        message = message or "no applicable index"
    else:
        status = "pass"
    return CheckResult(check_id, instance, depth, status, wit, seed, time.perf_counter() - start,
                       tally.asserted, message)


def _inapplicable(check_id, instance, depth, reason, start) -> CheckResult:
    return CheckResult(check_id, instance, depth, "inapplicable", {}, None,
                       time.perf_counter() - start, 0, reason)


def _label(T: GeneralizedTakagi, x=None) -> str:
    s = f"{T.decomposition.describe()}; w = {T.weights.describe()}"
    return s if x is None else f"{s}; x = {format_rational(Fraction(x))}"


# -- hypothesis gates -----------------------------------------------------------

VALIDATION_POINT_CAP = 5000


def _validation_top(d: Decomposition, want: int) -> int:
    top = 0
    for n in range(min(want, d.depth) + 1):
        size = d.denominator(n) + 1 if isinstance(d, ChainDecomposition) else len(d.level(n))
        if size > VALIDATION_POINT_CAP:
            break
        top = n
    return top


def conditions_hold(d: Decomposition, depth: int) -> tuple[bool, str]:
    """Coarse-gap or split condition at every level ``< depth``.

    Divisor chains are decided from the ratio parity at every level (even
    ratio gives the coarse-gap form, odd the split form); every decomposition is also
    validated extensionally on the levels small enough to enumerate.
    """
    top = _validation_top(d, depth)
    rep = validate(d, max_level=max(top, 1))
    for lv in rep.levels[:-1]:
        if not lv.main_conditions:
            return False, f"both gap conditions fail at level {lv.n}: {lv.witnesses}"
    if isinstance(d, ChainDecomposition):
        for n in range(depth):
            if d.ratio(n + 1) < 2:
                return False, f"ratio below 2 at level {n}"
    elif top < depth:
        return True, f"validated through level {top} only"
    return True, ""


def _lemma2_gate(d: Decomposition, depth: int) -> tuple[bool, Fraction, str]:
    rho = effective_rho(d, min(depth, _validation_top(d, depth)))
    if rho == 1:
        return True, rho, ""
    for n in range(depth):
        if d.alpha(n + 1) > rho / (1 - rho) * d.alpha(n):
            return False, rho, f"alpha_{n + 1} > rho/(1-rho) alpha_{n}"
    return True, rho, ""


# -- checks ---------------------------------------------------------------------

def check_prop_sencillo(T: GeneralizedTakagi, x, depth: int = 15) -> CheckResult:
    """``Delta_n = sum_{k=1}^{n-1} w'_k`` on both sides of ``x in D`` (reduced instance)."""
    start = time.perf_counter()
    x = Fraction(x)
    cid, inst = "prop_sencillo", _label(T, x)
    ok, why = conditions_hold(T.decomposition, depth)
    if not ok:
        return _inapplicable(cid, inst, depth, why, start)
    R = reduce_to_D1(T, x)
    S = R.instance
    W = [S.weights(k) for k in range(depth + 1)]
    tally = _Tally()
    for side in ("right", "left"):
        tr = delta_trace(S, x, side, depth)
        for r in tr.rows:
            expected = sum(W[1:r.n], Fraction(0))
            tally.check(r.Delta == expected and r.secant_ok, side=side, n=r.n, Delta=r.Delta,
                        expected=expected)
        if not S.weights.in_c0:
            tail = [r.Delta for r in tr.rows if r.n >= depth // 2]
            spread = max(tail) - min(tail)
            need = max(abs(W[n]) for n in range(depth // 2, depth))
            tally.check(spread >= need > 0, side=side, spread=spread, needed=need)
    return _finish(cid, inst, depth, tally, start, extra={"n0": R.n0})


def check_lemma2_lemma3(T: GeneralizedTakagi, x, depth: int = 15) -> CheckResult:
    """``delta_n in [rho, 1]`` and the closed-form expansions of ``Delta_n`` and ``Gamma_n``."""
    start = time.perf_counter()
    x = Fraction(x)
    cid, inst = "lemma2_lemma3", _label(T, x)
    R = reduce_to_D1(T, x)
    S = R.instance
    ok, rho, why = _lemma2_gate(S.decomposition, depth + 1)
    if not ok:
        return _inapplicable(cid, inst, depth, why, start)
    tally = _Tally()
    lemma3 = 0
    for side in ("right", "left"):
        tr = delta_trace(S, x, side, depth)
        for r in tr.rows:
            tally.check(r.secant_ok, side=side, n=r.n, what="secant oracle")
            if r.lemma2_ok is not None:
                tally.check(r.lemma2_ok, side=side, n=r.n, what="Delta_n expansion", Delta=r.Delta)
            if r.delta is not None:
                tally.check(bool(r.delta_in_range), side=side, n=r.n, delta=r.delta, rho=rho)
            if r.delta_extracted is not None:
                tally.check(r.delta_extracted == r.delta, side=side, n=r.n,
                            delta=r.delta, extracted=r.delta_extracted)
            if r.lemma3_ok is not None:
                lemma3 += 1
                tally.check(r.lemma3_ok, side=side, n=r.n, what="Gamma_n expansion", Gamma=r.Gamma)
    return _finish(cid, inst, depth, tally, start, extra={"lemma3_indices": lemma3, "rho": _show(rho)})


def check_mainD_family(T: GeneralizedTakagi, x, depth: int = 15) -> CheckResult:
    """The recursive bound on ``|w_n|`` through ``eta_n`` and ``lambda_n``; non-Cauchy ``Delta_n``."""
    start = time.perf_counter()
    x = Fraction(x)
    cid, inst = "mainD_family", _label(T, x)
    R = reduce_to_D1(T, x)
    S = R.instance
    d = S.decomposition
    top = _validation_top(d, depth + 1)
    rep = validate(d, max_level=max(top, 1))
    if not rep.holds("cond2a"):
        lv = rep.first_failure("cond2a")
        return _inapplicable(cid, inst, depth, f"some gap of D_{lv.n} misses D_{lv.n + 1}", start)
    rho = effective_rho(d, top)
    ratio_ok = all(d.alpha(n + 1) <= rho * d.alpha(n) for n in range(depth + 1))
    if not (ratio_ok or rho > Fraction(1, 2)):
        return _inapplicable(cid, inst, depth, "neither rho > 1/2 nor alpha_{n+1} <= rho alpha_n", start)
    W = [S.weights(k) for k in range(depth + 2)]
    tally = _Tally()
    cases: dict[str, int] = {}
    for side in ("right", "left"):
        tr = delta_trace(S, x, side, depth)
        rows = {r.n: r for r in tr.rows}
        for n in range(2, depth + 1):
            r, p = rows.get(n), rows.get(n - 1)
            if r is None or p is None or r.delta is None or r.lam is None or r.eta is None:
                continue
            wn, wp = abs(W[n]), abs(W[n - 1])
            lam, eta = abs(r.lam), abs(r.eta)
            if ratio_ok:
                if p.delta == 1:
                    case, bound = "delta_prev=1", eta / rho
                elif r.delta == 1:
                    case, bound = "delta=1", eta + (1 - rho) * wp
                elif p.delta >= 1 - rho / 2:
                    case, bound = "both<1,large", lam + wp / 2
                else:
                    case, bound = "both<1,small", lam + (1 - rho / 2) * wp
                combined = lam + eta / rho + (1 - rho / 2) * wp
                tally.check(wn <= combined, side=side, n=n, w_n=W[n], combined=combined)
            else:
                case, bound = "rho>1/2", eta / rho + (1 - rho) / rho * wp
            cases[case] = cases.get(case, 0) + 1
            tally.check(wn <= bound, side=side, n=n, case=case, w_n=W[n], bound=bound)
        if not S.weights.in_c0:
            tail = [r.Delta for r in tr.rows if r.n >= depth // 2]
            spread = max(tail) - min(tail)
            tally.check(spread > 0, side=side, what="Delta_n Cauchy over the horizon", spread=spread)
    return _finish(cid, inst, depth, tally, start, extra={"cases": cases})


def check_c0_counterexample(depth: int = 12, seed: int = 0) -> CheckResult:
    """Triple-pattern weights on tripled dyadic levels: cancellation and vanishing lateral quotients."""
    start = time.perf_counter()
    K = depth
    d = build_c0_counterexample(3 * K + 9)
    T = GeneralizedTakagi(d, WeightSequence.triple_pattern())
    cid, inst = "c0_counterexample", _label(T) + "; levels D_n = dyadic grid of order 0,1,1,2,2,2,3,…"
    rng = random.Random(seed)
    grid = [Fraction(j, 64) for j in range(65)] + [Fraction(rng.randrange(1, 3 ** 7), 3 ** 7) for _ in range(16)]
    tally = _Tally()
    N = 3 * K
    for z in grid:
        for k in range(1, K + 1):
            s = T.weights(3 * k - 2) * T.g(3 * k - 2, z) + T.weights(3 * k - 1) * T.g(3 * k - 1, z)
            tally.check(s == 0, z=z, k=k, pair_sum=s)
        rewritten = -T.g(3, z) / 2 + sum((Fraction(1, 2 ** k) * T.g(3 * k, z) for k in range(2, K + 1)),
                                         Fraction(0))
        tally.check(T.partial_sum(N, z) == rewritten, z=z, partial=T.partial_sum(N, z), rewritten=rewritten)
    x = Fraction(1, 2)
    tx = T.exact_value(x)
    prev = None
    for m in range(4, K + 3):
        t = Fraction(1, 2 ** m)
        right = (T.exact_value(x + t) - tx) / t
        left = (T.exact_value(x - t) - tx) / (-t)
        kk = m - 2
        right_formula = Fraction(-1, 2) + sum((Fraction(1, 2 ** k) for k in range(2, kk + 1)), Fraction(0))
        left_formula = Fraction(1, 2) - sum((Fraction(1, 2 ** k) for k in range(2, kk + 1)), Fraction(0))
        tally.check(right == right_formula and left == left_formula, m=m, right=right, left=left,
                    right_formula=right_formula, left_formula=left_formula)
        if prev is not None:
            tally.check(abs(right) < prev, m=m, what="contraction", right=right)
        prev = abs(right)
    rf = Fraction(-1, 2) + sum((Fraction(1, 2 ** k) for k in range(2, K + 1)), Fraction(0))
    tally.check(abs(rf) <= Fraction(1, 2 ** K) and abs(-rf) <= Fraction(1, 2 ** K), K=K, right_partial=rf)
    return _finish(cid, inst, depth, tally, start, seed, extra={"right_partial": _show(rf),
                                                                "left_partial": _show(-rf)})


def check_rpar(T: GeneralizedTakagi, x, depth: int = 15) -> CheckResult:
    """Midpoint branch ``-sum w_k`` identity or the generic chord identities, with ratio bounds."""
    start = time.perf_counter()
    x = Fraction(x)
    cid, inst = "rpar", _label(T, x)
    ok, why = conditions_hold(T.decomposition, depth)
    if not ok:
        return _inapplicable(cid, inst, depth, why, start)
    pc = classify(T.decomposition, x, depth)
    if pc.kind == "in_D":
        return _inapplicable(cid, inst, depth, "x lies in D (covered by prop_sencillo)", start)
    rows = midpoint_chord_trace(T, x, depth) if pc.kind == "in_D_tilde" else generic_chord_trace(T, x, depth)
    tally = _Tally()
    modes: dict[str, int] = {}
    for r in rows:
        modes[r.mode] = modes.get(r.mode, 0) + 1
        tally.check(r.identity_ok, n=r.n, mode=r.mode, quotient=r.quotient, expected=r.expected)
        if r.ratio is not None:
            tally.check(r.ratio_ok, n=r.n, mode=r.mode, ratio=r.ratio, bound=r.ratio_bound)
    extra = {"branch": pc.kind, "modes": modes}
    if not T.weights.in_c0 and len(rows) >= 4:
        cc = chord_limit_check([r.quotient for r in rows])
        extra["chord_spread"] = _show(cc.spread)
        tally.check(not cc.cauchy, what="chord quotients Cauchy", spread=cc.spread)
    return _finish(cid, inst, depth, tally, start, extra=extra)


def check_counterexample_derivative(depth: int = 10, include_zero: bool = False, seed: int = 0) -> CheckResult:
    """``|T(h) - T(0)| / |h| <= 2 (2/3)^n`` at scale ``2^{-(n+1)} <= |h| < 2^{-n}``."""
    start = time.perf_counter()
    extra_terms = 25
    d = build_counterexample(2 * (depth + extra_terms) + 2, include_zero)
    T = GeneralizedTakagi(d, WeightSequence.alternating(1))
    cid = "counterexample_derivative" + ("_with_zero" if include_zero else "")
    inst = _label(T, 0)
    rng = random.Random(seed)
    tally = _Tally()
    H0 = {}
    worst = Fraction(0)
    for n in range(1, depth + 1):
        K = n + extra_terms
        for k in range(K + 1):
            if k not in H0:
                H0[k] = pair_sum_H(T, k, 0)
        facs = [Fraction(1), Fraction(9, 8), Fraction(4, 3), Fraction(3, 2), Fraction(5, 3),
                Fraction(15, 8), 1 + Fraction(rng.randrange(1, 3 ** 6), 3 ** 6)]
        bound = 2 * Fraction(2, 3) ** n
        for f in facs:
            for s in (1, -1):
                h = s * f / 2 ** (n + 1)
                H = [pair_sum_H(T, k, h) for k in range(K + 1)]
                if not include_zero:
                    for k in range(n):
                        tally.check(H[k] == H0[k], n=n, h=h, k=k, H_h=H[k], H_0=H0[k])
                S = sum((H[k] - H0[k] for k in range(K + 1)), Fraction(0))
                certified = (abs(S) + Fraction(1, 3 ** (K + 1))) / abs(h)
                worst = max(worst, certified / bound)
                tally.check(certified <= bound, n=n, h=h, quotient_bound=certified, bound=bound)
    return _finish(cid, inst, depth, tally, start, seed, extra={"worst_ratio_to_bound": _show(worst)})


def check_superdiff_example(horizon: int = 20, tolerance=Fraction(1, 4)) -> CheckResult:
    """Formula value at ``x = 0.11010(10)…`` and Dini enclosures of ``-T`` there."""
    start = time.perf_counter()
    e = parse_binary("11010(10)")
    x = e.value
    T = GeneralizedTakagi(build_radix(2, 64), WeightSequence.const(1))
    cid, inst = "superdiff_example", _label(T, x) + f" (binary {e})"
    tally = _Tally()
    formula = takagi_superdiff_formula(e)
    tally.check(formula == RatInterval(-2, -1), formula=formula)
    neg = -formula
    tally.check(neg == RatInterval(1, 2), negated=neg)
    est = dini(T.negated(), x, horizon)
    tol = Fraction(tolerance)
    for name, iv, target in (("D_minus", est.D_minus, Fraction(1)), ("d_plus", est.d_plus, Fraction(2))):
        tally.check(iv.width <= tol and iv.distance_to(target) <= tol, which=name, enclosure=iv, target=target)
    return _finish(cid, inst, horizon, tally, start,
                   extra={"x": _show(x), "formula": str(formula), "D_minus(-T)": str(est.D_minus),
                          "d_plus(-T)": str(est.d_plus)})


def check_nonnegative_weights(depth: int = 15, points_in_D=(Fraction(1, 2), Fraction(1, 4), Fraction(3, 4)),
                              generic_points=(Fraction(1, 3), Fraction(1, 5), Fraction(2, 7)),
                              zetas=DEFAULT_ZETAS, min_depths: int = 10) -> CheckResult:
    """Local-minimum witnesses on ``D`` and empty-subdifferential certificates off ``D`` for the Takagi function."""
    start = time.perf_counter()
    T = GeneralizedTakagi(build_radix(2, 64), WeightSequence.const(1))
    cid, inst = "nonnegative_weights", _label(T)
    tally = _Tally()
    for x in points_in_D:
        for z in zetas:
            wit = local_min_witness(T, x, z)
            tally.check(wit.ok, x=x, zeta=z, min_value=wit.min_value, level=wit.n)
    counts = {}
    for x in generic_points:
        res = subdifferential_estimate(T, x, max(depth, min_depths + 1))
        counts[format_rational(x)] = len(res.certified_depths)
        tally.check(res.verdict == "empty-certified" and len(res.certified_depths) >= min_depths,
                    x=x, verdict=res.verdict, depths=len(res.certified_depths))
    return _finish(cid, inst, depth, tally, start, extra={"certified_depths": counts})


def check_shifted_sums(depth: int = 12) -> CheckResult:
    """A negative shifted liminf must come with an empty-subdifferential certificate."""
    start = time.perf_counter()
    tally = _Tally()
    d = build_radix(4, 40)
    reports = {}
    for w in (WeightSequence.const(1), WeightSequence.alternating(1)):
        T = GeneralizedTakagi(d, w)
        rep = shifted_sum_test(T, Fraction(1, 2), depth)
        reports[w.describe()] = f"{_show(rep.exact_liminf)} / {rep.verdict}"
        tally.check(rep.consistent, weights=w.describe(), liminf=rep.exact_liminf, verdict=rep.verdict)
    return _finish("shifted_sums", "radix 4; x = 1/2", depth, tally, start, extra=reports)


# -- suite ---------------------------------------------------------------------------

def _radix(r, depth=64):
    return build_radix(r, depth)


def _suite(depth: int, counter_depth: int, seed: int) -> list[tuple[str, Callable[[], CheckResult]]]:
    one, alt = WeightSequence.const(1), WeightSequence.alternating(1)
    chain = build_divisor_chain([1, 2, 6, 12, 24], 64)
    uneven_depth = min(depth, 12)
    uneven = build_uneven(uneven_depth + 2)
    GT = GeneralizedTakagi
    return [
        ("prop_sencillo", lambda: check_prop_sencillo(GT(_radix(2), one), Fraction(1, 2), depth)),
        ("prop_sencillo", lambda: check_prop_sencillo(GT(_radix(3), alt), Fraction(1, 3), depth)),
        ("prop_sencillo", lambda: check_prop_sencillo(GT(_radix(10), one), Fraction(3, 10), depth)),
        ("prop_sencillo", lambda: check_prop_sencillo(GT(chain, alt), Fraction(1, 2), depth)),
        ("prop_sencillo", lambda: check_prop_sencillo(GT(build_counterexample(12), alt), Fraction(1, 2), 10)),
        ("lemma2_lemma3", lambda: check_lemma2_lemma3(GT(_radix(2), one), Fraction(1, 2), depth)),
        ("lemma2_lemma3", lambda: check_lemma2_lemma3(GT(chain, alt), Fraction(1, 2), depth)),
        ("lemma2_lemma3", lambda: check_lemma2_lemma3(GT(_radix(2), WeightSequence.const(0)), Fraction(1, 2), depth)),
        ("lemma2_lemma3", lambda: check_lemma2_lemma3(GT(uneven, alt), Fraction(1, 3), uneven_depth)),
        ("mainD_family", lambda: check_mainD_family(GT(_radix(2), alt), Fraction(1, 2), depth)),
        ("mainD_family", lambda: check_mainD_family(GT(_radix(3), one), Fraction(1, 3), depth)),
        ("mainD_family", lambda: check_mainD_family(GT(_radix(2), WeightSequence.geometric(1, Fraction(1, 2))),
                                                    Fraction(1, 2), depth)),
        ("mainD_family", lambda: check_mainD_family(GT(uneven, alt), Fraction(1, 3), uneven_depth)),
        ("c0_counterexample", lambda: check_c0_counterexample(12, seed)),
        ("rpar", lambda: check_rpar(GT(_radix(3), one), Fraction(1, 2), depth)),
        ("rpar", lambda: check_rpar(GT(_radix(3), alt), Fraction(1, 2), depth)),
        ("rpar", lambda: check_rpar(GT(_radix(2), one), Fraction(1, 3), depth)),
        ("rpar", lambda: check_rpar(GT(chain, one), Fraction(1, 5), depth)),
        ("rpar", lambda: check_rpar(GT(_radix(3), alt), Fraction(1, 4), depth)),
        ("counterexample_derivative", lambda: check_counterexample_derivative(counter_depth, False, seed)),
        ("counterexample_derivative", lambda: check_counterexample_derivative(counter_depth, True, seed)),
        ("superdiff_example", lambda: check_superdiff_example(20)),
        ("nonnegative_weights", lambda: check_nonnegative_weights(depth)),
        ("shifted_sums", lambda: check_shifted_sums(min(depth, 12))),
    ]


CHECK_FAMILIES = ("prop_sencillo", "lemma2_lemma3", "mainD_family", "c0_counterexample", "rpar",
                  "counterexample_derivative", "superdiff_example", "nonnegative_weights", "shifted_sums")

CSV_COLUMNS = ["check_id", "instance", "depth", "status", "asserted", "seed", "message", "witnesses"]


@dataclass
class SuiteSummary:
    results: list[CheckResult]
    warnings: list[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return 1 if any(r.status == "fail" for r in self.results) else 0

    def counts(self) -> dict[str, int]:
        out = {"pass": 0, "fail": 0, "inapplicable": 0}
        for r in self.results:
            out[r.status] += 1
        return out

    def text(self, timings: bool = False) -> str:
        lines = [f"warning: {w}" for w in self.warnings]
        for r in self.results:
            t = f"  {r.wall_time:.2f}s" if timings else ""
            line = f"{r.status.upper():<12} {r.check_id:<28} depth {r.depth:<3} asserted {r.asserted:<5}{t}  {r.instance}"
            lines.append(line)
            if r.status != "pass":
                detail = r.message or ", ".join(f"{k}={v}" for k, v in r.witnesses.items())
                lines.append(f"{'':<13}{detail}")
        c = self.counts()
        lines.append(f"summary: {c['pass']} pass, {c['fail']} fail, {c['inapplicable']} inapplicable")
        return "\n".join(lines) + "\n"

    def csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(CSV_COLUMNS)
        for r in self.results:
            wit = "; ".join(f"{k}={v}" for k, v in r.witnesses.items())
            wr.writerow([r.check_id, r.instance, r.depth, r.status, r.asserted,
                         "" if r.seed is None else r.seed, r.message, wit])
        return buf.getvalue()


def run_suite(filter: str | None = None, depth: int = 15, counter_depth: int = 10, seed: int = 0,
              report_path=None, csv_path=None) -> SuiteSummary:
    """Run every check whose id contains ``filter`` (all when ``None``)."""
    plan = _suite(depth, counter_depth, seed)
    chosen = [(cid, fn) for cid, fn in plan if filter is None or filter in cid]
    summary = SuiteSummary([])
    if not chosen:
        summary.warnings.append(f"no check matches filter {filter!r}")
    for cid, fn in chosen:
        try:
            summary.results.append(fn())
        except AssertionError as exc:
            summary.results.append(CheckResult(cid, "", depth, "fail", {"error": str(exc)}, seed, 0.0, 1,
                                               str(exc)))
    if report_path is not None:
        with open(report_path, "w") as fh:
            fh.write(summary.text())
    if csv_path is not None:
        with open(csv_path, "w", newline="") as fh:
            fh.write(summary.csv())
    return summary
