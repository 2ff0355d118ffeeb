"""Finite-horizon Dini estimates, sub/superdifferential verdicts and related certificates.

Nothing here claims a limit.  Verdicts are either exact statements about the
finitely many quotients computed up to a horizon or evidence at that horizon.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .decomposition import Decomposition, validate
from .evaluation import GeneralizedTakagi, WeightSequence
from .numerics import RatInterval, format_rational
from .sequences import effective_rho

__all__ = [
    "PointClass",
    "classify",
    "DiniEstimate",
    "dini",
    "SubdiffResult",
    "subdifferential_estimate",
    "superdifferential_estimate",
    "BinaryExpansion",
    "parse_binary",
    "takagi_superdiff_formula",
    "FormulaInapplicable",
    "LocalMinWitness",
    "local_min_witness",
    "PartialSumLimits",
    "partial_sum_liminf_limsup",
    "ShiftedSumReport",
    "shifted_sum_test",
    "ChordCheck",
    "chord_limit_check",
    "DEFAULT_ZETAS",
    "DEFAULT_TOLERANCE",
]

DEFAULT_ZETAS = (Fraction(0), Fraction(1), Fraction(-1), Fraction(10), Fraction(-10))
DEFAULT_TOLERANCE = Fraction(1, 10 ** 6)


# -- classification -----------------------------------------------------------

@dataclass(frozen=True)
class PointClass:
    kind: str  # in_D | in_D_tilde | generic
    n0: int | None
    tilde_levels: tuple[int, ...]
    horizon: int

    def __str__(self) -> str:
        if self.kind == "in_D":
            return f"in_D({self.n0})"
        if self.kind == "in_D_tilde":
            return f"in_D_tilde(levels {_ranges(self.tilde_levels)})"
        return "generic"


def _ranges(levels: Sequence[int]) -> str:
    if not levels:
        return "none"
    if list(levels) == list(range(levels[0], levels[-1] + 1)):
        return f"{levels[0]}..{levels[-1]}"
    return ",".join(map(str, levels))


def classify(d: Decomposition, x, max_level: int | None = None) -> PointClass:
    """Exact membership of ``x`` in ``D_n`` and ``D̃_n`` for ``n <= max_level``."""
    x = Fraction(x)
    if not (d.lo <= x <= d.hi):
        raise ValueError(f"x={format_rational(x)} outside the carrier")
    top = d.depth if max_level is None else max_level
    n0 = d.first_level_containing(x, top)
    stop = top if n0 is None else n0 - 1
    tilde = tuple(n for n in range(stop + 1) if d.is_midpoint(n, x))
    if n0 is not None:
        return PointClass("in_D", n0, tilde, top)
    if tilde:
        return PointClass("in_D_tilde", None, tilde, top)
    return PointClass("generic", None, (), top)


# -- Dini derivatives ----------------------------------------------------------

@dataclass
class DiniEstimate:
    """Enclosures of the extreme one-sided quotients sampled at the horizon.

    ``d_plus`` is the smallest right quotient and ``D_minus`` the largest
    left quotient over the sampling window of the deepest level.
    """

    d_plus_lower: Fraction
    d_plus_upper: Fraction
    D_minus_lower: Fraction
    D_minus_upper: Fraction
    horizon: int
    samples: int
    history: list = field(default_factory=list)  # (n, right_min, left_max) intervals

    @property
    def d_plus(self) -> RatInterval:
        return RatInterval(self.d_plus_lower, self.d_plus_upper)

    @property
    def D_minus(self) -> RatInterval:
        return RatInterval(self.D_minus_lower, self.D_minus_upper)

    def certified_empty_depths(self) -> list[int]:
        """Depths where some left quotient exceeds every right quotient, exactly."""
        return [n for n, r, l in self.history if r is not None and l is not None and l.lo > r.hi]


def _window(d: Decomposition, x: Fraction, n: int, side: str, max_samples: int) -> list[Fraction]:
    """Points of ``D_n`` strictly on one side of ``x`` within the widest window
    ``(x, b_h]`` (or ``[a_h, x)``) holding at most ``max_samples`` points."""
    best: list[Fraction] = []
    for h in range(n, -1, -1):
        if side == "right":
            edge = d.right_of(h, x)
            if edge is None:
                break
            pts = [p for p in d.points_between(n, x, edge) if p > x]
        else:
            edge = d.left_of(h, x)
            if edge is None:
                break
            pts = [p for p in d.points_between(n, edge, x) if p < x]
        if len(pts) > max_samples or h <= n // 2 - 1:
            break
        best = pts
    return best


def _min_iv(ivs: list[RatInterval]) -> RatInterval:
    return RatInterval(min(i.lo for i in ivs), min(i.hi for i in ivs))


def _max_iv(ivs: list[RatInterval]) -> RatInterval:
    return RatInterval(max(i.lo for i in ivs), max(i.hi for i in ivs))


def dini(T: GeneralizedTakagi, x, depth: int, eps=None, max_samples: int = 256) -> DiniEstimate:
    """Sample one-sided quotients at points of ``D_n`` near ``x`` for ``n <= depth``.

    At level ``n`` the samples are the points of ``D_n`` within
    ``(x, b_h]`` and ``[a_h, x)`` for the smallest ``h >= n/2`` keeping the
    sample count bounded, which covers the scales between ``alpha_h`` and
    ``alpha_n``.
    """
    x = Fraction(x)
    d = T.decomposition
    if eps is None:
        eps = d.alpha(depth) / 2 ** 30
    eps = Fraction(eps)
    tx = T.value(x, eps)
    history = []
    samples = 0
    for n in range(1, depth + 1):
        right = left = None
        for side in ("right", "left"):
            pts = _window(d, x, n, side, max_samples)
            if not pts:
                continue
            qs = [(T.value(p, eps) - tx).scale(1 / (p - x)) for p in pts]
            samples += len(qs)
            if side == "right":
                right = _min_iv(qs)
            else:
                left = _max_iv(qs)
        history.append((n, right, left))
    last_r = next((r for _, r, _ in reversed(history) if r is not None), None)
    last_l = next((l for _, _, l in reversed(history) if l is not None), None)
    if last_r is None and last_l is None:
        raise ValueError("no samples on either side of x")
    inf_iv = RatInterval(Fraction(0), Fraction(0))
    r = last_r or inf_iv
    l = last_l or inf_iv
    return DiniEstimate(r.lo, r.hi, l.lo, l.hi, depth, samples, history)


# -- local minimum witness (nonnegative weights, x in D) ----------------------

@dataclass(frozen=True)
class LocalMinWitness:
    zeta: Fraction
    n: int
    grid_level: int
    radius: Fraction
    grid_points: int
    min_value: Fraction
    ok: bool


def _kinks(d: Decomposition, k: int, u: Fraction, v: Fraction) -> set[Fraction]:
    """Points and midpoints of ``D_k`` inside ``[u, v]``."""
    pts = d.points_between(k, u, v)
    ext = list(pts)
    a, b = d.left_of(k, u), d.right_of(k, v)
    if a is not None:
        ext.insert(0, a)
    if b is not None:
        ext.append(b)
    out = set(pts)
    for p, q in zip(ext, ext[1:]):
        m = (p + q) / 2
        if u <= m <= v:
            out.add(m)
    return out


def local_min_witness(T: GeneralizedTakagi, x, zeta, grid_level: int | None = None,
                      max_level: int | None = None) -> LocalMinWitness:
    """Certify that ``T(z) - zeta z`` has a local minimum at ``x in D``.

    The threshold level ``n`` is the least with
    ``sum_{k=n0}^{n} w_k > sum_{k<n0} w_k + |zeta|``.  The truncated function
    ``T_N`` is piecewise linear, so checking ``T_N(x+h) - T_N(x) - zeta h >= 0``
    at every kink with ``|h| <= rho alpha_n / 3`` settles it; the remaining terms
    only add ``w_k g_k(x+h) >= 0``.
    """
    x, zeta = Fraction(x), Fraction(zeta)
    w, d = T.weights, T.decomposition
    if not w.nonnegative:
        raise ValueError("local minimum witness requires nonnegative weights")
    if w.in_l1:
        raise ValueError("local minimum witness requires weights outside l^1")
    n0 = T.exact_level(x)
    if n0 is None:
        raise ValueError(f"x={format_rational(x)} not in D within the searched levels")
    before = sum((w(k) for k in range(n0)), Fraction(0))
    target = before + abs(zeta)
    top = T.max_level if max_level is None else max_level
    acc = Fraction(0)
    n = None
    for k in range(n0, top + 1):
        acc += w(k)
        if acc > target:
            n = k
            break
    if n is None:
        raise ValueError(f"threshold not reached by level {top}")
    N = n + 2 if grid_level is None else grid_level
    N = max(N, n0)
    rho = effective_rho(d, min(N, d.depth))
    radius = rho * d.alpha(n) / 3
    u, v = max(d.lo, x - radius), min(d.hi, x + radius)
    grid = {u, v}
    for k in range(N + 1):
        grid |= _kinks(d, k, u, v)
    base = T.partial_sum(N, x)
    vals = [T.partial_sum(N, z) - base - zeta * (z - x) for z in sorted(grid)]
    low = min(vals)
    return LocalMinWitness(zeta, n, N, radius, len(grid), low, low >= 0)


# -- sub / superdifferential verdicts ------------------------------------------

@dataclass
class SubdiffResult:
    verdict: str  # empty-certified | candidate-interval | all-R-evidence | derivative-candidate
    interval: RatInterval | None
    horizon: int
    point_class: PointClass
    dini: DiniEstimate | None = None
    certified_depths: tuple[int, ...] = ()
    witnesses: tuple[LocalMinWitness, ...] = ()

    def negated(self) -> "SubdiffResult":
        iv = None if self.interval is None else -self.interval
        return SubdiffResult(self.verdict, iv, self.horizon, self.point_class, self.dini,
                             self.certified_depths, self.witnesses)

    def describe(self) -> str:
        if self.verdict == "empty-certified":
            return f"empty (certified at depths {_ranges(self.certified_depths)})"
        if self.verdict == "all-R-evidence":
            zs = ", ".join(format_rational(w.zeta) for w in self.witnesses)
            return f"all of R (local-minimum witnesses for zeta in {{{zs}}})"
        return f"{self.verdict} {self.interval} at horizon {self.horizon}"


def subdifferential_estimate(T: GeneralizedTakagi, x, depth: int, zetas=DEFAULT_ZETAS,
                             tolerance=DEFAULT_TOLERANCE) -> SubdiffResult:
    x = Fraction(x)
    pc = classify(T.decomposition, x, min(depth, T.decomposition.depth))
    if pc.kind == "in_D" and T.weights.nonnegative and not T.weights.in_l1:
        wits = tuple(local_min_witness(T, x, z) for z in zetas)
        if all(wt.ok for wt in wits):
            return SubdiffResult("all-R-evidence", None, depth, pc, witnesses=wits)
    est = dini(T, x, depth)
    cert = tuple(est.certified_empty_depths())
    if cert:
        return SubdiffResult("empty-certified", None, depth, pc, est, cert)
    lo, hi = est.D_minus_lower, est.d_plus_upper
    if lo > hi:
        lo, hi = hi, lo
    iv = RatInterval(lo, hi)
    verdict = "derivative-candidate" if iv.width <= tolerance else "candidate-interval"
    return SubdiffResult(verdict, iv, depth, pc, est)


def superdifferential_estimate(T: GeneralizedTakagi, x, depth: int, zetas=DEFAULT_ZETAS,
                               tolerance=DEFAULT_TOLERANCE) -> SubdiffResult:
    """``∂⁺T(x) = -∂(-T)(x)``."""
    return subdifferential_estimate(T.negated(), x, depth, zetas, tolerance).negated()


# -- binary expansions and the Takagi superdifferential -----------------------

class FormulaInapplicable(ValueError):
    pass


@dataclass(frozen=True)
class BinaryExpansion:
    """Digits ``eps_1 eps_2 …`` given as a finite prefix followed by a repeating block."""

    prefix: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be non-empty")
        if any(e not in (0, 1) for e in self.prefix + self.period):
            raise ValueError("digits must be 0 or 1")

    def digit(self, n: int) -> int:
        """``eps_n`` for ``n >= 1``."""
        if n < 1:
            raise IndexError("digits are indexed from 1")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.period[(n - 1 - len(self.prefix)) % len(self.period)]

    @property
    def value(self) -> Fraction:
        L, P = len(self.prefix), len(self.period)
        head = sum((Fraction(e, 2 ** (i + 1)) for i, e in enumerate(self.prefix)), Fraction(0))
        block = sum((Fraction(e, 2 ** (i + 1)) for i, e in enumerate(self.period)), Fraction(0))
        return head + block / 2 ** L / (1 - Fraction(1, 2 ** P))

    @property
    def alternating_tail(self) -> bool:
        return self.period in ((1, 0), (0, 1))

    @property
    def m(self) -> int | None:
        """Least ``m >= 1`` with ``eps_n + eps_{n+1} = 1`` for every ``n > m``."""
        if not self.alternating_tail:
            return None
        m = max(len(self.prefix), 1)
        while m > 1 and self.digit(m) + self.digit(m + 1) == 1:
            m -= 1
        return m

    def __str__(self) -> str:
        return "".join(map(str, self.prefix)) + "(" + "".join(map(str, self.period)) + ")"


_BIN_RE = re.compile(r"^(?:0\.)?([01]*)\(([01]+)\)(?:\^?∞|\^inf)?$")


def parse_binary(text: str) -> BinaryExpansion:
    """Parse ``11010(10)``: digits after the binary point, repeating block in parentheses."""
    m = _BIN_RE.match(text.strip().replace(" ", ""))
    if not m:
        raise ValueError(f"not an eventually periodic binary expansion: {text!r}")
    return BinaryExpansion(tuple(int(c) for c in m.group(1)), tuple(int(c) for c in m.group(2)))


def takagi_superdiff_formula(e: BinaryExpansion) -> RatInterval:
    """``m - 2 sum_{k<=m} eps_k + [-1, 0]`` if ``eps_{m+1} = 1``, else ``+ [0, 1]``."""
    m = e.m
    if m is None:
        raise FormulaInapplicable(f"formula inapplicable: tail of {e} is not alternating")
    c = m - 2 * sum(e.digit(k) for k in range(1, m + 1))
    if e.digit(m + 1) == 1:
        return RatInterval(c - 1, c)
    return RatInterval(c, c + 1)


# -- partial sums of weights ----------------------------------------------------

class PartialSumLimits(NamedTuple):
    a_est: RatInterval
    b_est: RatInterval
    exact: tuple | None


def partial_sum_liminf_limsup(w: WeightSequence, horizon: int) -> PartialSumLimits:
    """Window ``[h/2, h]`` extremes of ``S_n = sum_{k=0}^{n} w_k``, plus exact limits when known."""
    s = Fraction(0)
    window = []
    for n in range(horizon + 1):
        s += w(n)
        if n >= horizon // 2:
            window.append(s)
    a, b = min(window), max(window)
    return PartialSumLimits(RatInterval.point(a), RatInterval.point(b), w.running_sum_limits())


@dataclass(frozen=True)
class ShiftedSumReport:
    n0: int
    window_min: Fraction
    exact_liminf: object  # Fraction, ±inf, or None
    sign: int
    verdict: str
    consistent: bool


def shifted_sum_test(T: GeneralizedTakagi, x, horizon: int) -> ShiftedSumReport:
    """``liminf_n sum_{k=n0}^{n} w_k - sum_{k<n0} w_k`` against the subdifferential verdict.

    A negative value must come with an empty-subdifferential certificate.
    """
    x = Fraction(x)
    d, w = T.decomposition, T.weights
    pc = classify(d, x, min(horizon, d.depth))
    if pc.kind != "in_D":
        raise ValueError("premise fails: x is not in D")
    n0 = pc.n0
    if pc.tilde_levels != tuple(range(n0)):
        raise ValueError(f"premise fails: x is not a midpoint at every level below n0={n0}")
    rep = validate(d, max_level=min(d.depth, n0 + 3))
    if not rep.holds("alpha_ratio_le_half_rho"):
        raise ValueError("premise fails: alpha_{n+1} <= rho alpha_n / 2 does not hold")
    before = w.running_sum(n0 - 1)
    vals = []
    acc = Fraction(0)
    for n in range(n0, horizon + 1):
        acc += w(n)
        if n >= max(n0, horizon // 2):
            vals.append(acc - before)
    low = min(vals)
    lims = w.running_sum_limits()
    exact = None if lims is None else lims[0] - 2 * before
    ref = exact if exact is not None else low
    sign = 0 if ref == 0 else (1 if ref > 0 else -1)
    res = subdifferential_estimate(T, x, horizon)
    consistent = sign >= 0 or res.verdict == "empty-certified"
    return ShiftedSumReport(n0, low, exact, sign, res.verdict, consistent)


# -- chord limits -------------------------------------------------------

@dataclass(frozen=True)
class ChordCheck:
    applicable: bool
    cauchy: bool
    ratio_bound: Fraction | None
    spread: Fraction
    reason: str = ""


def chord_limit_check(quotients: Sequence[Fraction], ratios: Sequence[Fraction] | None = None,
                      mode: str = "straddle", tolerance=DEFAULT_TOLERANCE) -> ChordCheck:
    """Is the chord quotient sequence Cauchy within ``tolerance`` over its second half?

    One-sided modes need the exact ratios ``(u_n - x)/(v_n - u_n)``; a ratio
    sequence that keeps doubling over the horizon is treated as unbounded and
    makes the check inapplicable.
    """
    q = list(quotients)
    if len(q) < 2:
        raise ValueError("need at least two quotients")
    tail = q[len(q) // 2:]
    spread = max(tail) - min(tail)
    bound = None
    if mode in ("right", "left"):
        if not ratios:
            raise ValueError(f"{mode} mode needs the ratio sequence")
        r = list(ratios)
        bound = max(r)
        head, rest = r[: max(1, len(r) // 2)], r[len(r) // 2:]
        if max(rest) > 2 * max(head) and all(b > a for a, b in zip(rest, rest[1:])):
            return ChordCheck(False, False, bound, spread, "ratio unbounded over the horizon")
    elif mode != "straddle":
        raise ValueError(f"unknown mode {mode!r}")
    return ChordCheck(True, spread <= Fraction(tolerance), bound, spread)
