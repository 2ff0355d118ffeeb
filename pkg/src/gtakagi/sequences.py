"""Neighbour sequences toward a base point and exact difference-quotient traces."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .decomposition import Decomposition, ReflectedDecomposition
from .evaluation import GeneralizedTakagi, reduced_instance
from .numerics import RatInterval, format_rational

__all__ = [
    "NeighborSeq",
    "neighbors",
    "secant",
    "TraceRow",
    "QuotientTrace",
    "delta_trace",
    "gamma_trace",
    "Reduction",
    "reduce_to_D1",
    "slopes",
    "ChordRow",
    "midpoint_chord_trace",
    "generic_chord_trace",
    "effective_rho",
    "write_trace_csv",
    "NonMonotoneSequence",
    "ImpossibleConfiguration",
]


class NonMonotoneSequence(ValueError):
    def __init__(self, level: int, y_n, y_next):
        super().__init__(
            f"y-sequence not strictly monotone at level {level}: "
            f"y_{level} = {format_rational(y_n)}, y_{level + 1} = {format_rational(y_next)}")
        self.level = level


class ImpossibleConfiguration(AssertionError):
    """A configuration excluded by the mesh hypothesis was observed."""


def effective_rho(d: Decomposition, top: int) -> Fraction:
    """Declared ``rho`` if any, else the smallest measured level ratio up to ``top``."""
    if d.rho_declared is not None:
        return d.rho_declared
    return min(d.rho_level(n) for n in range(top + 1))


def _alpha_ok(d: Decomposition, rho: Fraction, n: int) -> bool:
    """``alpha_{n+1} <= rho / (1 - rho) alpha_n`` (vacuous for ``rho = 1``)."""
    if rho == 1:
        return True
    return d.alpha(n + 1) <= rho / (1 - rho) * d.alpha(n)


# -- neighbours --------------------------------------------------------------

@dataclass(frozen=True)
class NeighborSeq:
    """Per-level neighbours of ``base``; ``c[n]`` is ``None`` when ``base`` lies in ``D_n``."""

    base: Fraction
    side: str
    a: tuple
    b: tuple
    c: tuple
    in_level: tuple

    @property
    def depth(self) -> int:
        return len(self.a) - 1

    @property
    def y(self) -> tuple:
        """Adjacent points on the chosen side (``b`` for right, ``a`` for left)."""
        return self.a if self.side == "left" else self.b


def neighbors(d: Decomposition, x, depth: int, side: str = "straddle") -> NeighborSeq:
    x = Fraction(x)
    if side not in ("left", "right", "straddle"):
        raise ValueError(f"unknown side {side!r}")
    if not (d.lo < x < d.hi):
        raise ValueError(f"x={format_rational(x)} not strictly inside [{d.lo}, {d.hi}]")
    a, b, c, inside = [], [], [], []
    for n in range(depth + 1):
        an, bn = d.left_of(n, x), d.right_of(n, x)
        member = d.contains(n, x)
        a.append(an)
        b.append(bn)
        inside.append(member)
        c.append(None if member else (an + bn) / 2)
    return NeighborSeq(x, side, tuple(a), tuple(b), tuple(c), tuple(inside))


def secant(T: GeneralizedTakagi, u, v, eps) -> RatInterval:
    """Enclosure of ``(T(v) - T(u)) / (v - u)`` of width at most ``2 eps / |v - u|``."""
    u, v = Fraction(u), Fraction(v)
    if u == v:
        raise ValueError("secant needs u != v")
    half = Fraction(eps) / 2
    tu, tv = T.value(u, half), T.value(v, half)
    diff = tv - tu
    return diff.scale(1 / (v - u))


# -- reduction to x in D_1, w_0 = 0 -----------------------------------------

def slopes(d: Decomposition, k: int, x) -> tuple[int, int]:
    """One-sided derivatives ``(g_k'^-(x), g_k'^+(x))``."""
    x = Fraction(x)
    if d.contains(k, x):
        return -1, 1
    a, b = d.left_of(k, x), d.right_of(k, x)
    c = (a + b) / 2
    if x < c:
        return 1, 1
    if x > c:
        return -1, -1
    return 1, -1


@dataclass(frozen=True)
class Reduction:
    instance: GeneralizedTakagi
    n0: int
    G_plus: Fraction
    G_minus: Fraction
    offset: int


def reduce_to_D1(T: GeneralizedTakagi, x) -> Reduction:
    """Split ``T = G_{n0-1} + R`` at ``x in D_{n0}`` and re-index ``R`` so that ``x in D'_1``, ``w'_0 = 0``."""
    x = Fraction(x)
    n0 = T.exact_level(x)
    if n0 is None:
        raise ValueError(f"x={format_rational(x)} is not in D up to level {min(T.exact_search, T.decomposition.depth)}")
    gp = gm = Fraction(0)
    for k in range(n0):
        wk = T.weights(k)
        if wk:
            lo_s, hi_s = slopes(T.decomposition, k, x)
            gm += wk * lo_s
            gp += wk * hi_s
    offset = n0 - 1
    return Reduction(reduced_instance(T, offset), n0, gp, gm, offset)


# -- Delta / Gamma traces ------------------------------------------------

@dataclass
class TraceRow:
    n: int
    y: Fraction
    Delta: Fraction
    Gamma: Fraction | None = None
    delta: Fraction | None = None
    delta_extracted: Fraction | None = None
    eta: Fraction | None = None
    lam: Fraction | None = None
    level: int = 0
    width: Fraction = Fraction(0)
    hypothesis: bool = True
    delta_in_range: bool | None = None
    lemma2_ok: bool | None = None
    lemma3_ok: bool | None = None
    secant_ok: bool = True


@dataclass
class QuotientTrace:
    x: Fraction
    side: str
    rho: Fraction
    rows: list[TraceRow] = field(default_factory=list)
    description: str = ""

    @property
    def indices(self) -> list[int]:
        return [r.n for r in self.rows]

    def row(self, n: int) -> TraceRow:
        for r in self.rows:
            if r.n == n:
                return r
        raise KeyError(n)

    @property
    def deltas(self) -> list[Fraction]:
        return [r.Delta for r in self.rows]


def _oriented(T: GeneralizedTakagi, x: Fraction, side: str):
    if side == "right":
        return T, x
    if side == "left":
        refl = ReflectedDecomposition(T.decomposition)
        return GeneralizedTakagi(refl, T.weights, T.exact_search), refl.reflect(x)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def _exact(T: GeneralizedTakagi, p: Fraction) -> Fraction:
    v = T.exact_value(p)
    if v is None:
        raise ValueError(f"{format_rational(p)} not in D within the searched levels")
    return v


def delta_trace(T: GeneralizedTakagi, x, side: str = "right", depth: int = 15) -> QuotientTrace:
    """Exact ``Delta_n``, ``Gamma_n``, ``delta_n``, ``eta_n``, ``lambda_n`` along ``y_n``.

    Requires ``w_0 = 0`` and ``x in D_1`` (see :func:`reduce_to_D1`).  Left
    traces are right traces of the reflected instance, so quotients there are
    reported in the reflected orientation while ``y_n`` stays in original
    coordinates.
    """
    x = Fraction(x)
    if T.weights(0) != 0:
        raise ValueError("w_0 must vanish; subtract G_{n0-1} with reduce_to_D1 first")
    if not T.decomposition.contains(1, x):
        raise ValueError(f"x={format_rational(x)} must lie in D_1")
    S, xs = _oriented(T, x, side)
    d, w = S.decomposition, S.weights
    top = depth + 1 if depth + 1 <= S.max_level else depth
    y: dict[int, Fraction] = {}
    for n in range(1, top + 1):
        yn = d.right_of(n, xs)
        if yn is None:
            raise ValueError(f"no D_{n} point on the {side} of x")
        y[n] = yn
    for n in range(1, top):
        if not y[n + 1] < y[n]:
            raise NonMonotoneSequence(n, y[n], y[n + 1])

    rho = effective_rho(d, top)
    hyp = all(_alpha_ok(d, rho, n) for n in range(top))
    Tx = _exact(S, xs)
    W = [w(k) for k in range(top + 1)]
    prefix = [Fraction(0)]
    for k in range(1, top + 1):
        prefix.append(prefix[-1] + W[k])  # prefix[m] = sum_{k=1}^{m} w_k

    def g(k, p):
        return d.distance(k, p)

    trace = QuotientTrace(x, side, rho, description=S.describe())
    for n in range(1, depth + 1):
        yn = y[n]
        h = yn - xs
        Delta = sum((W[k] * g(k, yn) for k in range(1, n)), Fraction(0)) / h
        row = TraceRow(n, yn if side == "right" else d.reflect(yn), Delta, level=n - 1, hypothesis=hyp)
        row.secant_ok = (_exact(S, yn) - Tx) / h == Delta
        if n >= 2:
            far = [k for k in range(1, n - 1) if g(k, yn) != h]
            if far and hyp:
                raise ImpossibleConfiguration(
                    f"g_{far[-1]}(y_{n}) != y_{n} - x at level {n} although the mesh hypothesis holds")
            delta_prev = g(n - 1, yn) / h
            row.lemma2_ok = Delta == prefix[n - 2] + delta_prev * W[n - 1]
        if n + 1 in y:
            y1 = y[n + 1]
            row.delta = g(n, y1) / (y1 - xs)
            row.delta_in_range = rho <= row.delta <= 1
            step = yn - y1
            row.Gamma = sum((W[k] * (g(k, yn) - g(k, y1)) for k in range(1, n + 1)), Fraction(0)) / step
            row.secant_ok = row.secant_ok and (_exact(S, yn) - _exact(S, y1)) / step == row.Gamma
            row.lam = row.Delta - row.Gamma
        trace.rows.append(row)

    rows = {r.n: r for r in trace.rows}
    for r in trace.rows:
        n = r.n
        nxt = rows.get(n + 1)
        if nxt is not None and W[n] != 0:
            r.delta_extracted = (nxt.Delta - prefix[n - 1]) / W[n]
        if r.delta is not None:
            d_prev = rows[n - 1].delta if n >= 2 else Fraction(1)
            r.eta = r.delta * W[n] + (1 - d_prev) * W[n - 1]
            if nxt is not None and nxt.Delta - r.Delta != r.eta:
                r.lemma2_ok = False
        if n >= 2 and r.Gamma is not None:
            d_prev = rows[n - 1].delta
            if d_prev is not None and d_prev < 1 and r.delta < 1:
                coeff = (y[n - 1] - y[n] - (y[n + 1] - xs)) / (y[n] - y[n + 1])
                r.lemma3_ok = r.Gamma == prefix[n - 2] + coeff * W[n - 1] - W[n]
    return trace


def gamma_trace(T: GeneralizedTakagi, x, side: str = "right", depth: int = 15) -> QuotientTrace:
    """Same trace restricted to rows carrying ``Gamma_n``."""
    tr = delta_trace(T, x, side, depth + 1 if depth + 1 <= T.max_level else depth)
    tr.rows = [r for r in tr.rows if r.Gamma is not None and r.n <= depth]
    return tr


# -- chord quotients off D -----------------------------------------------------

@dataclass
class ChordRow:
    n: int
    mode: str  # midpoint | straddle | right | left
    u: Fraction
    v: Fraction
    quotient: Fraction
    expected: Fraction
    ratio: Fraction | None
    ratio_bound: Fraction | None

    @property
    def identity_ok(self) -> bool:
        return self.quotient == self.expected

    @property
    def ratio_ok(self) -> bool:
        return self.ratio is None or self.ratio <= self.ratio_bound


def _quotient(T: GeneralizedTakagi, u: Fraction, v: Fraction) -> Fraction:
    return (_exact(T, v) - _exact(T, u)) / (v - u)


def midpoint_chord_trace(T: GeneralizedTakagi, x, depth: int) -> list[ChordRow]:
    """Quotients over ``[b_{n+1}, b_n]`` at levels where ``x`` is a midpoint.

    Expected value: ``sum_{k<k0} w_k g_k'(x) - sum_{k=k0}^{n} w_k`` where
    ``k0`` is the first midpoint level; rows are emitted only where every
    earlier ``g_k`` is linear on ``[x, b_n]``.
    """
    x = Fraction(x)
    d, w = T.decomposition, T.weights
    rho = effective_rho(d, depth)
    mids = [n for n in range(depth + 1) if d.is_midpoint(n, x)]
    if not mids:
        raise ValueError(f"x={format_rational(x)} is not a midpoint at any level <= {depth}")
    k0 = mids[0]
    if mids != list(range(k0, depth + 1)):
        raise ValueError("x is not a midpoint at every level from its first midpoint level on")
    base = Fraction(0)
    for k in range(k0):
        base += w(k) * slopes(d, k, x)[1]
    rows = []
    total = Fraction(0)
    for n in range(k0, depth):
        total += w(n)
        bn, b1 = d.right_of(n, x), d.right_of(n + 1, x)
        if b1 == bn:  # repeated level
            continue
        if any(_kink_inside(d, k, x, bn) for k in range(k0)):
            continue
        rows.append(ChordRow(n, "midpoint", b1, bn, _quotient(T, b1, bn), base - total,
                             (b1 - x) / (bn - b1), 1 / rho))
    return rows


def _kink_inside(d: Decomposition, k: int, u, v) -> bool:
    """Whether ``g_k`` has a kink (point or midpoint of ``D_k``) in the open interval ``(u, v)``."""
    inner = [p for p in d.points_between(k, u, v) if u < p < v]
    if inner:
        return True
    a, b = d.left_of(k, v), d.right_of(k, u)
    if a is None or b is None or a >= b:
        return False
    return u < (a + b) / 2 < v


def generic_chord_trace(T: GeneralizedTakagi, x, depth: int) -> list[ChordRow]:
    """Straddle or one-sided chord quotient at each level, with the expected slope sum."""
    x = Fraction(x)
    d, w = T.decomposition, T.weights
    rho = effective_rho(d, depth)
    nb = neighbors(d, x, depth)
    if any(nb.in_level) or any(d.is_midpoint(n, x) for n in range(depth + 1)):
        raise ValueError("generic chord trace needs x outside D and outside every midpoint set")
    g_slope = [slopes(d, k, x)[1] for k in range(depth + 1)]
    rows = []
    for n in range(1, depth + 1):
        expected = sum((w(k) * g_slope[k] for k in range(n)), Fraction(0))
        an, bn, cn = nb.a[n], nb.b[n], nb.c[n]
        inside = [k for k in range(n) if an < nb.c[k] < bn]
        if not inside:
            rows.append(ChordRow(n, "straddle", an, bn, _quotient(T, an, bn), expected, None, None))
        elif cn < x:
            bp = nb.b[n - 1]
            rows.append(ChordRow(n, "right", bn, bp, _quotient(T, bn, bp), expected,
                                 (bn - x) / (bp - bn), 1 / rho))
        else:
            ap = nb.a[n - 1]
            rows.append(ChordRow(n, "left", ap, an, _quotient(T, ap, an), expected,
                                 (x - ap) / (an - ap), 1 / rho + 1))
    return rows


# -- CSV -------------------------------------------------------------------------

TRACE_COLUMNS = ["n", "y_n", "a_n", "b_n", "Delta_n", "Gamma_n", "delta_n", "eta_n", "lambda_n",
                 "partial_sum_level", "enclosure_width", "mode", "ratio"]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, Fraction):
        return format_rational(v)
    return str(v)


def write_trace_csv(rows: Iterable, path_or_file) -> None:
    """Write :class:`TraceRow` or :class:`ChordRow` records with exact ``p/q`` fields."""
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(TRACE_COLUMNS)
        for r in rows:
            if isinstance(r, TraceRow):
                wr.writerow([r.n, _fmt(r.y), "", "", _fmt(r.Delta), _fmt(r.Gamma), _fmt(r.delta),
                             _fmt(r.eta), _fmt(r.lam), r.level, _fmt(r.width), "y", ""])
            else:
                wr.writerow([r.n, "", _fmt(r.u), _fmt(r.v), _fmt(r.quotient), "", "", "", "",
                             r.n + 1, "0", r.mode, _fmt(r.ratio)])
    finally:
        if own:
            fh.close()
