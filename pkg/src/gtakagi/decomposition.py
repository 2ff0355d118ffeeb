"""Nested point sets ``D_0 ⊆ D_1 ⊆ …`` on a carrier interval.

A decomposition is queried level by level.  Generator-backed decompositions
(radix grids, divisor chains, the ``[-1, 1]`` counterexample, the uneven
split rule) answer neighbour and membership queries in closed form, so levels
far beyond anything that could be enumerated remain usable.  Explicit
decompositions (loaded from a file) stop at their stored depth.

Level ``n`` always means ``D_n``; ``depth`` is the deepest level that is
stored, validated and saved.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .numerics import format_rational, parse_rational

__all__ = [
    "Decomposition",
    "DecompositionError",
    "DecompositionFormatError",
    "ExplicitDecomposition",
    "ChainDecomposition",
    "CounterexampleDecomposition",
    "SplitRuleDecomposition",
    "ReindexedDecomposition",
    "ReflectedDecomposition",
    "Majorant",
    "LevelGeometry",
    "LevelReport",
    "HypothesisReport",
    "build_radix",
    "build_divisor_chain",
    "build_counterexample",
    "build_uneven",
    "build_c0_counterexample",
    "lift",
    "shift",
    "geometry",
    "validate",
    "load",
    "loads",
    "save",
    "dumps",
]


class DecompositionError(ValueError):
    """A decomposition violates one of its structural invariants."""


class DecompositionFormatError(DecompositionError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Majorant:
    """Geometric majorant ``value_k <= coeff * ratio**k`` for ``k >= start``."""

    coeff: Fraction
    ratio: Fraction
    start: int = 0

    def __mul__(self, other: "Majorant") -> "Majorant":
        return Majorant(self.coeff * other.coeff, self.ratio * other.ratio,
                        max(self.start, other.start))

    def bound(self, k: int) -> Fraction:
        return self.coeff * self.ratio ** k

    def tail(self, first: int) -> Fraction:
        """Bound for ``sum_{k >= first}``; requires ``first >= start`` and ratio < 1."""
        if self.ratio >= 1:
            raise ValueError("majorant ratio must be < 1 for a finite tail")
        return self.coeff * self.ratio ** first / (1 - self.ratio)


@dataclass(frozen=True)
class _Progression:
    """Points ``start + i*step`` for ``0 <= i < count``."""

    start: Fraction
    step: Fraction
    count: int

    @property
    def last(self) -> Fraction:
        return self.start + (self.count - 1) * self.step

    def mirrored(self) -> "_Progression":
        return _Progression(-self.last, self.step, self.count)

    def right_of(self, x):
        i = math.floor((x - self.start) / self.step) + 1
        i = max(i, 0)
        return None if i >= self.count else self.start + i * self.step

    def left_of(self, x):
        i = math.ceil((x - self.start) / self.step) - 1
        i = min(i, self.count - 1)
        return None if i < 0 else self.start + i * self.step

    def contains(self, x) -> bool:
        t = (x - self.start) / self.step
        return t.denominator == 1 and 0 <= t < self.count

    def between(self, u, v) -> list[Fraction]:
        i0 = max(math.ceil((u - self.start) / self.step), 0)
        i1 = min(math.floor((v - self.start) / self.step), self.count - 1)
        return [self.start + i * self.step for i in range(i0, i1 + 1)]

    def points(self) -> list[Fraction]:
        return [self.start + i * self.step for i in range(self.count)]


class Decomposition:
    """Base class: level queries by bisection over enumerated levels.

    Subclasses either supply ``_enumerate(n)`` or override the query methods
    with closed forms.
    """

    kind = "abstract"
    extendable = False

    def __init__(self, lo, hi, depth: int, rho_declared=None,
                 declared_alpha: Sequence | None = None):
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        if self.lo >= self.hi:
            raise DecompositionError("carrier interval must have lo < hi")
        if depth < 0:
            raise DecompositionError("depth must be >= 0")
        self.depth = depth
        self.rho_declared = None if rho_declared is None else Fraction(rho_declared)
        if self.rho_declared is not None and not (0 < self.rho_declared <= 1):
            raise DecompositionError("declared rho must lie in (0, 1]")
        self._declared_alpha = None if declared_alpha is None else [Fraction(a) for a in declared_alpha]
        self._cache: dict[int, tuple[Fraction, ...]] = {}

    # -- level access ------------------------------------------------------
    def check_level(self, n: int) -> None:
        if n < 0 or (n > self.depth and not self.extendable):
            raise IndexError(f"level {n} not available (stored depth {self.depth})")

    def level(self, n: int) -> tuple[Fraction, ...]:
        """Sorted points of ``D_n``."""
        self.check_level(n)
        if n not in self._cache:
            self._cache[n] = tuple(sorted(set(self._enumerate(n))))
        return self._cache[n]

    @property
    def levels(self) -> list[tuple[Fraction, ...]]:
        return [self.level(n) for n in range(self.depth + 1)]

    def _enumerate(self, n: int) -> Iterable[Fraction]:
        raise NotImplementedError

    def right_of(self, n: int, x) -> Fraction | None:
        """``min{y in D_n : y > x}`` or ``None``."""
        pts = self.level(n)
        i = bisect.bisect_right(pts, x)
        return pts[i] if i < len(pts) else None

    def left_of(self, n: int, x) -> Fraction | None:
        """``max{y in D_n : y < x}`` or ``None``."""
        pts = self.level(n)
        i = bisect.bisect_left(pts, x)
        return pts[i - 1] if i > 0 else None

    def contains(self, n: int, x) -> bool:
        pts = self.level(n)
        i = bisect.bisect_left(pts, x)
        return i < len(pts) and pts[i] == x

    def points_between(self, n: int, u, v) -> list[Fraction]:
        """Points of ``D_n`` in the closed interval ``[u, v]``."""
        pts = self.level(n)
        return list(pts[bisect.bisect_left(pts, u):bisect.bisect_right(pts, v)])

    def distance(self, n: int, x) -> Fraction:
        """``g_n(x) = dist(x, D_n)``."""
        x = Fraction(x)
        if not (self.lo <= x <= self.hi):
            raise ValueError(f"x={x} outside carrier [{self.lo}, {self.hi}]")
        if self.contains(n, x):
            return Fraction(0)
        a, b = self.left_of(n, x), self.right_of(n, x)
        return min(x - a, b - x)

    def is_midpoint(self, n: int, x) -> bool:
        """Whether ``x`` belongs to ``D̃_n``."""
        if self.contains(n, x):
            return False
        a, b = self.left_of(n, x), self.right_of(n, x)
        return a is not None and b is not None and 2 * x == a + b

    def first_level_containing(self, x, max_level: int | None = None) -> int | None:
        top = self.depth if max_level is None else max_level
        for n in range(top + 1):
            if self.contains(n, x):
                return n
        return None

    # -- mesh statistics ---------------------------------------------------
    def gaps(self, n: int) -> list[Fraction]:
        pts = self.level(n)
        return [b - a for a, b in zip(pts, pts[1:])]

    def max_gap(self, n: int) -> Fraction:
        return max(self.gaps(n))

    def min_gap(self, n: int) -> Fraction:
        return min(self.gaps(n))

    def alpha(self, n: int) -> Fraction:
        """Declared ``alpha_n`` when present, else the measured max gap."""
        if self._declared_alpha is not None and n < len(self._declared_alpha):
            return self._declared_alpha[n]
        return self.max_gap(n)

    def rho_level(self, n: int) -> Fraction:
        return self.min_gap(n) / self.alpha(n)

    def alpha_majorant(self) -> Majorant | None:
        """Geometric bound on ``alpha_k`` valid for every k, or ``None``."""
        return None

    def describe(self) -> str:
        return f"{self.kind} decomposition on [{self.lo}, {self.hi}], depth {self.depth}"

    def generator_line(self) -> str | None:
        return None

    def with_depth(self, depth: int) -> "Decomposition":
        raise DecompositionError(f"{self.kind} decomposition cannot be re-depthed")

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.describe()}>"


class ExplicitDecomposition(Decomposition):
    """Levels given extensionally; nothing beyond ``depth`` exists."""

    kind = "explicit"

    def __init__(self, lo, hi, levels: Sequence[Sequence], rho_declared=None,
                 declared_alpha: Sequence | None = None):
        super().__init__(lo, hi, len(levels) - 1, rho_declared, declared_alpha)
        for n, pts in enumerate(levels):
            pts = tuple(Fraction(p) for p in pts)
            if any(b <= a for a, b in zip(pts, pts[1:])):
                raise DecompositionError(f"level {n} is not strictly increasing")
            self._cache[n] = pts

    def _enumerate(self, n):
        return self._cache[n]


class _ProgressionDecomposition(Decomposition):
    """Each level is a finite union of arithmetic progressions."""

    extendable = True

    def _progressions(self, n: int) -> list[_Progression]:
        raise NotImplementedError

    def _enumerate(self, n):
        for p in self._progressions(n):
            yield from p.points()

    def right_of(self, n, x):
        self.check_level(n)
        cands = [c for c in (p.right_of(x) for p in self._progressions(n)) if c is not None]
        return min(cands) if cands else None

    def left_of(self, n, x):
        self.check_level(n)
        cands = [c for c in (p.left_of(x) for p in self._progressions(n)) if c is not None]
        return max(cands) if cands else None

    def contains(self, n, x):
        self.check_level(n)
        return any(p.contains(x) for p in self._progressions(n))

    def points_between(self, n, u, v):
        self.check_level(n)
        pts = set()
        for p in self._progressions(n):
            pts.update(p.between(u, v))
        return sorted(pts)


class ChainDecomposition(_ProgressionDecomposition):
    """``D_n = {k / r_n} ∩ [0, 1]`` for a divisor chain ``r_0 = 1 | r_1 | r_2 | …``.

    The ratio sequence ``r_{n+1}/r_n`` is extended periodically beyond the
    given prefix, so every level exists.  A radix grid is the chain with a
    single repeated ratio.
    """

    kind = "chain"

    def __init__(self, ratios: Sequence[int], depth: int, kind: str | None = None):
        if not ratios:
            raise DecompositionError("divisor chain needs at least one ratio")
        for b in ratios:
            if b < 2:
                raise DecompositionError(f"chain ratio {b} < 2: chain must be strictly increasing")
        super().__init__(0, 1, depth, rho_declared=1)
        self.ratios = tuple(int(b) for b in ratios)
        if kind:
            self.kind = kind
        self._dens = [1]

    def denominator(self, n: int) -> int:
        while len(self._dens) <= n:
            b = self.ratios[(len(self._dens) - 1) % len(self.ratios)]
            self._dens.append(self._dens[-1] * b)
        return self._dens[n]

    def ratio(self, n: int) -> int:
        """``beta_n = r_{n+1} / r_n``."""
        return self.ratios[n % len(self.ratios)]

    def _progressions(self, n):
        r = self.denominator(n)
        return [_Progression(Fraction(0), Fraction(1, r), r + 1)]

    # integer fast paths: x = p/q lies between k/r and (k+1)/r with k = floor(r p / q)

    def right_of(self, n, x):
        self.check_level(n)
        x = Fraction(x)
        r = self.denominator(n)
        k = r * x.numerator // x.denominator + 1
        return Fraction(k, r) if k <= r else None

    def left_of(self, n, x):
        self.check_level(n)
        x = Fraction(x)
        r = self.denominator(n)
        k = -(-r * x.numerator // x.denominator) - 1
        return Fraction(k, r) if k >= 0 else None

    def contains(self, n, x):
        self.check_level(n)
        x = Fraction(x)
        return 0 <= x <= 1 and (self.denominator(n) * x.numerator) % x.denominator == 0

    def distance(self, n, x):
        self.check_level(n)
        x = Fraction(x)
        if not 0 <= x <= 1:
            raise ValueError(f"x={x} outside carrier [0, 1]")
        r, q = self.denominator(n), x.denominator
        m = (r * x.numerator) % q
        return Fraction(min(m, q - m), q * r)

    def level(self, n):
        self.check_level(n)
        if n not in self._cache:
            r = self.denominator(n)
            self._cache[n] = tuple(Fraction(k, r) for k in range(r + 1))
        return self._cache[n]

    def max_gap(self, n):
        return Fraction(1, self.denominator(n))

    min_gap = max_gap

    def alpha_majorant(self):
        return Majorant(Fraction(1), Fraction(1, min(self.ratios)))

    def generator_line(self):
        if self.kind == "radix":
            return f"radix {self.ratios[0]} depth {self.depth}"
        dens = ",".join(str(self.denominator(n)) for n in range(max(self.depth, len(self.ratios)) + 1))
        return f"chain {dens} depth {self.depth}"

    def with_depth(self, depth):
        return ChainDecomposition(self.ratios, depth, self.kind)

    def describe(self):
        if self.kind == "radix":
            return f"radix-{self.ratios[0]} grid, depth {self.depth}"
        return f"divisor chain ratios {self.ratios} (periodic), depth {self.depth}"


class CounterexampleDecomposition(_ProgressionDecomposition):
    """Symmetric decomposition of ``[-1, 1]`` with no uniform lower mesh ratio.

    Positive part: even levels add the dyadic grid ``k/2^m``, odd levels add
    the points ``k/2^m - 3^{-(m+1)}``; the negative part mirrors it.
    """

    kind = "counterexample"

    def __init__(self, depth: int, include_zero: bool = False):
        super().__init__(-1, 1, depth)
        self.include_zero = include_zero
        self._prog_cache: dict[int, list[_Progression]] = {}

    def _progressions(self, n):
        if n not in self._prog_cache:
            pos = []
            for m in range(n // 2 + 1):
                step = Fraction(1, 2 ** m)
                pos.append(_Progression(step, step, 2 ** m))
            for m in range((n - 1) // 2 + 1 if n >= 1 else 0):
                step = Fraction(1, 2 ** m)
                pos.append(_Progression(step - Fraction(1, 3 ** (m + 1)), step, 2 ** m))
            progs = pos + [p.mirrored() for p in pos]
            if self.include_zero:
                progs.append(_Progression(Fraction(0), Fraction(1), 1))
            self._prog_cache[n] = progs
        return self._prog_cache[n]

    def alpha_majorant(self):
        # alpha_k <= 2 * 2^{-floor(k/2)} <= 4 * (3/4)^k since 2^{-1/2} < 3/4
        return Majorant(Fraction(4), Fraction(3, 4))

    def generator_line(self):
        return f"counterexample depth {self.depth}" + (" with-zero" if self.include_zero else "")

    def with_depth(self, depth):
        return CounterexampleDecomposition(depth, self.include_zero)

    def describe(self):
        z = " (0 in D_0)" if self.include_zero else ""
        return f"[-1,1] counterexample{z}, depth {self.depth}"


# Gap lengths are integers in units 2^{-n}/6; each gap of v units becomes
# 2v units at the next level and is cut into the listed pieces, left to right.
UNEVEN_RULE = {3: (3, 3), 4: (5, 3), 5: (6, 4), 6: (4, 4, 4)}


class SplitRuleDecomposition(Decomposition):
    """Deterministic uneven refinement with declared ``alpha_n = 2^{-n}``, ``rho = 1/2``.

    Gap lengths stay in ``[alpha_n / 2, alpha_n]`` and every gap is split at
    every level, but the piece next to a left endpoint is often longer than
    half its parent, which is what makes the ``delta_n < 1`` branches occur.
    """

    kind = "uneven"
    extendable = True

    def __init__(self, depth: int, rule: dict[int, tuple[int, ...]] | None = None):
        rule = dict(UNEVEN_RULE if rule is None else rule)
        for v, pieces in rule.items():
            if sum(pieces) != 2 * v or len(pieces) < 2:
                raise DecompositionError(f"split of {v} must be >= 2 pieces summing to {2 * v}")
        lengths = set(rule) | {p for ps in rule.values() for p in ps}
        if not lengths <= set(rule):
            raise DecompositionError("split rule is not closed")
        hi_len, lo_len = max(lengths), min(lengths)
        super().__init__(0, 1, depth, rho_declared=Fraction(lo_len, hi_len),
                         declared_alpha=None)
        self.rule = rule
        self.top = hi_len
        self._units = [[hi_len]]
        self._pos_cache: dict[int, list[int]] = {}

    def _unit(self, n: int) -> Fraction:
        return Fraction(1, self.top * 2 ** n)

    def _gap_units(self, n: int) -> list[int]:
        while len(self._units) <= n:
            prev = self._units[-1]
            self._units.append([p for v in prev for p in self.rule[v]])
        return self._units[n]

    def _enumerate(self, n):
        u = self._unit(n)
        return (p * u for p in self._positions(n))

    def _positions(self, n: int) -> list[int]:
        """Points of ``D_n`` as integer multiples of the level unit."""
        if n not in self._pos_cache:
            self._pos_cache[n] = [0, *itertools.accumulate(self._gap_units(n))]
        return self._pos_cache[n]

    def _locate(self, n: int, x) -> tuple[list[int], int, int, bool]:
        x = Fraction(x)
        U = self.top * 2 ** n
        num = U * x.numerator
        return self._positions(n), U, num // x.denominator, num % x.denominator == 0

    def right_of(self, n, x):
        self.check_level(n)
        P, U, k, _ = self._locate(n, x)
        i = bisect.bisect_right(P, k)
        return Fraction(P[i], U) if i < len(P) else None

    def left_of(self, n, x):
        self.check_level(n)
        P, U, k, exact = self._locate(n, x)
        i = (bisect.bisect_left(P, k) if exact else bisect.bisect_right(P, k)) - 1
        return Fraction(P[i], U) if i >= 0 else None

    def contains(self, n, x):
        self.check_level(n)
        P, _, k, exact = self._locate(n, x)
        if not exact:
            return False
        i = bisect.bisect_left(P, k)
        return i < len(P) and P[i] == k

    def alpha(self, n):
        return Fraction(1, 2 ** n)

    def alpha_majorant(self):
        return Majorant(Fraction(1), Fraction(1, 2))

    def generator_line(self):
        return f"uneven depth {self.depth}"

    def with_depth(self, depth):
        return SplitRuleDecomposition(depth, self.rule)

    def describe(self):
        return f"uneven split rule {self.rule}, depth {self.depth}"


class ReindexedDecomposition(Decomposition):
    """``D'_j = D_{index_map(j)}`` over a base decomposition."""

    kind = "reindexed"

    def __init__(self, base: Decomposition, index_map: Callable[[int], int], depth: int,
                 label: str = "reindexed", majorant: Majorant | None = None):
        super().__init__(base.lo, base.hi, depth, base.rho_declared)
        self.base = base
        self.index_map = index_map
        self.extendable = base.extendable
        self.label = label
        self._majorant = majorant

    def check_level(self, n):
        if n < 0 or (n > self.depth and not self.extendable):
            raise IndexError(f"level {n} not available (stored depth {self.depth})")

    def level(self, n):
        self.check_level(n)
        return self.base.level(self.index_map(n))

    def right_of(self, n, x):
        self.check_level(n)
        return self.base.right_of(self.index_map(n), x)

    def left_of(self, n, x):
        self.check_level(n)
        return self.base.left_of(self.index_map(n), x)

    def contains(self, n, x):
        self.check_level(n)
        return self.base.contains(self.index_map(n), x)

    def distance(self, n, x):
        self.check_level(n)
        return self.base.distance(self.index_map(n), x)

    def points_between(self, n, u, v):
        self.check_level(n)
        return self.base.points_between(self.index_map(n), u, v)

    def alpha(self, n):
        return self.base.alpha(self.index_map(n))

    def max_gap(self, n):
        return self.base.max_gap(self.index_map(n))

    def min_gap(self, n):
        return self.base.min_gap(self.index_map(n))

    def alpha_majorant(self):
        return self._majorant

    def describe(self):
        return f"{self.label} of ({self.base.describe()})"


class ReflectedDecomposition(Decomposition):
    """Mirror image under ``x -> lo + hi - x``."""

    kind = "reflected"

    def __init__(self, base: Decomposition):
        super().__init__(base.lo, base.hi, base.depth, base.rho_declared)
        self.base = base
        self.extendable = base.extendable

    def reflect(self, x):
        return self.lo + self.hi - x

    def level(self, n):
        self.check_level(n)
        return tuple(sorted(self.reflect(p) for p in self.base.level(n)))

    def right_of(self, n, x):
        y = self.base.left_of(n, self.reflect(x))
        return None if y is None else self.reflect(y)

    def left_of(self, n, x):
        y = self.base.right_of(n, self.reflect(x))
        return None if y is None else self.reflect(y)

    def contains(self, n, x):
        return self.base.contains(n, self.reflect(x))

    def distance(self, n, x):
        return self.base.distance(n, self.reflect(x))

    def points_between(self, n, u, v):
        return sorted(self.reflect(p) for p in self.base.points_between(n, self.reflect(v), self.reflect(u)))

    def alpha(self, n):
        return self.base.alpha(n)

    def max_gap(self, n):
        return self.base.max_gap(n)

    def min_gap(self, n):
        return self.base.min_gap(n)

    def alpha_majorant(self):
        return self.base.alpha_majorant()

    def describe(self):
        return f"reflection of ({self.base.describe()})"


# -- constructors ------------------------------------------------------------

def build_radix(r: int, depth: int) -> ChainDecomposition:
    """``D_n = {k r^{-n}}``, ``alpha_n = r^{-n}``, ``rho = 1``."""
    if r < 2:
        raise DecompositionError(f"radix must be >= 2, got {r}")
    return ChainDecomposition((r,), depth, kind="radix")


def build_divisor_chain(r_seq: Sequence[int], depth: int | None = None) -> ChainDecomposition:
    """``D_n = {k / r_n}`` for ``r_seq = (1, r_1, r_2, …)``.

    Levels past the end of ``r_seq`` repeat the ratio pattern of the given
    prefix periodically.
    """
    r_seq = [int(r) for r in r_seq]
    if len(r_seq) < 2:
        raise DecompositionError("divisor chain needs at least two terms")
    if r_seq[0] != 1:
        raise DecompositionError(f"divisor chain must start at 1, got {r_seq[0]}")
    ratios = []
    for a, b in zip(r_seq, r_seq[1:]):
        if b <= a:
            raise DecompositionError(f"divisor chain not strictly increasing at ({a}, {b})")
        if b % a:
            raise DecompositionError(f"{a} does not divide {b}")
        ratios.append(b // a)
    if depth is None:
        depth = len(r_seq) - 1
    return ChainDecomposition(ratios, depth)


def build_counterexample(depth: int, include_zero_in_D0: bool = False) -> CounterexampleDecomposition:
    return CounterexampleDecomposition(depth, include_zero_in_D0)


def build_uneven(depth: int) -> SplitRuleDecomposition:
    return SplitRuleDecomposition(depth)


def _c0_level(n: int) -> int:
    return 0 if n == 0 else n // 3 + 1


def build_c0_counterexample(depth: int) -> ReindexedDecomposition:
    """Dyadic realization of ``D_{3k-2} = D_{3k-1}``, ``D_{3k} = D_{3k+1} = D_{3k-1} ∪ D̃_{3k-1}``.

    Level ``n`` is the dyadic grid of order 0, 1, 1, 2, 2, 2, 3, 3, 3, …
    """
    # 2^{-L(k)} <= 2^{-k/3} <= (4/5)^k
    return ReindexedDecomposition(build_radix(2, _c0_level(depth)), _c0_level, depth,
                                  label="triplicated dyadic levels",
                                  majorant=Majorant(Fraction(1), Fraction(4, 5)))


def shift(d: Decomposition, offset: int, depth: int | None = None) -> ReindexedDecomposition:
    """``D'_j = D_{max(0, j + offset)}``; ``offset = -1`` duplicates ``D_0``."""
    new_depth = d.depth - offset if depth is None else depth
    base_maj = d.alpha_majorant()
    maj = None
    if base_maj is not None:
        # alpha'_j = alpha_{j+offset} <= C q^{offset} q^j for j + offset >= 0
        if offset >= 0:
            maj = Majorant(base_maj.coeff * base_maj.ratio ** offset, base_maj.ratio, base_maj.start)
        else:
            maj = Majorant(base_maj.coeff / base_maj.ratio ** (-offset), base_maj.ratio, base_maj.start)
    return ReindexedDecomposition(d, lambda j: max(0, j + offset), max(new_depth, 0),
                                  label=f"shift by {offset}", majorant=maj)


def lift(d: Decomposition) -> ReindexedDecomposition:
    """Prepend a copy of ``D_0``: ``D'_0 = D'_1 = D_0``, ``D'_j = D_{j-1}``."""
    return shift(d, -1)


# -- geometry and validation -------------------------------------------------

@dataclass(frozen=True)
class LevelGeometry:
    """Connected components of the carrier minus ``D_n`` and their midpoints."""

    n: int
    components: tuple[tuple[Fraction, Fraction], ...]
    midpoints: tuple[Fraction, ...]


def geometry(d: Decomposition, n: int) -> LevelGeometry:
    pts = d.level(n)
    comps = tuple(zip(pts, pts[1:]))
    return LevelGeometry(n, comps, tuple((a + b) / 2 for a, b in comps))


@dataclass
class LevelReport:
    """Per-level flags; ``None`` means unknown (forward-looking flag at the last level)."""

    n: int
    alpha: Fraction
    max_gap: Fraction
    min_gap: Fraction
    rho_n: Fraction
    axiom3_ok: bool
    axiom4_ok: bool
    cond1: bool | None = None
    cond2a: bool | None = None
    cond2b: bool | None = None
    alpha_ratio_le_rho: bool | None = None
    alpha_ratio_le_half_rho: bool | None = None
    alpha_ratio_le_rho_over_1mrho: bool | None = None
    witnesses: dict = field(default_factory=dict)

    @property
    def main_conditions(self) -> bool | None:
        """Coarse-gap condition, or both halves of the split condition, at this level."""
        if self.cond1 is None:
            return None
        return bool(self.cond1 or (self.cond2a and self.cond2b))


@dataclass
class HypothesisReport:
    rho: Fraction
    rho_source: str
    rho_inf: Fraction
    rho_gt_half: bool
    levels: list[LevelReport]

    def holds(self, flag: str) -> bool | None:
        """True if ``flag`` holds on every level where it is known.

        Returns ``None`` when no level has a known value.
        """
        known = [getattr(lv, flag) for lv in self.levels if getattr(lv, flag) is not None]
        if not known:
            return None
        return all(known)

    def first_failure(self, flag: str) -> LevelReport | None:
        for lv in self.levels:
            if getattr(lv, flag) is False:
                return lv
        return None

    def summary_rows(self) -> list[dict]:
        rows = []
        for lv in self.levels:
            rows.append({
                "n": lv.n, "alpha": lv.alpha, "min_gap": lv.min_gap, "max_gap": lv.max_gap,
                "rho_n": lv.rho_n, "axiom3": lv.axiom3_ok, "axiom4": lv.axiom4_ok,
                "cond1": lv.cond1, "cond2a": lv.cond2a, "cond2b": lv.cond2b,
                "a_le_rho": lv.alpha_ratio_le_rho, "a_le_rho/2": lv.alpha_ratio_le_half_rho,
                "a_le_rho/(1-rho)": lv.alpha_ratio_le_rho_over_1mrho,
            })
        return rows


def validate(d: Decomposition, rho=None, max_level: int | None = None) -> HypothesisReport:
    """Exact per-level check of the axioms and of the theorem hypotheses.

    ``rho`` defaults to the declared value, else the infimum of the measured
    per-level ratios.  Raises ``DecompositionError`` on structural defects
    (non-nested levels, missing endpoints, empty levels).
    """
    top = d.depth if max_level is None else max_level
    sets = []
    for n in range(top + 1):
        pts = d.level(n)
        if len(pts) < 2 or pts[0] != d.lo or pts[-1] != d.hi:
            raise DecompositionError(f"level {n} must contain both carrier endpoints")
        sets.append(pts)
    for n in range(top):
        missing = set(sets[n]) - set(sets[n + 1])
        if missing:
            raise DecompositionError(
                f"levels not nested: {format_rational(min(missing))} in D_{n} but not in D_{n + 1}")

    rho_levels = [d.rho_level(n) for n in range(top + 1)]
    rho_inf = min(rho_levels)
    if rho is not None:
        rho, source = Fraction(rho), "argument"
    elif d.rho_declared is not None:
        rho, source = d.rho_declared, "declared"
    else:
        rho, source = rho_inf, "measured"

    reports = []
    for n in range(top + 1):
        pts = sets[n]
        gaps = [(b - a, a, b) for a, b in zip(pts, pts[1:])]
        big = max(gaps)
        small = min(gaps)
        alpha = d.alpha(n)
        lv = LevelReport(n, alpha, big[0], small[0], rho_levels[n],
                         axiom3_ok=big[0] <= alpha, axiom4_ok=small[0] >= rho * alpha)
        if not lv.axiom3_ok:
            lv.witnesses["axiom3"] = (big[1], big[2])
        if not lv.axiom4_ok:
            lv.witnesses["axiom4"] = (small[1], small[2])
        reports.append(lv)

    for n in range(top):
        lv = reports[n]
        nxt = set(sets[n + 1])
        nxt_sorted = sets[n + 1]
        mids = [(a + b) / 2 for a, b in zip(sets[n], sets[n][1:])]
        nxt_mids = {(a + b) / 2 for a, b in zip(nxt_sorted, nxt_sorted[1:])}
        bad1 = next((m for m in mids if m not in nxt), None)
        lv.cond1 = bad1 is None
        if bad1 is not None:
            lv.witnesses["cond1"] = bad1
        bad2a = None
        for a, b in zip(sets[n], sets[n][1:]):
            i = bisect.bisect_right(nxt_sorted, a)
            if not (i < len(nxt_sorted) and nxt_sorted[i] < b):
                bad2a = (a, b)
                break
        lv.cond2a = bad2a is None
        if bad2a is not None:
            lv.witnesses["cond2a"] = bad2a
        bad2b = next((m for m in mids if m not in nxt_mids), None)
        lv.cond2b = bad2b is None
        if bad2b is not None:
            lv.witnesses["cond2b"] = bad2b
        a0, a1 = reports[n].alpha, reports[n + 1].alpha
        lv.alpha_ratio_le_rho = a1 <= rho * a0
        lv.alpha_ratio_le_half_rho = a1 <= rho * a0 / 2
        lv.alpha_ratio_le_rho_over_1mrho = True if rho == 1 else a1 <= rho / (1 - rho) * a0
        for flag in ("alpha_ratio_le_rho", "alpha_ratio_le_half_rho", "alpha_ratio_le_rho_over_1mrho"):
            if getattr(lv, flag) is False:
                lv.witnesses[flag] = (a0, a1)

    return HypothesisReport(rho, source, rho_inf, rho > Fraction(1, 2), reports)


# -- text format -------------------------------------------------------------

def dumps(d: Decomposition, depth: int | None = None) -> str:
    """Explicit text form (one line per level)."""
    top = d.depth if depth is None else depth
    lines = []
    gen = d.generator_line()
    if gen:
        lines.append(f"# generated by: {gen}")
    lines.append(f"interval {format_rational(d.lo)} {format_rational(d.hi)}")
    if d.rho_declared is not None:
        lines.append(f"rho {format_rational(d.rho_declared)}")
    for n in range(top + 1):
        pts = " ".join(format_rational(p) for p in d.level(n))
        lines.append(f"level {n} alpha {format_rational(d.alpha(n))} : {pts}")
    return "\n".join(lines) + "\n"


def save(d: Decomposition, path, depth: int | None = None) -> None:
    Path(path).write_text(dumps(d, depth))


def _rat(tok: str, line: int, col: int) -> Fraction:
    try:
        return parse_rational(tok)
    except ValueError:
        raise DecompositionFormatError(f"bad rational {tok!r}", line, col) from None


def _int(tok: str, line: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise DecompositionFormatError(f"bad integer {tok!r}", line, col) from None


def _tokens(text: str):
    col = 0
    for tok in text.split():
        col = text.index(tok, col)
        yield tok, col + 1
        col += len(tok)


def loads(text: str) -> Decomposition:
    """Parse the textual decomposition format and enforce every invariant."""
    interval = None
    rho = None
    levels: dict[int, tuple[Fraction, list[Fraction]]] = {}
    generator = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        toks = list(_tokens(line))
        head = toks[0][0]
        if head == "interval":
            if len(toks) != 3:
                raise DecompositionFormatError("expected: interval lo hi", lineno)
            interval = (_rat(toks[1][0], lineno, toks[1][1]), _rat(toks[2][0], lineno, toks[2][1]))
        elif head == "rho":
            if len(toks) != 2:
                raise DecompositionFormatError("expected: rho p/q", lineno)
            rho = _rat(toks[1][0], lineno, toks[1][1])
        elif head == "level":
            if len(toks) < 5 or toks[2][0] != "alpha" or toks[4][0] != ":":
                raise DecompositionFormatError("expected: level n alpha p/q : points…", lineno)
            n = _int(toks[1][0], lineno, toks[1][1])
            if n in levels:
                raise DecompositionFormatError(f"level {n} given twice", lineno, toks[1][1])
            alpha = _rat(toks[3][0], lineno, toks[3][1])
            pts = [_rat(t, lineno, c) for t, c in toks[5:]]
            levels[n] = (alpha, pts)
        elif head in ("radix", "chain", "counterexample", "uneven"):
            if generator is not None:
                raise DecompositionFormatError("only one generator line allowed", lineno)
            generator = _parse_generator(toks, lineno)
        else:
            raise DecompositionFormatError(f"unknown directive {head!r}", lineno, toks[0][1])

    if generator is not None:
        if levels or interval is not None:
            raise DecompositionFormatError("generator line cannot be mixed with explicit levels", 1)
        return generator
    if interval is None:
        raise DecompositionFormatError("missing 'interval' header", 1)
    if not levels:
        raise DecompositionFormatError("no levels given", 1)
    if sorted(levels) != list(range(len(levels))):
        raise DecompositionFormatError("levels must be numbered 0..N without gaps", 1)
    ordered = [levels[n] for n in range(len(levels))]
    for n, (_, pts) in enumerate(ordered):
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise DecompositionError(f"level {n} points are not strictly increasing")
    d = ExplicitDecomposition(interval[0], interval[1], [p for _, p in ordered],
                              rho_declared=rho, declared_alpha=[a for a, _ in ordered])
    report = validate(d)
    for lv in report.levels:
        if not lv.axiom3_ok:
            a, b = lv.witnesses["axiom3"]
            raise DecompositionError(
                f"level {lv.n}: gap ({format_rational(a)}, {format_rational(b)}) exceeds declared alpha "
                f"{format_rational(lv.alpha)}")
        if rho is not None and not lv.axiom4_ok:
            a, b = lv.witnesses["axiom4"]
            raise DecompositionError(
                f"level {lv.n}: gap ({format_rational(a)}, {format_rational(b)}) is below "
                f"rho*alpha = {format_rational(rho * lv.alpha)}")
    return d


def _parse_generator(toks, lineno) -> Decomposition:
    head = toks[0][0]
    words = [t for t, _ in toks]
    try:
        di = words.index("depth")
        depth = _int(words[di + 1], lineno, toks[di + 1][1])
    except (ValueError, IndexError):
        raise DecompositionFormatError("generator line needs 'depth d'", lineno) from None
    if head == "radix":
        return build_radix(_int(words[1], lineno, toks[1][1]), depth)
    if head == "chain":
        rs = [_int(t, lineno, toks[1][1]) for t in words[1].split(",")]
        return build_divisor_chain(rs, depth)
    if head == "uneven":
        return build_uneven(depth)
    return build_counterexample(depth, "with-zero" in words)


def load(path) -> Decomposition:
    return loads(Path(path).read_text())
