"""Weight sequences, the functions ``T_w = sum_n w_n g_n``, and certified enclosures."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .decomposition import (
    CounterexampleDecomposition,
    Decomposition,
    Majorant,
    shift,
)
from .numerics import RatInterval, format_rational, parse_rational

__all__ = [
    "WeightSequence",
    "GeneralizedTakagi",
    "UncertifiedTail",
    "InsufficientDepth",
    "phi",
    "g",
    "partial_sum",
    "tail_bound",
    "evaluate",
    "pair_sum_H",
    "radix_phi_partial_sum",
    "reduced_instance",
    "parse_weights",
    "INF",
]

INF = math.inf


class UncertifiedTail(ValueError):
    """No geometric majorant certifies the tail ``sum |w_k| alpha_k``."""


class InsufficientDepth(ValueError):
    def __init__(self, message: str, achievable=None):
        super().__init__(message)
        self.achievable = achievable


def phi(x) -> Fraction:
    """Distance from ``x`` to the nearest integer."""
    x = Fraction(x)
    frac = x - math.floor(x)
    return min(frac, 1 - frac)


# -- weights -----------------------------------------------------------------

@dataclass(frozen=True)
class WeightSequence:
    """A closed-form weight rule ``n -> w_n``.

    ``kind`` is one of ``const``, ``alt``, ``geom``, ``triple``, ``prefix``,
    ``shifted``, ``scaled``, ``custom``.  Membership in ``c_0`` and ``l^1`` is
    decided from the rule, never from samples.
    """

    kind: str
    params: tuple = ()
    base: "WeightSequence | None" = None
    fn: Callable[[int], Fraction] | None = field(default=None, compare=False)
    flags: tuple = ()

    # constructors
    @classmethod
    def const(cls, c) -> "WeightSequence":
        return cls("const", (Fraction(c),))

    @classmethod
    def alternating(cls, a) -> "WeightSequence":
        return cls("alt", (Fraction(a),))

    @classmethod
    def geometric(cls, c, q) -> "WeightSequence":
        return cls("geom", (Fraction(c), Fraction(q)))

    @classmethod
    def triple_pattern(cls) -> "WeightSequence":
        return cls("triple")

    @classmethod
    def prefix_then(cls, values: Sequence, rule: "WeightSequence") -> "WeightSequence":
        return cls("prefix", tuple(Fraction(v) for v in values), rule)

    @classmethod
    def custom(cls, fn, *, in_c0: bool, in_l1: bool, nonnegative: bool = False,
               majorant: Majorant | None = None, label: str = "custom") -> "WeightSequence":
        return cls("custom", (label, majorant), fn=fn, flags=(in_c0, in_l1, nonnegative))

    def shifted(self, offset: int) -> "WeightSequence":
        """``n -> w_{n + offset}`` (zero where the index would be negative)."""
        return WeightSequence("shifted", (offset,), self)

    def scaled(self, c) -> "WeightSequence":
        return WeightSequence("scaled", (Fraction(c),), self)

    def __neg__(self) -> "WeightSequence":
        return self.scaled(-1)

    # values
    def __call__(self, n: int) -> Fraction:
        if n < 0:
            raise IndexError("weight index must be >= 0")
        k = self.kind
        if k == "const":
            return self.params[0]
        if k == "alt":
            return self.params[0] if n % 2 == 0 else -self.params[0]
        if k == "geom":
            c, q = self.params
            return c * q ** n
        if k == "triple":
            if n == 0:
                return Fraction(0)
            if n % 3 == 1:
                return Fraction(1)
            if n % 3 == 2:
                return Fraction(-1)
            return Fraction(-1, 2) if n == 3 else Fraction(1, 2 ** (n // 3))
        if k == "prefix":
            return self.params[n] if n < len(self.params) else self.base(n)
        if k == "shifted":
            m = n + self.params[0]
            return Fraction(0) if m < 0 else self.base(m)
        if k == "scaled":
            return self.params[0] * self.base(n)
        return Fraction(self.fn(n))

    def values(self, count: int) -> list[Fraction]:
        return [self(n) for n in range(count)]

    # membership flags
    @property
    def in_c0(self) -> bool:
        k = self.kind
        if k == "const" or k == "alt":
            return self.params[0] == 0
        if k == "geom":
            c, q = self.params
            return c == 0 or abs(q) < 1
        if k == "triple":
            return False
        if k in ("prefix", "shifted"):
            return self.base.in_c0
        if k == "scaled":
            return self.params[0] == 0 or self.base.in_c0
        return self.flags[0]

    @property
    def in_l1(self) -> bool:
        k = self.kind
        if k in ("const", "alt"):
            return self.params[0] == 0
        if k == "geom":
            c, q = self.params
            return c == 0 or abs(q) < 1
        if k == "triple":
            return False
        if k in ("prefix", "shifted"):
            return self.base.in_l1
        if k == "scaled":
            return self.params[0] == 0 or self.base.in_l1
        return self.flags[1]

    @property
    def nonnegative(self) -> bool:
        k = self.kind
        if k == "const":
            return self.params[0] >= 0
        if k == "alt":
            return self.params[0] == 0
        if k == "geom":
            c, q = self.params
            return c == 0 or (c > 0 and q >= 0)
        if k == "triple":
            return False
        if k == "prefix":
            return all(v >= 0 for v in self.params) and self.base.nonnegative
        if k == "shifted":
            return self.base.nonnegative
        if k == "scaled":
            c = self.params[0]
            return c == 0 or (c > 0 and self.base.nonnegative)
        return self.flags[2]

    @property
    def is_zero(self) -> bool:
        k = self.kind
        if k in ("const", "alt"):
            return self.params[0] == 0
        if k == "geom":
            return self.params[0] == 0
        if k == "prefix":
            return all(v == 0 for v in self.params) and self.base.is_zero
        if k == "shifted":
            return self.base.is_zero
        if k == "scaled":
            return self.params[0] == 0 or self.base.is_zero
        return False

    def majorant(self) -> Majorant | None:
        """``|w_k| <= C q^k`` for ``k >= start``, or ``None``."""
        k = self.kind
        if k in ("const", "alt"):
            return Majorant(abs(self.params[0]), Fraction(1))
        if k == "geom":
            c, q = self.params
            return Majorant(abs(c), abs(q) if q != 0 else Fraction(1, 2))
        if k == "triple":
            return Majorant(Fraction(1), Fraction(1))
        if k == "prefix":
            m = self.base.majorant()
            if m is None:
                return None
            return Majorant(m.coeff, m.ratio, max(m.start, len(self.params)))
        if k == "shifted":
            m = self.base.majorant()
            if m is None:
                return None
            s = self.params[0]
            return Majorant(m.coeff * m.ratio ** s, m.ratio, max(0, m.start - s))
        if k == "scaled":
            m = self.base.majorant()
            if m is None:
                return None
            return Majorant(abs(self.params[0]) * m.coeff, m.ratio, m.start)
        return self.params[1]

    def running_sum(self, n: int) -> Fraction:
        """``sum_{k=0}^{n} w_k`` (zero for ``n < 0``)."""
        return sum((self(k) for k in range(n + 1)), Fraction(0))

    def running_sum_limits(self):
        """Exact ``(liminf, limsup)`` of ``sum_{k=0}^n w_k`` when the rule admits one.

        Values are Fractions or ``±math.inf``; ``None`` when no closed form is known.
        """
        k = self.kind
        if k == "const":
            c = self.params[0]
            if c == 0:
                return Fraction(0), Fraction(0)
            return (INF, INF) if c > 0 else (-INF, -INF)
        if k == "alt":
            a = self.params[0]
            return min(a, Fraction(0)), max(a, Fraction(0))
        if k == "geom":
            c, q = self.params
            if c == 0:
                return Fraction(0), Fraction(0)
            if abs(q) < 1:
                s = c / (1 - q)
                return s, s
            if q == 1:
                return (INF, INF) if c > 0 else (-INF, -INF)
            if q == -1:
                return min(c, Fraction(0)), max(c, Fraction(0))
            if q > 1:
                return (INF, INF) if c > 0 else (-INF, -INF)
            return -INF, INF
        if k == "triple":
            # S_{3j} = S_{3j+2} = -2^{-j} -> 0 from below, S_{3j+1} = 1 - 2^{-j} -> 1
            return Fraction(0), Fraction(1)
        if k == "prefix":
            lims = self.base.running_sum_limits()
            if lims is None:
                return None
            off = sum(self.params, Fraction(0)) - self.base.running_sum(len(self.params) - 1)
            return lims[0] + off, lims[1] + off
        if k == "shifted":
            lims = self.base.running_sum_limits()
            if lims is None:
                return None
            s = self.params[0]
            off = -self.base.running_sum(s - 1)
            return lims[0] + off, lims[1] + off
        if k == "scaled":
            lims = self.base.running_sum_limits()
            if lims is None:
                return None
            c = self.params[0]
            if c == 0:
                return Fraction(0), Fraction(0)
            a, b = lims[0] * c, lims[1] * c
            return (a, b) if c > 0 else (b, a)
        return None

    def describe(self) -> str:
        k = self.kind
        if k == "const":
            return f"const {format_rational(self.params[0])}"
        if k == "alt":
            return f"alt {format_rational(self.params[0])}"
        if k == "geom":
            return f"geom {format_rational(self.params[0])} {format_rational(self.params[1])}"
        if k == "triple":
            return "triple"
        if k == "prefix":
            vals = ",".join(format_rational(v) for v in self.params)
            return f"prefix [{vals}] then {self.base.describe()}"
        if k == "shifted":
            return f"({self.base.describe()}) shifted by {self.params[0]}"
        if k == "scaled":
            return f"{format_rational(self.params[0])} * ({self.base.describe()})"
        return str(self.params[0])


_PREFIX_RE = re.compile(r"^prefix\s*\[(?P<vals>[^\]]*)\]\s*then\s+(?P<rest>.+)$")


def parse_weights(text: str) -> WeightSequence:
    """Parse ``const c``, ``alt a``, ``geom c q``, ``triple``, ``prefix [w0,w1,…] then <rule>``."""
    s = text.strip()
    m = _PREFIX_RE.match(s)
    if m:
        vals = [parse_rational(v) for v in m.group("vals").split(",") if v.strip()]
        return WeightSequence.prefix_then(vals, parse_weights(m.group("rest")))
    parts = s.split()
    if not parts:
        raise ValueError("empty weight rule")
    head, args = parts[0], parts[1:]
    arity = {"const": 1, "alt": 1, "geom": 2, "triple": 0}
    if head not in arity:
        raise ValueError(f"unknown weight rule {head!r}")
    if len(args) != arity[head]:
        raise ValueError(f"weight rule {head!r} takes {arity[head]} argument(s)")
    nums = [parse_rational(a) for a in args]
    if head == "const":
        return WeightSequence.const(nums[0])
    if head == "alt":
        return WeightSequence.alternating(nums[0])
    if head == "geom":
        return WeightSequence.geometric(*nums)
    return WeightSequence.triple_pattern()


# -- the function T_w --------------------------------------------------------

EXTENDABLE_LEVEL_CAP = 4096


class GeneralizedTakagi:
    """``T_w(x) = sum_n w_n dist(x, D_n)``.

    Construction fails with :class:`UncertifiedTail` unless the product of the
    weight and mesh majorants is summable, or the weights vanish eventually.
    """

    def __init__(self, decomposition: Decomposition, weights: WeightSequence,
                 exact_search: int = 64):
        self.decomposition = decomposition
        self.weights = weights
        self.exact_search = exact_search
        self._majorant = self._combined_majorant()
        if self._majorant is None:
            raise UncertifiedTail(
                f"cannot certify sum |w_k| alpha_k < inf for weights '{weights.describe()}' on "
                f"{decomposition.describe()}")

    def _combined_majorant(self) -> Majorant | None:
        if self.weights.is_zero:
            return Majorant(Fraction(0), Fraction(1, 2))
        wm = self.weights.majorant()
        am = self.decomposition.alpha_majorant()
        if wm is None or am is None:
            return None
        prod = wm * am
        return prod if prod.ratio < 1 else None

    @property
    def max_level(self) -> int:
        d = self.decomposition
        return EXTENDABLE_LEVEL_CAP if d.extendable else d.depth

    @property
    def is_pair_instance(self) -> bool:
        """The ``[-1,1]`` counterexample with alternating weights."""
        return (isinstance(self.decomposition, CounterexampleDecomposition)
                and self.weights.kind == "alt")

    def negated(self) -> "GeneralizedTakagi":
        return GeneralizedTakagi(self.decomposition, -self.weights, self.exact_search)

    def describe(self) -> str:
        return f"T_w with w = {self.weights.describe()} on {self.decomposition.describe()}"

    # evaluation pieces
    def g(self, n: int, x) -> Fraction:
        if n > self.max_level:
            raise IndexError(f"level {n} beyond available depth {self.max_level}")
        return self.decomposition.distance(n, x)

    def partial_sum(self, N: int, x) -> Fraction:
        """``sum_{k=0}^{N} w_k g_k(x)``, exact."""
        x = Fraction(x)
        total = Fraction(0)
        for k in range(N + 1):
            wk = self.weights(k)
            if wk:
                total += wk * self.g(k, x)
        return total

    def tail_bound(self, N: int) -> Fraction:
        """Certified bound ``>= sum_{k>N} |w_k| alpha_k`` (pairwise bound on the counterexample)."""
        if self.is_pair_instance:
            a = abs(self.weights.params[0])
            if N % 2 == 1 or N == -1:
                return a * Fraction(1, 3 ** ((N + 1) // 2)) / 2
            return a * self.decomposition.alpha(N + 1) + a * Fraction(1, 3 ** (N // 2 + 1)) / 2
        maj = self._majorant
        first = max(N + 1, maj.start)
        exact = sum((abs(self.weights(k)) * self.decomposition.alpha(k) for k in range(N + 1, first)),
                    Fraction(0))
        return exact + maj.tail(first)

    def exact_level(self, x) -> int | None:
        """Least ``M`` with ``x in D_M``, searched up to the stored depth (at most ``exact_search``)."""
        top = min(self.exact_search, self.decomposition.depth)
        return self.decomposition.first_level_containing(x, top)

    def exact_value(self, x) -> Fraction | None:
        """``T_w(x)`` exactly when ``x`` lies in some searched level, else ``None``."""
        x = Fraction(x)
        m = self.exact_level(x)
        if m is None:
            return None
        return self.partial_sum(m - 1, x) if m > 0 else Fraction(0)

    def evaluate(self, x, eps) -> RatInterval:
        """``partial_sum(N, x) ± tail_bound(N)`` for the least admissible ``N`` with tail <= eps."""
        eps = Fraction(eps)
        if eps <= 0:
            raise ValueError("eps must be > 0")
        N = self.level_for(eps)
        s = self.partial_sum(N, x)
        return RatInterval.around(s, self.tail_bound(N))

    def level_for(self, eps) -> int:
        step = 2 if self.is_pair_instance else 1
        N = 1 if self.is_pair_instance else 0
        best = None
        while N <= self.max_level:
            t = self.tail_bound(N)
            best = t
            if t <= eps:
                return N
            N += step
        raise InsufficientDepth(
            f"stored depth {self.max_level} only certifies eps >= {best}", achievable=best)

    def value(self, x, eps) -> RatInterval:
        """Degenerate interval when ``T_w(x)`` is exactly computable, else an enclosure."""
        v = self.exact_value(x)
        if v is not None:
            return RatInterval.point(v)
        return self.evaluate(x, eps)


# functional aliases mirroring the module operations

def g(d: Decomposition, n: int, x) -> Fraction:
    return d.distance(n, x)


def partial_sum(T: GeneralizedTakagi, N: int, x) -> Fraction:
    return T.partial_sum(N, x)


def tail_bound(T: GeneralizedTakagi, N: int) -> Fraction:
    return T.tail_bound(N)


def evaluate(T: GeneralizedTakagi, x, eps) -> RatInterval:
    return T.evaluate(x, eps)


def pair_sum_H(T: GeneralizedTakagi, n: int, x) -> Fraction:
    """``H_n(x) = w_{2n} g_{2n}(x) + w_{2n+1} g_{2n+1}(x)`` on the counterexample."""
    if not T.is_pair_instance:
        raise ValueError("pair sums are defined for the [-1,1] counterexample with alternating weights")
    x = Fraction(x)
    return T.weights(2 * n) * T.g(2 * n, x) + T.weights(2 * n + 1) * T.g(2 * n + 1, x)


def radix_phi_partial_sum(r: int, weights: WeightSequence, N: int, x) -> Fraction:
    """``sum_{n=0}^{N} w_n phi(r^n x) / r^n`` straight from the closed form."""
    x = Fraction(x)
    return sum((weights(n) * phi(r ** n * x) / r ** n for n in range(N + 1)), Fraction(0))


def reduced_instance(T: GeneralizedTakagi, offset: int) -> GeneralizedTakagi:
    """Same function, re-indexed so that ``w'_0 = 0`` and ``D'_j = D_{max(0, j + offset)}``."""
    d = shift(T.decomposition, offset)
    w = WeightSequence.prefix_then([0], T.weights.shifted(offset))
    return GeneralizedTakagi(d, w, T.exact_search)
