"""Exact-arithmetic lab for generalized Takagi functions over nested decompositions."""

from .numerics import RatInterval, as_rational, format_rational, parse_rational, rat
from .decomposition import (
    Decomposition,
    build_c0_counterexample,
    build_counterexample,
    build_divisor_chain,
    build_radix,
    build_uneven,
    load,
    loads,
    save,
    dumps,
    validate,
)
from .evaluation import GeneralizedTakagi, InsufficientDepth, UncertifiedTail, WeightSequence, parse_weights
from .sequences import delta_trace, gamma_trace, generic_chord_trace, midpoint_chord_trace, reduce_to_D1
from .derivatives import dini, subdifferential_estimate, superdifferential_estimate, takagi_superdiff_formula
from .harness import CheckResult, run_suite

__version__ = "0.1.0"

__all__ = [
    "RatInterval", "as_rational", "format_rational", "parse_rational", "rat",
    "Decomposition", "build_c0_counterexample", "build_counterexample", "build_divisor_chain",
    "build_radix", "build_uneven", "load", "loads", "save", "dumps", "validate",
    "GeneralizedTakagi", "InsufficientDepth", "UncertifiedTail", "WeightSequence", "parse_weights",
    "delta_trace", "gamma_trace", "generic_chord_trace", "midpoint_chord_trace", "reduce_to_D1",
    "dini", "subdifferential_estimate", "superdifferential_estimate", "takagi_superdiff_formula",
    "CheckResult", "run_suite",
]
