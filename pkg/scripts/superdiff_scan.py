"""Compare the binary-expansion superdifferential formula with Dini enclosures.

For each eventually periodic expansion, prints the formula interval and the
superdifferential estimate of the Takagi function at the same rational.

    python3 scripts/superdiff_scan.py --horizon 18
"""

import argparse
from dataclasses import dataclass, field

from gtakagi.decomposition import build_radix
from gtakagi.derivatives import (
    FormulaInapplicable,
    parse_binary,
    superdifferential_estimate,
    takagi_superdiff_formula,
)
from gtakagi.evaluation import GeneralizedTakagi, WeightSequence
from gtakagi.numerics import format_rational


@dataclass
class Config:
    horizon: int = 18
    expansions: list = field(default_factory=lambda: ["(01)", "(10)", "11010(10)", "0(10)", "1(01)", "011(01)"])


def main(cfg: Config) -> None:
    T = GeneralizedTakagi(build_radix(2, 64), WeightSequence.const(1))
    print("expansion,x,formula,estimate")
    for text in cfg.expansions:
        e = parse_binary(text)
        try:
            formula = str(takagi_superdiff_formula(e))
        except FormulaInapplicable as exc:
            formula = f"n/a ({exc})"
        est = superdifferential_estimate(T, e.value, cfg.horizon)
        if est.interval is None:
            shown = est.describe()
        else:
            shown = f"[{float(est.interval.lo):.6f}, {float(est.interval.hi):.6f}] ({est.verdict})"
        print(f"{text},{format_rational(e.value)},{formula},{shown}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--horizon", type=int, default=Config.horizon)
    ap.add_argument("--expansion", action="append", dest="expansions")
    args = ap.parse_args()
    cfg = Config(args.horizon) if args.expansions is None else Config(args.horizon, args.expansions)
    main(cfg)
