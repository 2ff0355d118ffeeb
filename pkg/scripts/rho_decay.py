"""Per-level uniformity ratio rho_n = min gap / alpha_n for the built-in decompositions.

The [-1,1] counterexample is the only family where rho_n decays to 0.

    python3 scripts/rho_decay.py --depth 10
"""

import argparse
from dataclasses import dataclass

from gtakagi.decomposition import build_counterexample, build_divisor_chain, build_radix, build_uneven
from gtakagi.numerics import format_rational


@dataclass
class Config:
    depth: int = 10


def main(cfg: Config) -> None:
    families = {
        "radix 2": build_radix(2, cfg.depth),
        "radix 3": build_radix(3, cfg.depth),
        "chain 1,2,6,12,24": build_divisor_chain([1, 2, 6, 12, 24], cfg.depth),
        "uneven": build_uneven(min(cfg.depth, 12)),
        "counterexample": build_counterexample(cfg.depth),
        "counterexample (0 in D_0)": build_counterexample(cfg.depth, True),
    }
    print("family," + ",".join(f"rho_{n}" for n in range(cfg.depth + 1)))
    for name, d in families.items():
        vals = [format_rational(d.rho_level(n)) for n in range(min(cfg.depth, d.depth) + 1)]
        print(f"{name}," + ",".join(vals))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=Config.depth)
    main(Config(**vars(ap.parse_args())))
