"""Enclosure grid and SVG for the Takagi function and a few weight variants.

    python3 scripts/takagi_plot.py --out-dir plots
"""

import argparse
from dataclasses import dataclass
from pathlib import Path

from gtakagi.cli import plot
from gtakagi.decomposition import build_counterexample, build_radix
from gtakagi.evaluation import GeneralizedTakagi, WeightSequence


@dataclass
class Config:
    out_dir: str = "plots"
    resolution: int = 1025
    depth: int = 12


def main(cfg: Config) -> None:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    one, alt = WeightSequence.const(1), WeightSequence.alternating(1)
    runs = {
        "takagi": (GeneralizedTakagi(build_radix(2, 64), one), "1/3"),
        "radix3_alt": (GeneralizedTakagi(build_radix(3, 64), alt), "1/2"),
        "radix2_geom": (GeneralizedTakagi(build_radix(2, 64), WeightSequence.geometric(1, "1/2")), None),
        "counterexample": (GeneralizedTakagi(build_counterexample(40), alt), None),
    }
    for name, (T, base) in runs.items():
        for f in plot(T, cfg.resolution, cfg.depth, out / name, base):
            print(f)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default=Config.out_dir)
    ap.add_argument("--resolution", type=int, default=Config.resolution)
    ap.add_argument("--depth", type=int, default=Config.depth)
    main(Config(**vars(ap.parse_args())))
