"""Largest brick sizes over a log grid of dephasing and bus-loss rates."""
from __future__ import annotations

import argparse
import csv
import math
import sys

import numpy as np

from buscluster.budget import NoiseParams, max_brick_size, max_brick_size_no_reuse, reuse_advantage


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=13)
    ap.add_argument("--epsilon", type=float, default=0.01)
    ap.add_argument("--beta2", type=float, default=math.pi / 8)
    args = ap.parse_args(argv)
    grid = np.logspace(-6, -2, args.points)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["gamma_tau", "eta_beta2", "b_lego", "b_no_reuse", "lego_better", "rule_of_thumb", "in_band"])
    for gt in grid:
        for loss in grid:
            p = NoiseParams(float(gt), float(loss) / args.beta2, args.beta2, args.epsilon)
            adv = reuse_advantage(p)
            w.writerow([
                f"{gt:.12e}", f"{loss:.12e}", max_brick_size(p), max_brick_size_no_reuse(p),
                int(adv.lego_better), int(adv.rule_of_thumb), int(adv.in_margin_band),
            ])


if __name__ == "__main__":
    main()
