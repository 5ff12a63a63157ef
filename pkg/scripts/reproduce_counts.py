"""Closed-form operation counts next to the counts of generated schedules."""
from __future__ import annotations

import argparse
import csv
import sys

from buscluster.counts import ops_bricks, ops_no_reuse, ops_width1_min, ops_width2_min
from buscluster.lattice import LatticeSpec
from buscluster.planner import plan


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max", type=int, default=8, help="largest side length")
    ap.add_argument("--b", type=int, default=3, help="brick length")
    args = ap.parse_args(argv)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["m", "n", "no_reuse", "line", "line_formula", "zigzag2", "zigzag2_formula", "turns", "bricks", "bricks_formula"])
    for m in range(2, args.max + 1):
        for n in range(m, args.max + 1):
            lat = LatticeSpec(m, n)
            zz = plan(lat, "zigzag2")
            w.writerow([
                m, n,
                plan(lat, "no-reuse").op_count,
                plan(lat, "line").op_count, ops_width1_min(m, n),
                zz.op_count, ops_width2_min(m, n), zz.turns,
                plan(lat, "bricks", args.b).op_count, float(ops_bricks(m, n, args.b)),
            ])
            assert plan(lat, "no-reuse").op_count == ops_no_reuse(m, n)


if __name__ == "__main__":
    main()
