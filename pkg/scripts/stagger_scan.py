"""Qubit clashes when bus programs are laid out at a fixed stagger with no waits."""
from __future__ import annotations

import argparse
import csv
import sys

from buscluster.multibus import StripSpec, check_conflicts, makespan, schedule_parallel, stagger_lanes


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--widths", type=int, nargs="+", default=[4, 6, 8])
    ap.add_argument("--horizon", type=int, default=11)
    ap.add_argument("--brick", type=int, default=5)
    ap.add_argument("--max-stagger", type=int, default=12)
    args = ap.parse_args(argv)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["width", "stagger", "clashes", "first_slot", "waited_slots", "makespan"])
    for width in args.widths:
        base = StripSpec(width, args.horizon, brick=args.brick)
        for g in range(args.max_stagger + 1):
            raw = stagger_lanes(schedule_parallel(base, stagger=g), g)
            clashes = [c for c in check_conflicts(raw) if c.kind == "collision"]
            safe = schedule_parallel(base, stagger=g)
            w.writerow([
                width, g, len(clashes), clashes[0].slot if clashes else "",
                sum(safe.idle_slots), makespan(safe)[0],
            ])


if __name__ == "__main__":
    main()
