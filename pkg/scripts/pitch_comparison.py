"""Makespan and throughput of one bus per two rows against one bus per row."""
from __future__ import annotations

import argparse
import csv
import sys

from buscluster.multibus import StripSpec, makespan, schedule_parallel, slot_throughput


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--widths", type=int, nargs="+", default=[2, 4, 6, 8])
    ap.add_argument("--max-horizon", type=int, default=20)
    ap.add_argument("--brick", type=int, default=5)
    args = ap.parse_args(argv)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["width", "horizon", "slots_two_rows", "slots_one_row", "qubits_per_slot_two_rows", "qubits_per_slot_one_row"])
    for width in args.widths:
        for L in range(1, args.max_horizon + 1):
            two = schedule_parallel(StripSpec(width, L, brick=args.brick))
            one = schedule_parallel(StripSpec(width, L, pitch="one-per-row", brick=args.brick))
            w.writerow([
                width, L, makespan(two)[0], makespan(one)[0],
                f"{slot_throughput(two):.12e}", f"{slot_throughput(one):.12e}",
            ])


if __name__ == "__main__":
    main()
