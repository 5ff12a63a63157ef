"""Exhaustive single-pass edge counts against the width-1 and width-2 bounds."""
from __future__ import annotations

import argparse
import csv
import sys
import time

from buscluster.counts import edge_bound_width1
from buscluster.lattice import LatticeSpec
from buscluster.search import MAX_QUBITS, brute_force_max_edges


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-qubits", type=int, default=MAX_QUBITS)
    ap.add_argument("--model", choices=("strict", "physical"), default="strict")
    args = ap.parse_args(argv)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["m", "n", "width", "edges", "max_edges", "bound", "states", "seconds"])
    for m in range(2, args.max_qubits // 2 + 1):
        for n in range(2, args.max_qubits // m + 1):
            lat = LatticeSpec(m, n)
            for width in (1, 2):
                t0 = time.perf_counter()
                res = brute_force_max_edges(lat, width, model=args.model)
                bound = edge_bound_width1(m, n) if width == 1 else 3 * m * n / 2 - 2
                w.writerow([m, n, width, lat.n_edges, res.max_edges, bound, res.states, f"{time.perf_counter() - t0:.3f}"])
                sys.stdout.flush()


if __name__ == "__main__":
    main()
