"""
Command line front end.

Exit codes: 0 success, 1 verification failed, 2 bad arguments or input,
3 register too large to simulate.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import budget as bud
from . import multibus as mb
from .lattice import LatticeSpec
from .planner import STRATEGIES, dumps_schedule, loads_schedule, plan, simulate_schedule, validate_schedule
from .qubus import BETA_SQ_CPHASE, PreconditionError, verify_cluster_state

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
MAX_SIM_QUBITS = 20
SIG_DIGITS = 12


class UsageError(Exception):
    pass


def _round(obj):
    if isinstance(obj, float):
        if math.isinf(obj):
            return "no-limit"
        return float(f"{obj:.{SIG_DIGITS}g}")
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def to_json(obj) -> str:
    return json.dumps(_round(obj), indent=1) + "\n"


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def cmd_plan(args) -> int:
    if args.rows < 2 or args.cols < 2:
        raise UsageError(f"lattice {args.rows}x{args.cols} has too few qubits to entangle; need at least 2x2")
    if args.strategy == "bricks" and args.b is None:
        raise UsageError("--strategy bricks needs --b")
    if args.b is not None and args.b < 1:
        raise UsageError("--b must be >= 1")
    sched = plan(LatticeSpec(args.rows, args.cols), args.strategy, args.b)
    summary = {"N": sched.op_count, "buses": sched.bus_count, "turns": sched.turns}
    if args.out is None:
        sys.stdout.write(dumps_schedule(sched))
        sys.stderr.write(to_json(summary))
    else:
        Path(args.out).write_text(dumps_schedule(sched))
        sys.stdout.write(to_json(summary))
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        text = Path(args.file).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    try:
        sched = loads_schedule(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    lat = sched.lattice
    if lat.n_qubits > MAX_SIM_QUBITS:
        sys.stderr.write(f"error: {lat.n_qubits} qubits exceeds the {MAX_SIM_QUBITS}-qubit simulation limit\n")
        return EXIT_RESOURCE
    state, clean = simulate_schedule(sched)
    report = {"disentangled": clean, "stabilizers_pass": None, "min_stabilizer": None}
    ok = clean
    if args.check_stabilizers:
        report["stabilizers_pass"] = False
        if clean:
            frame = validate_schedule(sched, lat, require_complete=False).correction_frame(lat.n_qubits)
            try:
                rep = verify_cluster_state(state, lat, frame, tol=args.tol)
            except PreconditionError:
                rep = None
            if rep is not None:
                report["stabilizers_pass"] = rep.passed
                report["min_stabilizer"] = rep.min_value
        ok = ok and bool(report["stabilizers_pass"])
    sys.stdout.write(to_json(report))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_budget(args) -> int:
    try:
        params = bud.NoiseParams(args.gamma_tau, args.eta, args.beta2, args.epsilon)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = bud.budget_report(params)
    adv = bud.reuse_advantage(params)
    report["lego_better"] = adv.lego_better
    report["in_margin_band"] = adv.in_margin_band
    sys.stdout.write(to_json(report))
    return EXIT_OK


def cmd_parallel(args) -> int:
    brick = args.brick
    horizon = args.horizon if args.horizon is not None else (brick + 1 if brick else 6)
    try:
        strip = mb.StripSpec(args.width, horizon, args.buses, args.pitch, brick)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sched = mb.schedule_parallel(strip)
    if args.format == "csv":
        _emit(mb.occupancy_csv(sched), args.out)
        return EXIT_OK
    doc = mb.parallel_to_dict(sched)
    slots, seconds = mb.makespan(sched, args.tau)
    doc["makespan_seconds"] = seconds
    doc["gates_per_bus"] = sched.gate_counts
    doc["gates_per_brick"] = sched.brick_gates
    doc["ops_per_bus"] = sched.op_counts
    doc["idle_slots"] = sched.idle_slots
    doc["conflicts"] = [c.detail for c in mb.check_conflicts(sched)]
    _emit(to_json(doc), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="buscluster", description="Plan, simulate and budget qubus cluster construction.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="write a bus-operation schedule")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--strategy", choices=STRATEGIES, default="zigzag2")
    p.add_argument("--b", type=int, default=None, help="brick length for --strategy bricks")
    p.add_argument("--out", default=None, help="schedule path (default: stdout)")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("simulate", help="simulate a schedule file")
    p.add_argument("file")
    p.add_argument("--check-stabilizers", action="store_true")
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("budget", help="brick sizes under a dephasing budget")
    p.add_argument("--gamma-tau", type=float, required=True)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--beta2", type=float, default=BETA_SQ_CPHASE)
    p.add_argument("--epsilon", type=float, default=0.01)
    p.set_defaults(func=cmd_budget)

    p = sub.add_parser("parallel", help="staggered multi-bus strip schedule")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--buses", type=int, default=None)
    p.add_argument("--pitch", default="one-per-two-rows", help=f"one of {', '.join(mb.PITCHES)}")
    p.add_argument("--tau", type=float, default=1.0, help="slot duration")
    p.add_argument("--horizon", type=int, default=None, help="columns to generate (default: one brick plus one)")
    p.add_argument("--brick", type=int, default=5)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_parallel)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
