"""
Parallel buses for dynamic strip generation.

A strip of ``width`` rows grows along its columns.  Each bus owns a lane of
two rows (or one row) and sweeps it in bricks; a bus also re-attaches the
boundary row of the lane above it to stitch the two lanes together, so the
qubits in that row belong to the lower-indexed bus and are borrowed by the
next one.  Bus ``i`` starts ``i * stagger`` slots after bus 0 and then
performs one operation per slot.

A qubit is occupied by a bus from the slot it is attached until the slot it
is detached (inclusive).  Two buses holding the same qubit at once is a
collision.  Buses are timed in index order; when a bus is about to borrow a
qubit that an earlier bus holds during the borrow window, it idles until the
window is clear, so schedules are collision-free by construction.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .lattice import Edge, LatticeSpec
from .planner import NEW_BUS, NEWBUS, BusOp, ScheduleBuilder, walk_crossings
from .qubus import BETA_DEFAULT, BusReset, HybridState, apply_sequence, init_register

STAGGER = 6
PITCHES = ("one-per-two-rows", "one-per-row")


@dataclass(frozen=True)
class StripSpec:
    width: int
    horizon: int
    buses: int | None = None
    pitch: str = "one-per-two-rows"
    brick: int | None = None

    def __post_init__(self):
        if self.pitch not in PITCHES:
            raise ValueError(f"unknown pitch {self.pitch!r}; choose from {', '.join(PITCHES)}")
        if self.width < 2:
            raise ValueError(f"strip width must be >= 2, got {self.width}")
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.pitch == "one-per-two-rows" and self.width % 2:
            raise ValueError(f"one-per-two-rows pitch needs an even width, got {self.width}")
        if self.buses is not None and self.buses != self.lanes:
            raise ValueError(
                f"{self.pitch} pitch on a width-{self.width} strip uses {self.lanes} buses, got {self.buses}"
            )
        if self.brick is not None and self.brick < 1:
            raise ValueError(f"brick length must be >= 1, got {self.brick}")

    @property
    def rows_per_bus(self) -> int:
        return 2 if self.pitch == "one-per-two-rows" else 1

    @property
    def lanes(self) -> int:
        return self.width // self.rows_per_bus

    @property
    def lattice(self) -> LatticeSpec:
        return LatticeSpec(self.width, self.horizon)

    def brick_columns(self) -> list[range]:
        """Column blocks per brick; a leftover partial brick comes first so the
        growth front always ends on a whole brick."""
        b = self.brick or self.horizon
        lead = self.horizon % b
        starts = ([0] if lead else []) + list(range(lead, self.horizon, b))
        ends = starts[1:] + [self.horizon]
        return [range(s, e) for s, e in zip(starts, ends)]


@dataclass
class TimedOp:
    slot: int
    bus: int
    op: BusOp


@dataclass
class ParallelSchedule:
    strip: StripSpec
    stagger: int
    # per bus: (slot, op); bus swaps carry the slot of the following op
    lanes: list[list[tuple[int, BusOp]]]
    # per bus, gates of each brick in order
    brick_gates: list[list[int]] = field(default_factory=list)
    idle_slots: list[int] = field(default_factory=list)

    @property
    def lattice(self) -> LatticeSpec:
        return self.strip.lattice

    @property
    def starts(self) -> list[int]:
        return [next((t for t, op in lane if op.kind != NEW_BUS), 0) for lane in self.lanes]

    def timeline(self) -> list[TimedOp]:
        out = [TimedOp(t, bus, op) for bus, lane in enumerate(self.lanes) for t, op in lane]
        out.sort(key=lambda e: (e.slot, e.bus, e.op.kind != NEW_BUS))
        return out

    def bus_ops(self, bus: int) -> list[BusOp]:
        return [op for _, op in self.lanes[bus]]

    def occupancy(self) -> dict[int, dict[int, list[int]]]:
        """slot -> {qubit: buses holding it in that slot}."""
        occ: dict[int, dict[int, list[int]]] = {}
        for q, spans in _intervals(self).items():
            for t0, t1, bus in spans:
                for t in range(t0, t1 + 1):
                    occ.setdefault(t, {}).setdefault(q, []).append(bus)
        return occ

    @property
    def op_counts(self) -> list[int]:
        return [sum(op.kind != NEW_BUS for _, op in lane) for lane in self.lanes]

    @property
    def gate_counts(self) -> list[int]:
        return [sum(g) for g in self.brick_gates]


def _lane_rows(strip: StripSpec, lane: int) -> list[int]:
    r = lane * strip.rows_per_bus
    return list(range(r, r + strip.rows_per_bus))


def _groups(ops: list[BusOp], own: set[int]) -> list[list[BusOp]]:
    """Split a bus program into blocks; a borrow stays in one block with
    everything up to its release so it can be delayed as a unit."""
    out: list[list[BusOp]] = []
    i = 0
    while i < len(ops):
        op = ops[i]
        if op.kind == "attach" and op.qubit not in own:
            open_ = set()
            j = i
            while True:
                o = ops[j]
                if o.qubit not in own and o.kind == "attach":
                    open_.add(o.qubit)
                elif o.kind == "detach":
                    open_.discard(o.qubit)
                j += 1
                if not open_:
                    break
            out.append(ops[i:j])
            i = j
        else:
            out.append([op])
            i += 1
    return out


def _is_free(held: dict[int, list[tuple[int, int]]], q: int, t0: int, t1: int) -> bool:
    return all(e < t0 or s > t1 for s, e in held.get(q, ()))


def _place(ops: list[BusOp], start: int, own: set[int], held) -> tuple[list[tuple[int, BusOp]], int]:
    placed: list[tuple[int, BusOp]] = []
    t = start
    idle = 0
    for block in _groups(ops, own):
        if block[0].kind == "new_bus":
            placed.append((t, block[0]))
            continue
        while True:
            spans = {}
            for k, op in enumerate(block):
                if op.qubit not in own:
                    if op.kind == "attach":
                        spans[op.qubit] = [t + k, None]
                    else:
                        spans[op.qubit][1] = t + k
            if all(_is_free(held, q, a, b) for q, (a, b) in spans.items()):
                break
            t += 1
            idle += 1
        for op in block:
            placed.append((t, op))
            t += 1
    return placed, idle


def schedule_parallel(strip: StripSpec, stagger: int = STAGGER) -> ParallelSchedule:
    lat = strip.lattice
    finished: set[int] = set()
    created: set[Edge] = set()
    lanes = []
    brick_gates = []
    idle = []
    held: dict[int, list[tuple[int, int]]] = {}
    for lane in range(strip.lanes):
        rows = _lane_rows(strip, lane)
        own = {lat.index(r, c) for r in rows for c in range(strip.horizon)}
        ops: list[BusOp] = []
        gates = []
        for cols in strip.brick_columns():
            builder = ScheduleBuilder(lat, 2, finished, created)
            for c in cols:
                for r in rows:
                    builder.add(lat.index(r, c))
            brick = builder.flush()
            gates.append(sum(1 for _, ev, _ in walk_crossings(brick) if ev == "cross"))
            if ops:
                ops.append(NEWBUS)
            ops.extend(brick)
        placed, waited = _place(ops, lane * stagger, own, held)
        lanes.append(placed)
        brick_gates.append(gates)
        idle.append(waited)
        attached: dict[int, int] = {}
        for t, op in placed:
            if op.kind == "attach":
                attached[op.qubit] = t
            elif op.kind == "detach":
                held.setdefault(op.qubit, []).append((attached.pop(op.qubit), t))
    return ParallelSchedule(strip, stagger, lanes, brick_gates, idle)


def stagger_lanes(sched: ParallelSchedule, stagger: int) -> ParallelSchedule:
    """Same bus programs laid out back to back from ``bus * stagger``, no waits."""
    lanes = []
    for bus, lane in enumerate(sched.lanes):
        t = bus * stagger
        placed = []
        for _, op in lane:
            placed.append((t, op))
            if op.kind != NEW_BUS:
                t += 1
        lanes.append(placed)
    return ParallelSchedule(sched.strip, stagger, lanes, sched.brick_gates, [0] * len(lanes))


@dataclass
class Conflict:
    kind: str
    slot: int | None
    detail: str


def _intervals(sched: ParallelSchedule) -> dict[int, list[tuple[int, int, int]]]:
    """qubit -> [(first slot, last slot, bus)] for every attachment."""
    out: dict[int, list[tuple[int, int, int]]] = {}
    for bus, lane in enumerate(sched.lanes):
        held: dict[int, int] = {}
        last = 0
        for t, op in lane:
            if op.kind == NEW_BUS:
                continue
            last = t
            if op.kind == "attach":
                held[op.qubit] = t
            elif op.qubit in held:
                out.setdefault(op.qubit, []).append((held.pop(op.qubit), t, bus))
        for q, t0 in held.items():
            out.setdefault(q, []).append((t0, last, bus))
    return out


def check_conflicts(sched: ParallelSchedule, min_stagger: int = STAGGER) -> list[Conflict]:
    found = []
    starts = sched.starts
    for b in range(1, len(starts)):
        gap = starts[b] - starts[b - 1]
        if gap < min_stagger:
            found.append(
                Conflict("stagger", starts[b], f"bus {b} starts {gap} slots after bus {b - 1} (< {min_stagger})")
            )
    for bus, lane in enumerate(sched.lanes):
        slots = [t for t, op in lane if op.kind != NEW_BUS]
        for a, b in zip(slots, slots[1:]):
            if b <= a:
                found.append(Conflict("double-booked", b, f"bus {bus} has two operations in slot {b}"))
    lat = sched.lattice
    for q, spans in sorted(_intervals(sched).items()):
        spans.sort()
        for i, (s0, e0, b0) in enumerate(spans):
            for s1, e1, b1 in spans[i + 1:]:
                if s1 > e0:
                    break
                if b0 != b1:
                    found.append(
                        Conflict("collision", s1, f"qubit {lat.coord(q)} held by buses {b0} and {b1} in slot {s1}")
                    )
    found.sort(key=lambda c: (c.slot if c.slot is not None else -1, c.kind))
    return found


def makespan(sched: ParallelSchedule, tau: float | None = None) -> tuple[int, float | None]:
    """Slots used (last occupied slot + 1) and the duration for slot length ``tau``."""
    last = max((t for lane in sched.lanes for t, op in lane if op.kind != NEW_BUS), default=-1)
    slots = last + 1
    return slots, (slots * tau if tau is not None else None)


def simulate_parallel(sched: ParallelSchedule, magnitude: float = BETA_DEFAULT) -> HybridState:
    """Run every bus in slot order, one bus mode per lane."""
    program = []
    for e in sched.timeline():
        if e.op.kind == NEW_BUS:
            program.append(BusReset(e.bus))
        else:
            program.append(e.op.lower(magnitude, bus=e.bus))
    state = init_register(sched.lattice.n_qubits, n_buses=len(sched.lanes))
    return apply_sequence(state, program)


def correction_frame(sched: ParallelSchedule, beta_sq: float = BETA_DEFAULT**2) -> list[float]:
    frame = [0.0] * sched.lattice.n_qubits
    for bus in range(len(sched.lanes)):
        for _, ev, payload in walk_crossings(sched.bus_ops(bus)):
            if ev != "cross":
                continue
            older, younger, quad = payload
            k = 1 if quad.value == "x" else -1
            frame[older] -= k * 2 * beta_sq
            frame[younger] -= k * 2 * beta_sq
    return frame


def created_edges(sched: ParallelSchedule) -> list[Edge]:
    out = []
    for bus in range(len(sched.lanes)):
        for _, ev, payload in walk_crossings(sched.bus_ops(bus)):
            if ev == "cross":
                a, b, _ = payload
                out.append((min(a, b), max(a, b)))
    return out


def _op_dict(lat: LatticeSpec, op: BusOp) -> dict:
    if op.kind == NEW_BUS:
        return {"kind": NEW_BUS}
    return {"kind": op.kind, "qubit": list(lat.coord(op.qubit)), "quad": op.quad.value}


def parallel_to_dict(sched: ParallelSchedule) -> dict:
    lat = sched.lattice
    slots: list[list] = []
    for e in sched.timeline():
        while len(slots) <= e.slot:
            slots.append([])
        slots[e.slot].append([e.bus, _op_dict(lat, e.op)])
    s = sched.strip
    return {
        "strip": {"w": s.width, "k": s.lanes, "pitch": s.pitch},
        "slots": slots,
        "makespan_slots": makespan(sched)[0],
    }


def dumps_parallel(sched: ParallelSchedule) -> str:
    return json.dumps(parallel_to_dict(sched), indent=1) + "\n"


def occupancy_csv(sched: ParallelSchedule) -> str:
    lat = sched.lattice
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["slot", "bus", "kind", "row", "col", "quad"])
    for e in sched.timeline():
        if e.op.kind == NEW_BUS:
            w.writerow([e.slot, e.bus, NEW_BUS, "", "", ""])
        else:
            r, c = lat.coord(e.op.qubit)
            w.writerow([e.slot, e.bus, e.op.kind, r, c, e.op.quad.value])
    return buf.getvalue()


def slot_throughput(sched: ParallelSchedule) -> float:
    """Strip qubits completed per slot over the makespan."""
    slots, _ = makespan(sched)
    return sched.lattice.n_qubits / slots if slots else 0.0


def as_array(sched: ParallelSchedule) -> np.ndarray:
    """slots x buses table of op kinds (0 idle, 1 attach, 2 detach)."""
    slots, _ = makespan(sched)
    table = np.zeros((slots, len(sched.lanes)), dtype=int)
    for e in sched.timeline():
        if e.op.kind != NEW_BUS:
            table[e.slot, e.bus] = 1 if e.op.kind == "attach" else 2
    return table
