"""
Bus-operation schedules for building an m x n cluster.

A qubit joins the bus with an attach (positive conditional displacement on
its quadrature) and leaves with a detach (negative displacement, same
quadrature).  Two qubits on opposite quadratures pick up a CPHASE-class phase
exactly when their attachment intervals *cross*: the older one detaches while
the younger is still on the bus.  If one interval sits inside the other the
bus path retraces itself and no phase is left over.  ``validate_schedule``
uses this rule, so it agrees with the exact simulator op for op.

The width-two strategies follow one recipe: qubits are
attached along a path with a checkerboard quadrature assignment, the oldest
qubit is detached whenever the next one would otherwise couple to a
non-neighbour (or exceed the path width), and just before a qubit's final
detach every already-finished neighbour it still lacks an edge to is briefly
re-attached around that detach.  The width-one line strategy cannot stitch
that way (the slot on the other quadrature is taken), so it walks edge
trails instead.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .lattice import Edge, LatticeSpec
from .qubus import (
    BETA_DEFAULT,
    CondDisplacement,
    HybridState,
    P,
    Quadrature,
    X,
    apply_sequence,
    init_register,
    is_bus_disentangled,
)

ATTACH = "attach"
DETACH = "detach"
NEW_BUS = "new_bus"

STRATEGIES = ("no-reuse", "line", "zigzag2", "bricks")


@dataclass(frozen=True)
class BusOp:
    kind: str
    qubit: int | None = None
    quad: Quadrature | None = None

    def __post_init__(self):
        if self.kind not in (ATTACH, DETACH, NEW_BUS):
            raise ValueError(f"unknown bus op kind {self.kind!r}")
        if self.kind != NEW_BUS and (self.qubit is None or self.quad is None):
            raise ValueError(f"{self.kind} needs a qubit and a quadrature")

    def lower(self, magnitude: float = BETA_DEFAULT, bus: int = 0) -> CondDisplacement:
        if self.kind == NEW_BUS:
            raise ValueError("new_bus has no displacement")
        sign = 1 if self.kind == ATTACH else -1
        return CondDisplacement(self.qubit, self.quad, sign, magnitude, bus)


def attach(q: int, quad: Quadrature) -> BusOp:
    return BusOp(ATTACH, q, quad)


def detach(q: int, quad: Quadrature) -> BusOp:
    return BusOp(DETACH, q, quad)


NEWBUS = BusOp(NEW_BUS)


@dataclass
class Schedule:
    lattice: LatticeSpec
    strategy: str
    ops: list[BusOp]
    brick_length: int | None = None
    turns: int = 0

    @property
    def op_count(self) -> int:
        return sum(op.kind != NEW_BUS for op in self.ops)

    @property
    def bus_count(self) -> int:
        if not any(op.kind != NEW_BUS for op in self.ops):
            return 0
        return 1 + sum(op.kind == NEW_BUS for op in self.ops)

    def segments(self) -> list[list[BusOp]]:
        out: list[list[BusOp]] = [[]]
        for op in self.ops:
            if op.kind == NEW_BUS:
                out.append([])
            else:
                out[-1].append(op)
        return out

    @property
    def gate_counts(self) -> list[int]:
        return validate_schedule(self, self.lattice, require_complete=False).gates_per_bus


@dataclass
class Violation:
    kind: str
    detail: str
    op_index: int | None = None


@dataclass
class ValidationReport:
    valid: bool
    created_edges: set[Edge]
    violations: list[Violation]
    # net phase per crossing pair in units of 2*beta^2
    couplings: dict[Edge, int]
    gates_per_bus: list[int]

    def correction_frame(self, n_qubits: int, beta_sq: float = BETA_DEFAULT**2) -> list[float]:
        """Local Z angles turning every created gate into an exact CZ."""
        frame = [0.0] * n_qubits
        for (a, b), k in self.couplings.items():
            frame[a] -= k * 2 * beta_sq
            frame[b] -= k * 2 * beta_sq
        return frame


def _edge(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


def walk_crossings(ops: Sequence[BusOp]) -> Iterator[tuple[int, str, object]]:
    """Yield (op index, event, payload) while tracking live attachments.

    Events: ``("cross", (older, younger, older_quad))``, ``("error", (kind, text))``,
    ``("bus_end", None)``.
    """
    live: dict[int, tuple[Quadrature, int]] = {}
    for i, op in enumerate(ops):
        if op.kind == NEW_BUS:
            if live:
                yield i, "error", ("entangled-bus-switch", f"bus switched with {sorted(live)} attached")
                live.clear()
            yield i, "bus_end", None
            continue
        q = op.qubit
        if op.kind == ATTACH:
            if q in live:
                yield i, "error", ("double-attach", f"qubit {q} attached twice")
                continue
            live[q] = (op.quad, i)
            continue
        if q not in live:
            yield i, "error", ("detach-unattached", f"qubit {q} detached while not attached")
            continue
        quad, t0 = live.pop(q)
        if quad is not op.quad:
            yield i, "error", ("quadrature-mismatch", f"qubit {q} attached on {quad.value}, detached on {op.quad.value}")
        for r, (rquad, t1) in live.items():
            if rquad is not quad and t1 > t0:
                yield i, "cross", (q, r, quad)
    if live:
        yield len(ops), "error", ("bus-left-entangled", f"qubits {sorted(live)} still attached at the end")
    yield len(ops), "bus_end", None


def validate_schedule(
    schedule: Schedule | Sequence[BusOp],
    lattice: LatticeSpec,
    require_complete: bool = True,
) -> ValidationReport:
    ops = schedule.ops if isinstance(schedule, Schedule) else list(schedule)
    violations: list[Violation] = []
    couplings: dict[Edge, int] = {}
    crossings: dict[Edge, int] = {}
    gates: list[int] = []
    current = 0
    for i, op in enumerate(ops):
        if op.kind != NEW_BUS and not 0 <= op.qubit < lattice.n_qubits:
            violations.append(Violation("qubit-out-of-range", f"qubit {op.qubit}", i))
    if violations:
        return ValidationReport(False, set(), violations, {}, [])
    for i, event, payload in walk_crossings(ops):
        if event == "error":
            kind, text = payload
            violations.append(Violation(kind, text, i))
        elif event == "bus_end":
            gates.append(current)
            current = 0
        else:
            older, younger, quad = payload
            e = _edge(older, younger)
            k = 1 if quad is X else -1
            couplings[e] = couplings.get(e, 0) + k
            crossings[e] = crossings.get(e, 0) + 1
            current += 1
            if crossings[e] > 1:
                violations.append(Violation("duplicate-gate", f"pair {e} coupled more than once", i))
            if e not in lattice.edges:
                violations.append(
                    Violation(
                        "unwanted-entanglement",
                        f"non-adjacent pair {lattice.coord(e[0])}-{lattice.coord(e[1])}",
                        i,
                    )
                )
    if len(gates) > 1 and gates[-1] == 0 and ops and ops[-1].kind == NEW_BUS:
        gates.pop()
    couplings = {e: k for e, k in couplings.items() if k}
    created = set(couplings)
    if require_complete:
        missing = lattice.edges - created
        if missing:
            violations.append(
                Violation("missing-edges", f"{len(lattice.edges) - len(missing)} of {len(lattice.edges)} edges created")
            )
    return ValidationReport(not violations, created, violations, couplings, gates)


# ---------------------------------------------------------------------------
# simulation


def lower_schedule(ops: Iterable[BusOp], magnitude: float = BETA_DEFAULT, bus: int = 0) -> list[CondDisplacement | None]:
    """Displacements in time order; ``None`` marks a bus swap."""
    return [None if op.kind == NEW_BUS else op.lower(magnitude, bus) for op in ops]


def simulate_schedule(schedule: Schedule, magnitude: float = BETA_DEFAULT) -> tuple[HybridState, bool]:
    """Run a schedule on |+>^n.

    Returns the final state and whether every bus was disentangled when it
    was swapped out and at the end.
    """
    state = init_register(schedule.lattice.n_qubits)
    clean = True
    for seg in schedule.segments():
        if not seg:
            continue
        if not is_bus_disentangled(state):
            clean = False
            state = HybridState(state.n_qubits, state.amps, 0 * state.alpha)
        state = apply_sequence(state, [op.lower(magnitude) for op in seg])
    return state, clean and is_bus_disentangled(state)


# ---------------------------------------------------------------------------
# construction


def quad_of(lattice: LatticeSpec, q: int) -> Quadrature:
    return X if lattice.colour(q) == 0 else P


class ScheduleBuilder:
    """Greedy path sweep with stitching at each qubit's last detach.

    ``finished`` and ``created`` may be shared between builders so that later
    buses stitch to qubits placed by earlier ones.
    """

    def __init__(
        self,
        lattice: LatticeSpec,
        width: int,
        finished: set[int] | None = None,
        created: set[Edge] | None = None,
        may_stitch: Callable[[int], bool] | None = None,
    ):
        self.lattice = lattice
        self.width = width
        self.finished = set() if finished is None else finished
        self.created = set() if created is None else created
        self.may_stitch = may_stitch
        self.ops: list[BusOp] = []
        self.live: deque[int] = deque()

    def _fits(self, q: int) -> bool:
        quad = quad_of(self.lattice, q)
        same = 0
        for r in self.live:
            if quad_of(self.lattice, r) is quad:
                same += 1
            elif not self.lattice.are_adjacent(q, r):
                return False
        return same < self.width

    def _pop(self) -> None:
        p = self.live.popleft()
        lat = self.lattice
        stitches = [
            r
            for r in lat.neighbours(p)
            if r in self.finished
            and _edge(p, r) not in self.created
            and (self.may_stitch is None or self.may_stitch(r))
        ]
        for r in stitches:
            self.ops.append(attach(r, quad_of(lat, r)))
        self.ops.append(detach(p, quad_of(lat, p)))
        for r in stitches:
            self.ops.append(detach(r, quad_of(lat, r)))
            self.created.add(_edge(p, r))
        self.finished.add(p)

    def add(self, q: int) -> None:
        if q in self.finished or q in self.live:
            raise ValueError(f"qubit {q} already placed")
        while self.live and not self._fits(q):
            self._pop()
        quad = quad_of(self.lattice, q)
        for r in self.live:
            if quad_of(self.lattice, r) is not quad:
                self.created.add(_edge(q, r))
        self.ops.append(attach(q, quad))
        self.live.append(q)

    def flush(self) -> list[BusOp]:
        while self.live:
            self._pop()
        ops, self.ops = self.ops, []
        return ops


def _band_rows(rows: int) -> list[list[int]]:
    return [list(range(r, min(r + 2, rows))) for r in range(0, rows, 2)]


def _oriented(lattice: LatticeSpec, transpose: bool) -> Callable[[int, int], int]:
    if transpose:
        return lambda r, c: lattice.index(c, r)
    return lambda r, c: lattice.index(r, c)


def _zigzag_path(lattice: LatticeSpec, transpose: bool) -> tuple[list[int], int]:
    rows, cols = (lattice.n, lattice.m) if transpose else (lattice.m, lattice.n)
    at = _oriented(lattice, transpose)
    path = []
    bands = _band_rows(rows)
    for k, band in enumerate(bands):
        cs = range(cols) if k % 2 == 0 else range(cols - 1, -1, -1)
        for c in cs:
            path.extend(at(r, c) for r in band)
    return path, len(bands) - 1


def edge_trails(lattice: LatticeSpec) -> list[list[int]]:
    """Split the edge set into the fewest trails (odd-degree vertices / 2, at least one).

    Odd vertices are paired by virtual edges, an Euler circuit is traced and
    then cut at the virtual edges.  Deterministic for a given lattice.
    """
    n = lattice.n_qubits
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    real = sorted(lattice.edges)
    for k, (a, b) in enumerate(real):
        adj[a].append((b, k))
        adj[b].append((a, k))
    odd = [q for q in range(n) if len(adj[q]) % 2]
    n_edges = len(real)
    for i in range(0, len(odd), 2):
        a, b = odd[i], odd[i + 1]
        adj[a].append((b, n_edges))
        adj[b].append((a, n_edges))
        n_edges += 1
    if not real:
        return []
    used = [False] * n_edges
    ptr = [0] * n
    start = odd[0] if odd else real[0][0]
    stack: list[tuple[int, int]] = [(start, -1)]
    circuit: list[tuple[int, int]] = []
    while stack:
        v, via = stack[-1]
        while ptr[v] < len(adj[v]) and used[adj[v][ptr[v]][1]]:
            ptr[v] += 1
        if ptr[v] == len(adj[v]):
            circuit.append(stack.pop())
        else:
            w, k = adj[v][ptr[v]]
            used[k] = True
            stack.append((w, k))
    circuit.reverse()
    # circuit[i] = (vertex, edge used to reach it); cut at the virtual edges
    n_real = len(real)
    if odd:
        first = next(i for i, (_, k) in enumerate(circuit) if k >= n_real)
        circuit = circuit[first:] + circuit[1:first + 1]
    trails: list[list[int]] = []
    cur = [circuit[0][0]]
    for v, k in circuit[1:]:
        if k >= n_real:
            trails.append(cur)
            cur = [v]
        else:
            cur.append(v)
    trails.append(cur)
    return [t for t in trails if len(t) > 1]


def _sweep(lattice: LatticeSpec, path: Sequence[int], width: int) -> list[BusOp]:
    b = ScheduleBuilder(lattice, width)
    for q in path:
        b.add(q)
    return b.flush()


def _orientations(lattice: LatticeSpec) -> list[bool]:
    # bands along the longer dimension first so it wins ties
    return [False, True] if lattice.n >= lattice.m else [True, False]


def _best(candidates: list[Schedule]) -> Schedule:
    return min(candidates, key=lambda s: s.op_count)


def plan_no_reuse(lattice: LatticeSpec) -> Schedule:
    ops: list[BusOp] = []
    for a, b in sorted(lattice.edges):
        if ops:
            ops.append(NEWBUS)
        qa, qb = quad_of(lattice, a), quad_of(lattice, b)
        ops += [attach(a, qa), attach(b, qb), detach(a, qa), detach(b, qb)]
    return Schedule(lattice, "no-reuse", ops)


def plan_line(lattice: LatticeSpec) -> Schedule:
    """Width-one passes: never more than one qubit per quadrature.

    A qubit can only gain an edge to the previous qubit of the pass, so the
    schedule walks a minimal set of edge trails, re-attaching a qubit each
    time a trail returns to it.
    """
    ops: list[BusOp] = []
    for trail in edge_trails(lattice):
        prev = None
        for q in trail:
            ops.append(attach(q, quad_of(lattice, q)))
            if prev is not None:
                ops.append(detach(prev, quad_of(lattice, prev)))
            prev = q
        ops.append(detach(prev, quad_of(lattice, prev)))
    return Schedule(lattice, "line", ops)


def plan_zigzag2(lattice: LatticeSpec) -> Schedule:
    cands = []
    for t in _orientations(lattice):
        path, turns = _zigzag_path(lattice, t)
        cands.append(Schedule(lattice, "zigzag2", _sweep(lattice, path, 2), turns=turns))
    return _best(cands)


@dataclass
class Brick:
    band: int
    block: int
    core: list[int]
    ops: list[BusOp]
    reactivated: list[int] = field(default_factory=list)

    @property
    def op_count(self) -> int:
        return len(self.ops)

    @property
    def qubits(self) -> int:
        return len(self.core) + len(self.reactivated)

    @property
    def gates(self) -> int:
        return sum(1 for _, ev, _ in walk_crossings(self.ops) if ev == "cross")


@dataclass
class BrickPlan:
    lattice: LatticeSpec
    b: int
    bricks: list[Brick]
    transposed: bool = False

    @property
    def shared_qubits(self) -> dict[int, list[int]]:
        """Qubit -> indices of the bricks that put it on a bus (when > 1)."""
        touch: dict[int, list[int]] = {}
        for i, br in enumerate(self.bricks):
            for q in dict.fromkeys(br.core + br.reactivated):
                touch.setdefault(q, []).append(i)
        return {q: v for q, v in touch.items() if len(v) > 1}

    def to_schedule(self) -> Schedule:
        ops: list[BusOp] = []
        for br in self.bricks:
            if ops:
                ops.append(NEWBUS)
            ops.extend(br.ops)
        return Schedule(self.lattice, "bricks", ops, brick_length=self.b)

    @property
    def op_count(self) -> int:
        return sum(br.op_count for br in self.bricks)


def _brick_plan(lattice: LatticeSpec, b: int, transpose: bool) -> BrickPlan:
    rows, cols = (lattice.n, lattice.m) if transpose else (lattice.m, lattice.n)
    at = _oriented(lattice, transpose)
    finished: set[int] = set()
    created: set[Edge] = set()
    bricks = []
    bands = _band_rows(rows)
    for j, c0 in enumerate(range(0, cols, b)):
        for k, band in enumerate(bands):
            core = [at(r, c) for c in range(c0, min(c0 + b, cols)) for r in band]
            builder = ScheduleBuilder(lattice, 2, finished, created)
            for q in core:
                builder.add(q)
            ops = builder.flush()
            core_set = set(core)
            react = list(dict.fromkeys(op.qubit for op in ops if op.qubit not in core_set))
            bricks.append(Brick(k, j, core, ops, react))
    return BrickPlan(lattice, b, bricks, transpose)


def plan_bricks(lattice: LatticeSpec, b: int) -> BrickPlan:
    if b < 1:
        raise ValueError(f"brick length must be >= 1, got {b}")
    return min((_brick_plan(lattice, b, t) for t in _orientations(lattice)), key=lambda p: p.op_count)


def plan(lattice: LatticeSpec, strategy: str, b: int | None = None) -> Schedule:
    if lattice.m < 2 or lattice.n < 2:
        raise ValueError(f"lattice {lattice.m}x{lattice.n} is too small; need at least 2x2")
    if strategy == "no-reuse":
        return plan_no_reuse(lattice)
    if strategy == "line":
        return plan_line(lattice)
    if strategy == "zigzag2":
        return plan_zigzag2(lattice)
    if strategy == "bricks":
        if b is None:
            raise ValueError("bricks strategy needs a brick length b")
        return plan_bricks(lattice, b).to_schedule()
    raise ValueError(f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")


# ---------------------------------------------------------------------------
# serialization


def schedule_to_dict(schedule: Schedule) -> dict:
    lat = schedule.lattice
    ops = []
    for op in schedule.ops:
        if op.kind == NEW_BUS:
            ops.append({"kind": NEW_BUS})
        else:
            ops.append({"kind": op.kind, "qubit": list(lat.coord(op.qubit)), "quad": op.quad.value})
    meta = {"N": schedule.op_count, "buses": schedule.bus_count, "turns": schedule.turns}
    if schedule.brick_length is not None:
        meta["b"] = schedule.brick_length
    return {"lattice": {"m": lat.m, "n": lat.n}, "strategy": schedule.strategy, "ops": ops, "meta": meta}


def schedule_from_dict(doc: dict) -> Schedule:
    try:
        lat = LatticeSpec(int(doc["lattice"]["m"]), int(doc["lattice"]["n"]))
        ops = []
        for entry in doc["ops"]:
            kind = entry["kind"]
            if kind == NEW_BUS:
                ops.append(NEWBUS)
                continue
            r, c = entry["qubit"]
            ops.append(BusOp(kind, lat.index(int(r), int(c)), Quadrature(entry["quad"])))
        meta = doc.get("meta", {})
        return Schedule(lat, str(doc["strategy"]), ops, meta.get("b"), int(meta.get("turns", 0)))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ValueError(f"malformed schedule document: {exc}") from exc


def dumps_schedule(schedule: Schedule) -> str:
    return json.dumps(schedule_to_dict(schedule), indent=1) + "\n"


def loads_schedule(text: str) -> Schedule:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"schedule is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError("schedule document must be a JSON object")
    return schedule_from_dict(doc)


def cphase_angle(beta_sq: float) -> float:
    """Conditional phase of one crossing: 2 beta^2 (pi/4 at the CPHASE point)."""
    return 2 * beta_sq


__all__ = [name for name in dir() if not name.startswith("_") and name not in {"annotations", "json", "math"}]
