"""
Exact simulation of qubits coupled to a two-quadrature bus.

Every basis branch of the register carries a complex amplitude and a complex
bus displacement ``alpha`` (one per bus mode).  A conditional displacement on
qubit ``q`` moves the bus of branch ``z`` by ``d = sign * z_q * magnitude``
(real for position, imaginary for momentum) and multiplies the amplitude by
the composition phase ``exp(i Im(d * conj(alpha)))``.

Conventions:
- qubit ``j`` is bit ``j`` of the basis index; ``z_j = +1`` for bit 0, ``-1`` for bit 1.
- basis strings list qubit 0 first, e.g. ``"01"`` means q0=0, q1=1.
- global phase is never compared; only relative phases are meaningful.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

BETA_SQ_CPHASE = math.pi / 8
BETA_DEFAULT = math.sqrt(BETA_SQ_CPHASE)
DEFAULT_TOL = 1e-9


class Quadrature(enum.Enum):
    POSITION = "x"
    MOMENTUM = "p"

    @property
    def opposite(self) -> "Quadrature":
        return Quadrature.MOMENTUM if self is Quadrature.POSITION else Quadrature.POSITION


X = Quadrature.POSITION
P = Quadrature.MOMENTUM


class PreconditionError(ValueError):
    """Raised when an operation's state precondition does not hold."""


@dataclass(frozen=True)
class CondDisplacement:
    qubit: int
    quad: Quadrature
    sign: int = 1
    magnitude: float = BETA_DEFAULT
    bus: int = 0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")
        if not self.magnitude > 0:
            raise ValueError(f"magnitude must be positive, got {self.magnitude!r}")
        if self.qubit < 0 or self.bus < 0:
            raise ValueError("qubit and bus indices must be non-negative")

    @property
    def step(self) -> complex:
        """Bus displacement for a branch with z = +1."""
        d = self.sign * self.magnitude
        return complex(d, 0.0) if self.quad is X else complex(0.0, d)

    def inverse(self) -> "CondDisplacement":
        return CondDisplacement(self.qubit, self.quad, -self.sign, self.magnitude, self.bus)


@dataclass(frozen=True)
class BusReset:
    """Swap bus ``bus`` for a fresh vacuum mode (it must be disentangled)."""

    bus: int = 0


def _split(n: int, q: int) -> tuple[int, int, int]:
    # index = hi * 2**(q+1) + bit * 2**q + lo
    return 1 << (n - q - 1), 2, 1 << q


_Z = np.array([1.0, -1.0]).reshape(1, 2, 1)


def z_values(n: int, q: int) -> np.ndarray:
    """sigma_z eigenvalue of qubit ``q`` on every basis branch."""
    return np.broadcast_to(_Z, _split(n, q)).reshape(-1)


@dataclass(frozen=True, eq=False)
class HybridState:
    """Joint register/bus state; arrays are read-only after construction."""

    n_qubits: int
    amps: np.ndarray
    alpha: np.ndarray  # shape (n_buses, 2**n_qubits)

    def __post_init__(self):
        dim = 1 << self.n_qubits
        if self.amps.shape != (dim,) or self.alpha.ndim != 2 or self.alpha.shape[1] != dim:
            raise ValueError("array shapes do not match the register size")
        self.amps.setflags(write=False)
        self.alpha.setflags(write=False)

    @property
    def n_buses(self) -> int:
        return self.alpha.shape[0]

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def basis_string(self, index: int) -> str:
        return "".join(str((index >> j) & 1) for j in range(self.n_qubits))

    def branches(self, bus: int = 0) -> dict[str, tuple[complex, complex]]:
        """Map basis string -> (amplitude, bus displacement)."""
        return {
            self.basis_string(i): (complex(self.amps[i]), complex(self.alpha[bus, i]))
            for i in range(1 << self.n_qubits)
        }


def init_register(n: int, n_buses: int = 1) -> HybridState:
    """|+>^n with every bus at vacuum."""
    if n < 1:
        raise ValueError(f"register needs at least one qubit, got {n}")
    if n_buses < 1:
        raise ValueError(f"need at least one bus, got {n_buses}")
    dim = 1 << n
    amps = np.full(dim, 1.0 / math.sqrt(dim), dtype=complex)
    return HybridState(n, amps, np.zeros((n_buses, dim), dtype=complex))


def _check_op(state: HybridState, op: CondDisplacement) -> None:
    if not 0 <= op.qubit < state.n_qubits:
        raise IndexError(f"qubit {op.qubit} out of range for {state.n_qubits}-qubit register")
    if op.bus >= state.n_buses:
        raise IndexError(f"bus {op.bus} out of range for {state.n_buses} bus(es)")


def _step_inplace(
    n: int, phase: np.ndarray, re: np.ndarray, im: np.ndarray, tmp: np.ndarray, op: CondDisplacement
) -> None:
    shape = _split(n, op.qubit)
    d = op.sign * op.magnitude
    ph = phase.reshape(shape)
    if op.quad is X:
        # Im(d z conj(a)) = -d z Im(a)
        src, dst, s = im[op.bus].reshape(shape), re[op.bus].reshape(shape), -d
    else:
        # d -> i d: Im(i d z conj(a)) = d z Re(a)
        src, dst, s = re[op.bus].reshape(shape), im[op.bus].reshape(shape), d
    buf = tmp.reshape(shape[0], 1, shape[2])[:, 0, :]
    for bit, z in ((0, 1.0), (1, -1.0)):
        np.multiply(src[:, bit, :], s * z, out=buf)
        ph[:, bit, :] += buf
        dst[:, bit, :] += d * z


def apply_sequence(
    state: HybridState, ops: Iterable[CondDisplacement | BusReset], tol: float = DEFAULT_TOL
) -> HybridState:
    """Apply displacements in the order given (first element acts first)."""
    n = state.n_qubits
    phase = np.zeros(1 << n)
    re = np.array(state.alpha.real, copy=True)
    im = np.array(state.alpha.imag, copy=True)
    tmp = np.empty(1 << (n - 1)) if n > 1 else np.empty(1)
    for op in ops:
        if isinstance(op, BusReset):
            if max(np.max(np.abs(re[op.bus])), np.max(np.abs(im[op.bus]))) > tol:
                raise PreconditionError(f"bus {op.bus} swapped out while still entangled")
            re[op.bus] = 0
            im[op.bus] = 0
            continue
        _check_op(state, op)
        _step_inplace(n, phase, re, im, tmp, op)
    amps = state.amps * np.exp(1j * phase)
    return HybridState(n, amps, re + 1j * im)


def apply_cdisp(state: HybridState, op: CondDisplacement) -> HybridState:
    return apply_sequence(state, [op])


def is_bus_disentangled(state: HybridState, tol: float = DEFAULT_TOL, bus: int | None = None) -> bool:
    a = state.alpha if bus is None else state.alpha[bus]
    return bool(np.max(np.abs(a)) <= tol)


def _wrap(theta: np.ndarray | float):
    # map into (-pi, pi]
    return math.pi - np.mod(math.pi - np.asarray(theta), 2 * math.pi)


def extract_diagonal_unitary(
    before: HybridState, after: HybridState, tol: float = DEFAULT_TOL
) -> dict[str, float | None]:
    """Per-branch phase accrued between two bus-free states.

    Entries are angles in (-pi, pi]; a branch with (near) zero amplitude in
    either state maps to ``None``.
    """
    if before.n_qubits != after.n_qubits:
        raise ValueError("states have different register sizes")
    if not (is_bus_disentangled(before, tol) and is_bus_disentangled(after, tol)):
        raise PreconditionError("bus must be disentangled in both states")
    table: dict[str, float | None] = {}
    for i in range(1 << before.n_qubits):
        a, b = before.amps[i], after.amps[i]
        key = before.basis_string(i)
        if abs(a) <= tol or abs(b) <= tol:
            table[key] = None
        else:
            table[key] = float(_wrap(np.angle(b / a)))
    return table


def entangling_phase(phases: Mapping[str, float | None]) -> float:
    """phi(00) - phi(01) - phi(10) + phi(11), wrapped into (-pi, pi]."""
    try:
        vals = [phases[k] for k in ("00", "01", "10", "11")]
    except KeyError as exc:
        raise ValueError(f"phase table is missing basis string {exc.args[0]!r}") from None
    if any(v is None for v in vals):
        raise ValueError("phase table has undefined entries")
    p00, p01, p10, p11 = vals
    return float(_wrap(p00 - p01 - p10 + p11))


def is_cphase_equivalent(phases: Mapping[str, float | None], tol: float = DEFAULT_TOL) -> bool:
    """True iff the 2-qubit diagonal gate equals CZ up to local Z rotations."""
    s = entangling_phase(phases)
    return abs(abs(s) - math.pi) <= tol


def apply_z_frame(state: HybridState, angles: Sequence[float]) -> HybridState:
    """Multiply every branch by exp(i * sum_j angles[j] * z_j)."""
    n = state.n_qubits
    if len(angles) != n:
        raise ValueError(f"correction frame has {len(angles)} angles for {n} qubits")
    phase = np.zeros(1 << n)
    for q, theta in enumerate(angles):
        if theta:
            phase.reshape(_split(n, q))[...] += theta * _Z
    return HybridState(n, state.amps * np.exp(1j * phase), state.alpha)


def stabilizer_expectation(amps: np.ndarray, n: int, site: int, neighbours: Iterable[int]) -> float:
    """<psi| X_site prod Z_nbr |psi> for a dense state vector."""
    v = amps.reshape(_split(n, site))
    # pair each branch with site=0 against its flip; the Z signs do not see the site bit
    w = np.conj(v[:, 0, :]) * v[:, 1, :]
    for b in neighbours:
        if b == site:
            raise ValueError("a site cannot neighbour itself")
        hb = b if b < site else b - 1
        w.reshape(_split(n - 1, hb))[:, 1, :] *= -1
    return float(2 * np.sum(w.real))


@dataclass
class StabilizerReport:
    passed: bool
    stabilizer_values: list[float]

    @property
    def min_value(self) -> float:
        return min(self.stabilizer_values) if self.stabilizer_values else 1.0


def verify_cluster_state(
    state: HybridState,
    lattice,
    correction_frame: Sequence[float] | None = None,
    tol: float = 1e-6,
) -> StabilizerReport:
    """Check K_a = X_a prod_{b ~ a} Z_b = +1 on every site of ``lattice``.

    ``lattice`` only needs ``n_qubits`` and ``neighbours(q)``.
    """
    if not is_bus_disentangled(state, DEFAULT_TOL):
        raise PreconditionError("bus is still entangled with the register")
    if lattice.n_qubits != state.n_qubits:
        raise ValueError(
            f"lattice has {lattice.n_qubits} qubits but state has {state.n_qubits}"
        )
    if correction_frame is not None:
        state = apply_z_frame(state, correction_frame)
    n = state.n_qubits
    amps = np.array(state.amps)
    values = [stabilizer_expectation(amps, n, a, lattice.neighbours(a)) for a in range(n)]
    return StabilizerReport(all(abs(v - 1.0) <= tol for v in values), values)


def ideal_graph_state(n: int, edges: Iterable[tuple[int, int]]) -> np.ndarray:
    """Reference path with no bus: CZ on every edge applied to |+>^n."""
    dim = 1 << n
    idx = np.arange(dim)
    sign = np.ones(dim)
    for a, b in edges:
        both = ((idx >> a) & 1) & ((idx >> b) & 1)
        sign[both == 1] *= -1
    return sign.astype(complex) / math.sqrt(dim)


def fidelity(psi: np.ndarray, phi: np.ndarray) -> float:
    """|<psi|phi>|^2, insensitive to global phase."""
    return float(abs(np.vdot(psi, phi)) ** 2)
