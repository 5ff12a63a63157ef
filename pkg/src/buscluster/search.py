"""
Exhaustive search for the most CPHASE edges one bus pass can create.

Every qubit joins the bus exactly once and at most ``width`` qubits sit on
each quadrature at a time.  Two coupling models are available:

strict (default)
    attaching a qubit couples it to every qubit live on the opposite
    quadrature, so all of those must be lattice neighbours and must leave
    the bus first.  This is the closed-box rule.
physical
    only crossing intervals couple (see :mod:`buscluster.planner`); a qubit
    may ride along inside another's interval without interacting.

The search is a memoised depth-first enumeration over
(attached set, ordered live set).  In the strict model a live qubit with no
unattached neighbours that is free to leave is always detached first; that
move dominates every alternative.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from functools import lru_cache

from .lattice import LatticeSpec
from .planner import BusOp, P, X, attach, detach

MAX_QUBITS = 12


@dataclass
class SearchResult:
    max_edges: int
    witness: list[BusOp]
    states: int


def _adjacency(lattice: LatticeSpec) -> list[int]:
    return [sum(1 << b for b in lattice.neighbours(q)) for q in range(lattice.n_qubits)]


def _strict(lattice: LatticeSpec, width: int):
    n = lattice.n_qubits
    adj = _adjacency(lattice)
    full = (1 << n) - 1
    memo: dict = {}

    # live: sorted tuple of (qubit, quad, mask of older opposite-quad live qubits)
    def moves(mask, live):
        rem = full & ~mask
        for q, quad, older in live:
            if not older and not adj[q] & rem:
                yield 0, mask, _drop(live, q), (q, quad, False)
                return
        lx = lp = 0
        for q, quad, _ in live:
            if quad:
                lp |= 1 << q
            else:
                lx |= 1 << q
        for quad, same, opp in ((0, lx, lp), (1, lp, lx)):
            if mask == 0 and quad:
                break  # quadrature swap symmetry
            if same.bit_count() >= width:
                continue
            gain = opp.bit_count()
            cand = rem
            t = opp
            while t:
                low = t & -t
                cand &= adj[low.bit_length() - 1]
                t ^= low
            while cand:
                low = cand & -cand
                q = low.bit_length() - 1
                cand ^= low
                yield gain, mask | low, tuple(sorted(live + ((q, quad, opp),))), (q, quad, True)
        for q, quad, older in live:
            if not older:
                yield 0, mask, _drop(live, q), (q, quad, False)

    def f(mask, live):
        key = (mask, live)
        v = memo.get(key)
        if v is not None:
            return v
        if mask == full and not live:
            best = 0
        else:
            best = -1
            for gain, m2, l2, _ in moves(mask, live):
                sub = f(m2, l2)
                if sub >= 0 and sub + gain > best:
                    best = sub + gain
        memo[key] = best
        return best

    return f, moves, memo


def _drop(live, q):
    bit = ~(1 << q)
    return tuple((r, quad, older & bit) for r, quad, older in live if r != q)


def _physical(lattice: LatticeSpec, width: int):
    n = lattice.n_qubits
    adj = _adjacency(lattice)
    full = (1 << n) - 1

    # live: tuple of (qubit, quad) in attach order
    def moves(mask, live):
        nx = sum(1 for _, quad in live if quad == 0)
        counts = (nx, len(live) - nx)
        for q in range(n):
            if mask >> q & 1:
                continue
            for quad in (0, 1):
                if mask == 0 and quad:
                    continue
                if counts[quad] < width:
                    yield 0, mask | 1 << q, live + ((q, quad),), (q, quad, True)
        for i, (q, quad) in enumerate(live):
            gain = 0
            for r, rq in live[i + 1:]:
                if rq != quad:
                    if not adj[q] >> r & 1:
                        break
                    gain += 1
            else:
                yield gain, mask, live[:i] + live[i + 1:], (q, quad, False)

    @lru_cache(maxsize=None)
    def f(mask, live):
        if mask == full and not live:
            return 0
        best = -1
        for gain, m2, l2, _ in moves(mask, live):
            sub = f(m2, l2)
            if sub >= 0 and sub + gain > best:
                best = sub + gain
        return best

    return f, moves, None


def brute_force_max_edges(lattice: LatticeSpec, width_limit: int, model: str = "strict") -> SearchResult:
    """Maximum edges over all single-visit schedules, with a witness.

    The witness is the first optimal schedule in the fixed move order, so
    repeated calls return the same schedule.
    """
    if width_limit not in (1, 2):
        raise ValueError(f"width limit must be 1 or 2, got {width_limit}")
    if lattice.n_qubits > MAX_QUBITS:
        raise ValueError(f"{lattice.m}x{lattice.n} exceeds the {MAX_QUBITS}-qubit exhaustive search budget")
    if model == "strict":
        f, moves, memo = _strict(lattice, width_limit)
    elif model == "physical":
        f, moves, memo = _physical(lattice, width_limit)
    else:
        raise ValueError(f"unknown coupling model {model!r}")
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20 * lattice.n_qubits + 1000))
    try:
        best = f(0, ())
        witness: list[BusOp] = []
        mask, live, left = 0, (), best
        while mask != (1 << lattice.n_qubits) - 1 or live:
            for gain, m2, l2, (q, quad, is_attach) in moves(mask, live):
                sub = f(m2, l2)
                if sub >= 0 and sub + gain == left:
                    quadrature = X if quad == 0 else P
                    witness.append(attach(q, quadrature) if is_attach else detach(q, quadrature))
                    mask, live, left = m2, l2, sub
                    break
            else:  # pragma: no cover - f() guarantees a consistent move exists
                raise RuntimeError("witness reconstruction failed")
    finally:
        sys.setrecursionlimit(old)
    states = len(memo) if memo is not None else f.cache_info().currsize
    return SearchResult(best, witness, states)
