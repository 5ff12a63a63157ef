"""Rectangular cluster targets."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

Coord = tuple[int, int]
Edge = tuple[int, int]


@dataclass(frozen=True)
class LatticeSpec:
    """m x n square lattice; qubit (r, c) has index r * n + c."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"lattice dimensions must be >= 1, got {self.m}x{self.n}")

    @property
    def n_qubits(self) -> int:
        return self.m * self.n

    def index(self, r: int, c: int) -> int:
        if not (0 <= r < self.m and 0 <= c < self.n):
            raise IndexError(f"({r}, {c}) is outside the {self.m}x{self.n} lattice")
        return r * self.n + c

    def coord(self, q: int) -> Coord:
        return divmod(q, self.n)

    def neighbours(self, q: int) -> list[int]:
        r, c = self.coord(q)
        out = []
        for dr, dc in ((-1, 0), (0, -1), (0, 1), (1, 0)):
            rr, cc = r + dr, c + dc
            if 0 <= rr < self.m and 0 <= cc < self.n:
                out.append(rr * self.n + cc)
        return out

    def are_adjacent(self, a: int, b: int) -> bool:
        (r1, c1), (r2, c2) = self.coord(a), self.coord(b)
        return abs(r1 - r2) + abs(c1 - c2) == 1

    @cached_property
    def edges(self) -> frozenset[Edge]:
        out = set()
        for q in range(self.n_qubits):
            for b in self.neighbours(q):
                out.add((min(q, b), max(q, b)))
        return frozenset(out)

    @property
    def n_edges(self) -> int:
        return self.m * (self.n - 1) + self.n * (self.m - 1)

    def colour(self, q: int) -> int:
        """Checkerboard parity; neighbours always differ."""
        r, c = self.coord(q)
        return (r + c) & 1

    def transposed(self) -> "LatticeSpec":
        return LatticeSpec(self.n, self.m)
