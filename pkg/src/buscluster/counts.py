"""Closed-form bus-operation counts for an m x n cluster."""
from __future__ import annotations

from fractions import Fraction


def _check_dims(m: int, n: int, least: int = 1) -> None:
    if m < least or n < least:
        raise ValueError(f"lattice must be at least {least}x{least}, got {m}x{n}")


def ops_no_reuse(m: int, n: int) -> int:
    """One fresh bus per CPHASE gate: 8mn - 4(m+n), i.e. four ops per edge."""
    _check_dims(m, n)
    return 8 * m * n - 4 * (m + n)


def ops_width1_min(m: int, n: int) -> int:
    """Lower bound with at most one qubit per quadrature: 4mn - 8."""
    _check_dims(m, n, 2)
    return 4 * m * n - 8


def ops_width2_min(m: int, n: int) -> int:
    """Lower bound for a width-two path: 3mn - 2(m+n) + 4.

    Only attainable when mn is even; the value is returned regardless.
    """
    _check_dims(m, n, 2)
    return 3 * m * n - 2 * (m + n) + 4


def ops_bricks(m: int, n: int, b: int) -> int | Fraction:
    """(3 + 2/b) mn - 2(m+n) for bricks of length ``b``.

    Returned as an int when integral, otherwise as an exact Fraction.
    """
    _check_dims(m, n)
    if b < 1:
        raise ValueError(f"brick length must be >= 1, got {b}")
    val = (3 + Fraction(2, b)) * m * n - 2 * (m + n)
    return int(val) if val.denominator == 1 else val


def edge_bound_width1(m: int, n: int) -> int:
    """Most edges one pass can make when every qubit joins the bus once."""
    _check_dims(m, n)
    return m * n - 1


def edge_bound_width2(m: int, n: int) -> int:
    """3mn/2 - 2 edges for a single width-two pass (even mn)."""
    _check_dims(m, n, 2)
    if (m * n) % 2:
        raise ValueError(f"width-two edge bound needs even mn, got {m}x{n}")
    return 3 * m * n // 2 - 2


def remaining_edges_width2(m: int, n: int) -> int:
    """Edges left after the width-two pass: mn/2 - (m+n) + 2."""
    _check_dims(m, n, 2)
    if (m * n) % 2:
        raise ValueError(f"odd mn is not covered by the width-two bound, got {m}x{n}")
    return m * n // 2 - (m + n) + 2


def ops_width_a_estimate(m: int, n: int, a: int) -> float:
    """Leading-order count 2mn + 2mn/a for a width-``a`` path (not planned)."""
    if a < 1:
        raise ValueError("path width must be >= 1")
    return 2 * m * n + 2 * m * n / a
