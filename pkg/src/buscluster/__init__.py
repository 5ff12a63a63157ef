"""Cluster-state construction with a reusable qubus."""
from __future__ import annotations

from .budget import NO_LIMIT, NoiseParams, dephasing_prob, max_brick_size, max_brick_size_no_reuse
from .lattice import LatticeSpec
from .multibus import StripSpec, check_conflicts, makespan, schedule_parallel
from .planner import Schedule, plan, validate_schedule
from .qubus import (
    BETA_SQ_CPHASE,
    CondDisplacement,
    HybridState,
    P,
    Quadrature,
    X,
    apply_cdisp,
    apply_sequence,
    init_register,
    verify_cluster_state,
)
from .search import brute_force_max_edges

__version__ = "0.1.0"

__all__ = [
    "BETA_SQ_CPHASE",
    "NO_LIMIT",
    "CondDisplacement",
    "HybridState",
    "LatticeSpec",
    "NoiseParams",
    "P",
    "Quadrature",
    "Schedule",
    "StripSpec",
    "X",
    "apply_cdisp",
    "apply_sequence",
    "brute_force_max_edges",
    "check_conflicts",
    "dephasing_prob",
    "init_register",
    "makespan",
    "max_brick_size",
    "max_brick_size_no_reuse",
    "plan",
    "schedule_parallel",
    "validate_schedule",
    "verify_cluster_state",
]
