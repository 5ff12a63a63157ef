"""
Dephasing budget for bus reuse.

The combined phase-flip probability after ``N`` bus operations and ``C``
CPHASE gates on one bus is

    eps = (1 - exp(-N * gamma_tau - 4 * C * eta * beta_sq)) / 2

A Lego brick of length ``b`` costs N = 6b + 4 operations and C = 4b gates on
a single bus.  Building the same brick with one bus per gate costs N = 16b
operations, and each bus carries a single gate, so its loss term stays at
4 * eta * beta_sq whatever ``b`` is.  That asymmetry is kept on purpose.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .qubus import BETA_SQ_CPHASE

NO_LIMIT = math.inf
"""Returned by the brick-size solvers when the noise parameters impose no bound."""


@dataclass(frozen=True)
class NoiseParams:
    gamma_tau: float = 0.0
    eta: float = 0.0
    beta_sq: float = BETA_SQ_CPHASE
    epsilon: float = 0.01

    def __post_init__(self):
        for name in ("gamma_tau", "eta", "beta_sq", "epsilon"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if self.gamma_tau < 0 or self.eta < 0:
            raise ValueError("gamma_tau and eta must be non-negative")
        if self.beta_sq <= 0:
            raise ValueError(f"beta_sq must be positive, got {self.beta_sq!r}")
        if not 0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in (0, 1/2), got {self.epsilon!r}")

    @property
    def loss_per_gate(self) -> float:
        """eta * beta^2."""
        return self.eta * self.beta_sq

    @property
    def exponent_budget(self) -> float:
        """Largest total exponent with eps <= epsilon: -ln(1 - 2 epsilon)."""
        return -math.log1p(-2 * self.epsilon)


def dephasing_exponent(params: NoiseParams, n_ops: float, n_gates: float) -> float:
    return n_ops * params.gamma_tau + 4 * n_gates * params.eta * params.beta_sq


def dephasing_prob(params: NoiseParams, n_ops: float, n_gates: float) -> float:
    if n_ops < 0 or n_gates < 0:
        raise ValueError("operation and gate counts must be non-negative")
    return -0.5 * math.expm1(-dephasing_exponent(params, n_ops, n_gates))


def brick_dephasing(params: NoiseParams, b: int) -> float:
    """Error of one reused-bus brick: 6b+4 operations, 4b gates."""
    return dephasing_prob(params, 6 * b + 4, 4 * b)


def brick_dephasing_no_reuse(params: NoiseParams, b: int) -> float:
    """Error of the same brick with one bus per gate: 16b operations, one gate per bus."""
    return dephasing_prob(params, 16 * b, 1)


def _largest(fits, guess: float) -> int:
    # the float guess can sit one off at the boundary; settle it exactly
    b = max(int(math.floor(guess)), 0)
    while b > 0 and not fits(b):
        b -= 1
    while fits(b + 1):
        b += 1
    return b


def brick_size_continuous(params: NoiseParams) -> float:
    """Real-valued solution of the reused-bus threshold."""
    rate = 6 * params.gamma_tau + 16 * params.loss_per_gate
    if rate == 0:
        return NO_LIMIT
    return (params.exponent_budget - 4 * params.gamma_tau) / rate


def brick_size_no_reuse_continuous(params: NoiseParams) -> float:
    if params.gamma_tau == 0:
        return NO_LIMIT if 4 * params.loss_per_gate <= params.exponent_budget else -math.inf
    return (params.exponent_budget - 4 * params.loss_per_gate) / (16 * params.gamma_tau)


def max_brick_size(params: NoiseParams) -> int | float:
    """Largest b whose brick stays within epsilon; 0 if even b = 0 fails."""
    guess = brick_size_continuous(params)
    if guess == NO_LIMIT:
        return NO_LIMIT
    eps = params.epsilon
    return _largest(lambda b: brick_dephasing(params, b) <= eps, guess)


def max_brick_size_no_reuse(params: NoiseParams) -> int | float:
    guess = brick_size_no_reuse_continuous(params)
    if guess == NO_LIMIT:
        return NO_LIMIT
    eps = params.epsilon
    if guess < 0:
        return 0
    return _largest(lambda b: brick_dephasing_no_reuse(params, b) <= eps, guess)


def brick_qubits(b: int) -> int:
    return 3 * b + 2


def brick_gates(b: int) -> int:
    return 4 * b


@dataclass
class ReuseAdvantage:
    lego_better: bool
    """Exact per-gate rate comparison: 6 gt + 16 eta beta^2 < 16 gt."""
    rule_of_thumb: bool
    """eta beta^2 <= gamma_tau / 2."""
    margin: float
    """Relative per-brick-length exponent saved by reuse, (16gt - rate_lego) / (16gt)."""
    b_lego: float
    b_no_reuse: float
    in_margin_band: bool
    """True where integer brick sizes may disagree with the rate comparison."""

    @property
    def criteria_agree(self) -> bool:
        return self.lego_better == self.rule_of_thumb


def reuse_advantage(params: NoiseParams) -> ReuseAdvantage:
    gt, loss = params.gamma_tau, params.loss_per_gate
    rate_lego = 6 * gt + 16 * loss
    rate_single = 16 * gt
    lego_better = rate_lego < rate_single
    margin = (rate_single - rate_lego) / rate_single if rate_single > 0 else -math.inf
    bl = brick_size_continuous(params)
    bn = brick_size_no_reuse_continuous(params)
    if math.isinf(bl) or math.isinf(bn):
        band = False
    else:
        # floors can tie when the real solutions are within one brick or both
        # clamp to zero, and the b-independent terms can reverse the order
        band = abs(bl - bn) < 1 or max(bl, bn) < 1 or (bl > bn) != lego_better
    return ReuseAdvantage(lego_better, loss <= gt / 2, margin, bl, bn, band)


def budget_report(params: NoiseParams) -> dict:
    """Summary used by the command line: brick sizes and their cost.

    Unbounded sizes are reported as the string ``"no-limit"``.
    """
    out: dict = {}
    for suffix, b, eps, gates_at_zero in (
        ("", max_brick_size(params), brick_dephasing, 0),
        ("_no_reuse", max_brick_size_no_reuse(params), brick_dephasing_no_reuse, 1),
    ):
        unbounded = b == NO_LIMIT
        if not suffix:
            out["b_lego"] = "no-limit" if unbounded else b
        else:
            out["b_no_reuse"] = "no-limit" if unbounded else b
        # with no limit the error does not grow with b; report its b-independent part
        out[f"epsilon_at_b{suffix}"] = dephasing_prob(params, 0, gates_at_zero) if unbounded else eps(params, b)
        out[f"qubits_connected{suffix}"] = "no-limit" if unbounded else brick_qubits(b)
        out[f"gates{suffix}"] = "no-limit" if unbounded else brick_gates(b)
    return out
