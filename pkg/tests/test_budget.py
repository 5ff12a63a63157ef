from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from buscluster.budget import (
    NO_LIMIT,
    NoiseParams,
    brick_dephasing,
    brick_dephasing_no_reuse,
    budget_report,
    dephasing_prob,
    max_brick_size,
    max_brick_size_no_reuse,
    reuse_advantage,
)

BETA_SQ = math.pi / 8
REF = NoiseParams(gamma_tau=5e-4, eta=1e-4, beta_sq=BETA_SQ, epsilon=0.01)


def eps_oracle(gt, eta, b2, n, c):
    return 0.5 * (1 - math.exp(-n * gt - 4 * c * eta * b2))


class TestDephasingProb:
    def test_zero(self):
        assert dephasing_prob(REF, 0, 0) == 0.0

    def test_reference_point(self):
        # 34 ops and 20 gates: 0.017 + 0.00314159...
        assert dephasing_prob(REF, 34, 20) == pytest.approx(eps_oracle(5e-4, 1e-4, BETA_SQ, 34, 20), abs=1e-15)
        assert dephasing_prob(REF, 34, 20) == pytest.approx(0.00997005289958, abs=1e-13)
        assert dephasing_prob(REF, 34, 20) <= 0.01

    def test_rejects_negative_counts(self):
        with pytest.raises(ValueError):
            dephasing_prob(REF, -1, 0)

    def test_doubling_ops(self):
        assert dephasing_prob(REF, 68, 20) > dephasing_prob(REF, 34, 20)

    @given(
        st.floats(1e-6, 1e-2), st.floats(1e-6, 1e-2), st.floats(0.05, 2.0),
        st.integers(1, 500), st.integers(1, 500),
    )
    def test_strictly_increasing(self, gt, eta, b2, n, c):
        p = NoiseParams(gt, eta, b2)
        base = dephasing_prob(p, n, c)
        assert 0 <= base < 0.5
        assert dephasing_prob(p, n + 1, c) > base
        assert dephasing_prob(p, n, c + 1) > base
        assert dephasing_prob(NoiseParams(gt * 1.5, eta, b2), n, c) > base
        assert dephasing_prob(NoiseParams(gt, eta * 1.5, b2), n, c) > base
        assert dephasing_prob(NoiseParams(gt, eta, b2 * 1.5), n, c) > base


class TestMaxBrickSize:
    def test_reference(self):
        b = max_brick_size(REF)
        assert b == 5
        assert 3 * b + 2 == 17 and 4 * b == 20

    def test_boundary(self):
        assert brick_dephasing(REF, 5) == pytest.approx(0.009970052899580301, abs=1e-15)
        # b = 6: exponent 40 * 5e-4 + 96 * 1e-4 * pi / 8
        expo6 = 40 * 5e-4 + 96 * 1e-4 * BETA_SQ
        assert expo6 == pytest.approx(0.02377, abs=1e-5)
        assert brick_dephasing(REF, 6) == pytest.approx(0.5 * (1 - math.exp(-expo6)), abs=1e-15)
        assert brick_dephasing(REF, 6) > 0.01

    def test_vanishing_noise(self):
        assert max_brick_size(NoiseParams(1e-12, 1e-12, BETA_SQ, 0.01)) >= 10**6

    def test_no_limit(self):
        assert max_brick_size(NoiseParams(0.0, 0.0)) == NO_LIMIT

    def test_zero_when_nothing_fits(self):
        p = NoiseParams(gamma_tau=0.01, eta=0.0, epsilon=0.01)
        assert max_brick_size(p) == 0
        assert brick_dephasing(p, 1) > 0.01

    def test_threshold_on_random_draws(self, rng):
        for _ in range(1000):
            gt, loss = 10 ** rng.uniform(-6, -2, size=2)
            eps = rng.uniform(1e-3, 0.2)
            p = NoiseParams(gt, loss / BETA_SQ, BETA_SQ, eps)
            b = max_brick_size(p)
            if b > 0:
                assert brick_dephasing(p, b) <= eps
            assert brick_dephasing(p, b + 1) > eps

    @given(st.floats(1e-6, 1e-2), st.floats(1e-6, 1e-2), st.floats(1e-3, 0.3))
    def test_threshold_property(self, gt, eta, eps):
        p = NoiseParams(gt, eta, BETA_SQ, eps)
        b = max_brick_size(p)
        assert brick_dephasing(p, b + 1) > eps
        if b > 0:
            assert brick_dephasing(p, b) <= eps


class TestNoReuse:
    def test_reference(self):
        b = max_brick_size_no_reuse(REF)
        assert b == 2
        assert 3 * b + 2 == 8 and 4 * b == 8
        assert brick_dephasing_no_reuse(REF, 2) <= 0.01 < brick_dephasing_no_reuse(REF, 3)

    def test_eta_independent(self):
        assert max_brick_size_no_reuse(NoiseParams(5e-4, 0.0)) == max_brick_size_no_reuse(REF) == 2

    def test_loss_term_does_not_grow(self):
        # one gate per bus: the loss term is the same for every b
        p = NoiseParams(0.0, 1e-3)
        assert brick_dephasing_no_reuse(p, 1) == brick_dephasing_no_reuse(p, 50)

    def test_no_limit(self):
        assert max_brick_size_no_reuse(NoiseParams(0.0, 0.0)) == NO_LIMIT
        assert max_brick_size_no_reuse(NoiseParams(0.0, 1e-4)) == NO_LIMIT

    def test_loss_alone_exceeds(self):
        assert max_brick_size_no_reuse(NoiseParams(0.0, 0.1)) == 0

    @given(st.floats(1e-6, 1e-2), st.floats(0, 1e-3), st.floats(1e-3, 0.3))
    def test_threshold_property(self, gt, eta, eps):
        p = NoiseParams(gt, eta, BETA_SQ, eps)
        b = max_brick_size_no_reuse(p)
        assert brick_dephasing_no_reuse(p, b + 1) > eps
        if b > 0:
            assert brick_dephasing_no_reuse(p, b) <= eps


class TestReuseAdvantage:
    def test_reference_regime(self):
        adv = reuse_advantage(REF)
        assert REF.loss_per_gate == pytest.approx(3.927e-5, rel=1e-3)
        assert adv.lego_better and adv.rule_of_thumb and adv.criteria_agree
        assert adv.margin == pytest.approx((16 * 5e-4 - 6 * 5e-4 - 16 * REF.loss_per_gate) / (16 * 5e-4))

    def test_loss_equals_dephasing(self):
        gt = 1e-3
        adv = reuse_advantage(NoiseParams(gt, gt / BETA_SQ, BETA_SQ))
        assert not adv.lego_better and not adv.rule_of_thumb

    def test_no_dephasing(self):
        adv = reuse_advantage(NoiseParams(0.0, 1e-4))
        assert not adv.lego_better
        assert adv.margin == -math.inf

    def test_exact_crossover(self):
        # 6 gt + 16 L < 16 gt  iff  L < 10 gt / 16
        gt = 1e-3
        below = NoiseParams(gt, 0.6 * gt / BETA_SQ, BETA_SQ)
        above = NoiseParams(gt, 0.65 * gt / BETA_SQ, BETA_SQ)
        assert reuse_advantage(below).lego_better
        assert not reuse_advantage(above).lego_better
        # the rule of thumb is stricter than the rate comparison here
        assert not reuse_advantage(below).rule_of_thumb

    def test_agrees_outside_band(self, rng):
        disagree = 0
        for _ in range(1000):
            gt, loss = 10 ** rng.uniform(-6, -2, size=2)
            p = NoiseParams(gt, loss / BETA_SQ, BETA_SQ, 0.01)
            adv = reuse_advantage(p)
            direct = 3 * max_brick_size(p) + 2 > 3 * max_brick_size_no_reuse(p) + 2
            if direct != adv.lego_better and not adv.in_margin_band:
                disagree += 1
        assert disagree == 0


class TestParams:
    @pytest.mark.parametrize(
        "kw",
        [
            {"gamma_tau": -1e-3},
            {"eta": -1.0},
            {"beta_sq": 0.0},
            {"epsilon": 0.0},
            {"epsilon": 0.5},
            {"gamma_tau": math.nan},
            {"eta": math.inf},
        ],
    )
    def test_rejects(self, kw):
        with pytest.raises(ValueError):
            NoiseParams(**kw)

    def test_exponent_budget(self):
        assert NoiseParams(epsilon=0.01).exponent_budget == pytest.approx(-np.log(0.98))


class TestReport:
    def test_reference(self):
        rep = budget_report(REF)
        assert rep["b_lego"] == 5 and rep["qubits_connected"] == 17 and rep["gates"] == 20
        assert rep["b_no_reuse"] == 2 and rep["qubits_connected_no_reuse"] == 8 and rep["gates_no_reuse"] == 8
        assert rep["qubits_connected"] >= 2 * rep["qubits_connected_no_reuse"]
        assert rep["epsilon_at_b"] <= 0.01 and rep["epsilon_at_b_no_reuse"] <= 0.01

    def test_no_limit(self):
        rep = budget_report(NoiseParams(0.0, 0.0))
        assert rep["b_lego"] == rep["b_no_reuse"] == "no-limit"
        assert rep["epsilon_at_b"] == 0.0
