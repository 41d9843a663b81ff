"""
Test cases for the Game Tool.
Tests the participation threshold, both payment schemes and the explicit
mean-estimation price.
"""

import math

import pytest
from hypothesis import assume, given, settings as hyp_settings, strategies as st

from tools.game_tool import (
    GameConfig,
    LipschitzGameConfig,
    PaymentScheme,
    as_game,
    defection_margins,
    lemma3_payments,
    lipschitz_payments,
    lipschitz_threshold,
    mean_estimation_price,
    participation_threshold,
    verify_no_defection,
)
from tools.huber_tool import LearnerSet
from tools.sweep_tool import absolute_reduction
from utils.errors import DomainError, InfeasibleGameError


def _feasible_game(draw_reductions, cost_scale, cost_exponent):
    price = math.fsum(draw_reductions) / len(draw_reductions)
    threshold = participation_threshold(cost_scale, cost_exponent, len(draw_reductions), price)
    n = int(math.floor(threshold)) + 1
    return GameConfig(cost_scale, cost_exponent, n, tuple(draw_reductions))


class TestParticipationThreshold:
    """(|L| / (C (|L| - 1)) P)^(1/alpha)."""

    def test_linear_cost(self):
        assert participation_threshold(1.0, 1.0, 2, 20.0) == pytest.approx(40.0)

    def test_quadratic_cost(self):
        assert participation_threshold(1.0, 2.0, 2, 20.0) == pytest.approx(math.sqrt(40.0))

    def test_zero_price(self):
        assert participation_threshold(1.0, 1.0, 3, 0.0) == 0.0

    def test_needs_two_learners(self):
        with pytest.raises(DomainError):
            participation_threshold(1.0, 1.0, 1, 5.0)


class TestGameConfig:
    """Validation of C, alpha, n and the reductions."""

    @pytest.mark.parametrize("kwargs", [
        dict(cost_scale=0.0, cost_exponent=1.0, n=10, u_reductions=(1.0,)),
        dict(cost_scale=1.0, cost_exponent=0.5, n=10, u_reductions=(1.0,)),
        dict(cost_scale=1.0, cost_exponent=1.0, n=0, u_reductions=(1.0,)),
        dict(cost_scale=1.0, cost_exponent=1.0, n=10, u_reductions=()),
        dict(cost_scale=1.0, cost_exponent=1.0, n=10, u_reductions=(-1.0,)),
    ])
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(DomainError):
            GameConfig(**kwargs)

    def test_rejects_unrepresentable_total_cost(self):
        with pytest.raises(DomainError, match="overflows"):
            GameConfig(1.0, 3.0, 10**200, (1.0, 2.0))
        with pytest.raises(DomainError, match="overflows"):
            GameConfig(1.0, 1.0, 10**400, (1.0, 2.0))
        with pytest.raises(DomainError, match="overflows"):
            LipschitzGameConfig(1.0, LearnerSet.of([0.1, 0.5]), 1.0, 3.0, 10**200)

    def test_derived_quantities(self):
        game = GameConfig(2.0, 2.0, 10, (10.0, 30.0))
        assert game.total_cost == 200.0
        assert game.price == 20.0


class TestBudgetBalancedPayments:
    """Budget-balanced payments proportional to C n^alpha - u_l."""

    def test_worked_example(self):
        game = GameConfig(1.0, 1.0, 100, (10.0, 30.0))
        scheme = lemma3_payments(game)
        assert scheme.payments == (56.25, 43.75)
        assert scheme.total == 100.0
        assert verify_no_defection(game, scheme)
        assert defection_margins(game, scheme) == pytest.approx((33.75, 26.25))

    def test_equal_reductions_split_equally(self):
        scheme = lemma3_payments(GameConfig(1.0, 1.0, 90, (5.0, 5.0, 5.0)))
        assert scheme.payments == pytest.approx((30.0, 30.0, 30.0))

    def test_zero_reductions_split_equally(self):
        game = GameConfig(1.0, 1.0, 10, (0.0, 0.0))
        scheme = lemma3_payments(game)
        assert scheme.payments == (5.0, 5.0)
        assert verify_no_defection(game, scheme)

    def test_below_threshold(self):
        with pytest.raises(InfeasibleGameError):
            lemma3_payments(GameConfig(1.0, 1.0, 40, (10.0, 30.0)))

    def test_nonpositive_weight(self):
        # above the threshold on average, but one learner loses more than the whole cost
        with pytest.raises(InfeasibleGameError):
            lemma3_payments(GameConfig(1.0, 1.0, 100, (0.0, 0.0, 150.0)))

    def test_charging_everything_to_one_learner_defects(self):
        game = GameConfig(1.0, 1.0, 100, (10.0, 30.0))
        assert not verify_no_defection(game, PaymentScheme((100.0, 0.0), 100.0))

    def test_payment_count_must_match(self):
        with pytest.raises(DomainError):
            verify_no_defection(GameConfig(1.0, 1.0, 100, (10.0, 30.0)), PaymentScheme((100.0,), 100.0))

    @given(
        st.lists(st.floats(0.0, 1000.0), min_size=2, max_size=10),
        st.floats(0.01, 100.0),
        st.floats(1.0, 3.0),
    )
    @hyp_settings(max_examples=1000, deadline=None)
    def test_soundness(self, reductions, cost_scale, cost_exponent):
        game = _feasible_game(reductions, cost_scale, cost_exponent)
        assume(all(game.total_cost > u for u in game.u_reductions))
        scheme = lemma3_payments(game)
        assert math.fsum(scheme.payments) == pytest.approx(game.total_cost, rel=1e-9)
        assert all(p >= 0 for p in scheme.payments)
        assert verify_no_defection(game, scheme)

    def test_scale_covariance(self):
        game = GameConfig(1.0, 1.0, 100, (10.0, 30.0))
        scaled = GameConfig(4.0, 1.0, 100, (40.0, 120.0))
        assert lemma3_payments(scaled).payments == tuple(4.0 * p for p in lemma3_payments(game).payments)


class TestLipschitzGame:
    """Surrogate-risk game with L-Lipschitz utility."""

    def config(self, **overrides):
        fields = dict(lipschitz=1.0, deltas=LearnerSet.of([0.1, 0.5]), cost_scale=1.0, cost_exponent=1.0, n=10)
        fields.update(overrides)
        return LipschitzGameConfig(**fields)

    def test_worked_example(self):
        config = self.config()
        scheme = lipschitz_payments(config)
        assert scheme.payments[0] == pytest.approx(10 * 9.76 / 19.76, abs=1e-6)
        assert scheme.payments[1] == pytest.approx(10 * 10 / 19.76, abs=1e-6)
        assert scheme.payments[0] == pytest.approx(4.9393, abs=1e-4)
        assert scheme.payments[1] == pytest.approx(5.0607, abs=1e-4)

    def test_threshold(self):
        assert lipschitz_threshold(self.config()) == pytest.approx(0.48)

    def test_threshold_is_inclusive(self):
        # 48 * 2 / 1 * (0.25 - 0) = 24 exactly
        config = self.config(lipschitz=48.0, deltas=LearnerSet.of([0.0, 0.5]), n=24)
        assert lipschitz_threshold(config) == 24.0
        assert lipschitz_payments(config).payments == (8.0, 16.0)

    def test_below_threshold(self):
        with pytest.raises(InfeasibleGameError):
            lipschitz_payments(self.config(lipschitz=100.0, n=10))

    def test_equal_deltas_split_equally(self):
        scheme = lipschitz_payments(self.config(deltas=LearnerSet.of([0.3, 0.3, 0.3]), n=9))
        assert scheme.payments == pytest.approx((3.0, 3.0, 3.0))

    def test_rejects_invalid(self):
        with pytest.raises(DomainError):
            self.config(lipschitz=0.0)
        with pytest.raises(DomainError):
            self.config(delta0=1.5)

    @given(
        st.lists(st.floats(0.0, 3.0), min_size=2, max_size=8),
        st.floats(0.01, 10.0),
        st.floats(0.01, 10.0),
        st.floats(1.0, 3.0),
    )
    @hyp_settings(max_examples=1000, deadline=None)
    def test_payments_respect_bound(self, deltas, lipschitz, cost_scale, cost_exponent):
        sizing = LipschitzGameConfig(lipschitz, LearnerSet.of(deltas), cost_scale, cost_exponent, 1)
        n = max(1, int(math.ceil(lipschitz_threshold(sizing))) + 1)
        config = LipschitzGameConfig(lipschitz, LearnerSet.of(deltas), cost_scale, cost_exponent, n)
        scheme = lipschitz_payments(config)
        total = config.total_cost
        top = config.deltas.max_delta
        assert math.fsum(scheme.payments) == pytest.approx(total, rel=1e-9)
        for delta, payment in zip(config.deltas, scheme.payments):
            assert payment <= total - lipschitz * (top**2 - delta**2) + 1e-9 * max(1.0, total)
        assert verify_no_defection(as_game(config), scheme)


class TestMeanEstimationPrice:
    """Sum of reductions between surrogate risks."""

    def test_linear_reduction(self):
        config = LipschitzGameConfig(1.0, LearnerSet.of([0.1, 0.5]), 1.0, 1.0, 10, epsilon=0.2)
        assert mean_estimation_price(config, absolute_reduction) == pytest.approx(0.24)
        assert mean_estimation_price(config, absolute_reduction, normalized=True) == pytest.approx(0.12)

    def test_equal_deltas(self):
        config = LipschitzGameConfig(1.0, LearnerSet.of([0.2, 0.2]), 1.0, 1.0, 10)
        assert mean_estimation_price(config, absolute_reduction) == 0.0

    def test_surrogate_risk(self):
        config = LipschitzGameConfig(1.0, LearnerSet.of([0.5]), 1.0, 1.0, 10001, epsilon=0.2, sigma=2.0)
        expected = (0.04 + math.log(20) / 10001) * 4.0 + 0.25
        assert config.surrogate_risk(0.5) == pytest.approx(expected)


if __name__ == "__main__":
    # Run basic tests
    test = TestBudgetBalancedPayments()

    print("Testing budget-balanced payments...")
    test.test_worked_example()
    test.test_equal_reductions_split_equally()
    print("✓ Payment tests passed")

    print("\n🎉 All game tool tests passed!")
