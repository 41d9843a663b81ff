"""
Test cases for the Lower Bound Tool.
Tests the closed-form Bernoulli estimates against the population oracle and
the separation between agnostic and best-learner risk.
"""

import numpy as np
import pytest

from tools.lowerbound_tool import (
    BernoulliInstance,
    best_learner_curve,
    closed_form_estimates,
    default_p1_grid,
    lowerbound_curve,
    population_huber_oracle,
    r_agn_curve,
    separation,
)
from utils.errors import DomainError


class TestBernoulliInstance:
    """Targets and the Ber(1/2) contaminated distribution."""

    def test_thetas(self):
        assert BernoulliInstance(0.2, "low").theta == pytest.approx(0.4)
        assert BernoulliInstance(0.2, "high").theta == pytest.approx(0.6)

    @pytest.mark.parametrize("choice", ["low", "high"])
    def test_contaminated_distribution_is_fair_coin(self, choice):
        assert BernoulliInstance(0.3, choice).contaminated_mass == pytest.approx(0.5)

    def test_validation(self):
        with pytest.raises(DomainError):
            BernoulliInstance(0.0)
        with pytest.raises(DomainError):
            BernoulliInstance(0.2, "middle")

    def test_target(self):
        assert BernoulliInstance(0.2).target.theta == pytest.approx(0.4)


class TestClosedForms:
    """Population Huber estimates on Ber(p1)."""

    def test_upper_branch(self):
        theta0, quarter, theta2 = closed_form_estimates(0.6)
        assert theta0 == 1.0
        assert quarter == pytest.approx(5 / 6)
        assert theta2 == 0.6

    def test_lower_branch(self):
        theta0, quarter, theta2 = closed_form_estimates(0.4)
        assert theta0 == 0.0
        assert quarter == pytest.approx(1 / 6)
        assert theta2 == 0.4

    def test_endpoints(self):
        assert closed_form_estimates(0.0) == (0.0, 0.0, 0.0)
        assert closed_form_estimates(1.0) == (1.0, 1.0, 1.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            closed_form_estimates(1.1)

    def test_behaviour_at_the_tie(self):
        below = closed_form_estimates(0.5)
        above = closed_form_estimates(0.5 + 1e-12)
        # theta_2 is continuous, theta_0 jumps by 1, theta_1/4 jumps from 1/4 to 3/4
        assert above[2] - below[2] == pytest.approx(0.0, abs=1e-9)
        assert above[0] - below[0] == 1.0
        assert below[1] == pytest.approx(0.25)
        assert above[1] == pytest.approx(0.75, abs=1e-9)


class TestOracle:
    """Grid minimization of the population Huber objective."""

    def test_quadratic_regime_is_mean(self):
        for p1 in (0.0, 0.3, 0.77, 1.0):
            assert population_huber_oracle(p1, 2.0) == pytest.approx(p1, abs=1e-5)

    def test_quarter(self):
        assert population_huber_oracle(0.4, 0.25) == pytest.approx(1 / 6, abs=1e-5)

    def test_median(self):
        assert population_huber_oracle(0.6, 0.0) == 1.0
        assert population_huber_oracle(0.4, 0.0) == 0.0
        assert population_huber_oracle(0.5, 0.0) == 0.5

    def test_small_delta_tends_to_median(self):
        assert population_huber_oracle(0.6, 1e-4) == pytest.approx(1.0, abs=1e-3)

    def test_flat_minimum_midpoint(self):
        assert population_huber_oracle(0.5, 0.25) == pytest.approx(0.5, abs=1e-5)

    def test_domain(self):
        with pytest.raises(DomainError):
            population_huber_oracle(-0.1, 1.0)
        with pytest.raises(DomainError):
            population_huber_oracle(0.5, -1.0)

    def test_agrees_with_closed_forms(self):
        rng = np.random.default_rng(17)
        checked = 0
        while checked < 200:
            p1 = float(rng.uniform(0.0, 1.0))
            index = int(rng.integers(0, 3))
            delta = (0.0, 0.25, 2.0)[index]
            if abs(p1 - 0.5) < 1e-3:
                continue
            assert abs(closed_form_estimates(p1)[index] - population_huber_oracle(p1, delta)) <= 1e-4
            checked += 1


class TestCurves:
    """Agnostic and best-learner curves over p1."""

    def test_grid(self):
        grid = default_p1_grid(1001)
        assert len(grid) == 1001
        assert grid[0] == 0.0 and grid[-1] == 1.0
        with pytest.raises(DomainError):
            default_p1_grid(1)

    def test_curve_columns(self):
        point = lowerbound_curve(BernoulliInstance(0.2), [0.6])[0]
        assert point.theta0 == 1.0
        assert point.r_agn == pytest.approx(0.36)
        assert point.r_best == pytest.approx(0.04)

    def test_minimum_agnostic_risk(self):
        curve = r_agn_curve(BernoulliInstance(0.2, "low"), default_p1_grid(1001))
        assert min(risk for _, risk in curve) == pytest.approx(0.16, abs=1e-3)

    def test_best_learner_at_the_tie(self):
        curve = dict(best_learner_curve(BernoulliInstance(0.2, "low"), [0.5]))
        assert curve[0.5] == pytest.approx(0.01)

    def test_exact_mean_has_zero_risk_for_quadratic_learner(self):
        point = lowerbound_curve(BernoulliInstance(0.2), [0.4])[0]
        assert (point.theta2 - 0.4) ** 2 == pytest.approx(0.0)

    @pytest.mark.parametrize("choice", ["low", "high"])
    def test_separation(self, choice):
        summary = separation(BernoulliInstance(0.2, choice), default_p1_grid(1001))
        assert summary["min_r_agn"] >= 0.15
        assert summary["min_best_learner"] <= 0.011


if __name__ == "__main__":
    # Run basic tests
    test = TestClosedForms()

    print("Testing closed forms...")
    test.test_upper_branch()
    test.test_lower_branch()
    print("✓ Closed-form tests passed")

    print("\n🎉 All lower bound tool tests passed!")
