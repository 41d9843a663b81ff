"""
Test cases for the Risk Tool.
Tests squared risk, the learner-agnostic report and the high-probability risk bound.
"""

import math

import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from tools.contamination_tool import Sample
from tools.huber_tool import Estimate, LearnerSet, huber_estimate
from tools.prefilter_tool import PrefilterKind, PrefilterSpec
from tools.risk_tool import RiskReport, evaluate, evaluate_estimates, squared_risk, agnostic_risk_bound
from utils.errors import DomainError


class TestSquaredRisk:
    """(estimate - theta)^2."""

    @pytest.mark.parametrize("estimate, theta, expected", [(0.5, 0.5, 0.0), (1.0, 0.0, 1.0), (-0.2, 0.1, 0.09)])
    def test_examples(self, estimate, theta, expected):
        assert squared_risk(Estimate(estimate), theta) == pytest.approx(expected)


class TestRiskReport:
    """Agnostic, best and gap fields."""

    def test_fixed_estimates(self):
        report = evaluate_estimates({0.01: Estimate(0.1), 1.0: Estimate(-0.2)}, 0.0)
        assert report.agnostic == pytest.approx(0.04)
        assert report.best == pytest.approx(0.01)
        assert report.gap == pytest.approx(0.03)

    def test_single_learner_has_no_gap(self):
        report = RiskReport.from_risks({0.5: 2.0})
        assert report.gap == 0.0
        assert report.agnostic == report.best == 2.0

    def test_empty_report_rejected(self):
        with pytest.raises(DomainError):
            RiskReport.from_risks({})

    def test_unbounded(self):
        report = RiskReport.unbounded(LearnerSet.of([0.01, 1.0]))
        assert math.isinf(report.agnostic)
        assert report.gap == 0.0

    @given(st.dictionaries(st.floats(0, 10), st.floats(0, 100), min_size=1, max_size=8))
    @hyp_settings(max_examples=200, deadline=None)
    def test_invariants(self, risks):
        report = RiskReport.from_risks(risks)
        assert report.agnostic == max(risks.values())
        assert report.best == min(risks.values())
        assert report.gap >= 0
        assert (report.gap == 0) == (len(set(risks.values())) == 1)

    @given(st.lists(st.floats(0, 10), min_size=1, max_size=6), st.randoms())
    @hyp_settings(max_examples=100, deadline=None)
    def test_agnostic_ignores_order_and_duplicates(self, deltas, random):
        sample = Sample.of([-3, -1, 0, 0.5, 2, 8])
        spec = PrefilterSpec(PrefilterKind.ZSCORE, 3.0)
        shuffled = list(deltas) * 2
        random.shuffle(shuffled)
        first = evaluate(sample, spec, LearnerSet.of(deltas), 0.0)
        second = evaluate(sample, spec, LearnerSet.of(shuffled), 0.0)
        assert first.agnostic == second.agnostic


class TestEvaluate:
    """Filter once, run every learner."""

    def test_singleton_learner_matches_direct_risk(self):
        sample = Sample.of([1, 2, 3, 4, 100])
        spec = PrefilterSpec(PrefilterKind.SDO, 3.0)
        report = evaluate(sample, spec, LearnerSet.of([1.0]), 0.0)
        direct = squared_risk(huber_estimate(Sample.of([1, 2, 3, 4]), 1.0), 0.0)
        assert report.agnostic == direct

    def test_per_learner_keys(self):
        sample = Sample.of([0.1, -0.2, 0.3, 5.0])
        report = evaluate(sample, PrefilterSpec(PrefilterKind.QUANTILE, 0.45), LearnerSet.of([0.01, 1.0]), 0.0)
        assert sorted(report.per_learner) == [0.01, 1.0]


class TestAgnosticRiskBound:
    """(eps^2 + log(1/delta0)/n) sigma^2 + max delta^2."""

    def test_value(self):
        bound = agnostic_risk_bound(0.2, 10001, 1.0, 0.05, LearnerSet.of([0.01, 1.0]))
        assert bound == pytest.approx(0.04 + math.log(20) / 10001 + 1.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            agnostic_risk_bound(0.2, 100, 1.0, 1.0, LearnerSet.of([1.0]))
        with pytest.raises(DomainError):
            agnostic_risk_bound(0.2, 0, 1.0, 0.05, LearnerSet.of([1.0]))


if __name__ == "__main__":
    # Run basic tests
    test = TestRiskReport()

    print("Testing risk reports...")
    test.test_fixed_estimates()
    test.test_single_learner_has_no_gap()
    print("✓ Risk report tests passed")

    print("\n🎉 All risk tool tests passed!")
