import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import InvalidArgumentError
from src.harness.stats import mean_interval, wilson_interval


def test_all_successes_reach_one():
    est = wilson_interval(10_000, 10_000)
    assert est.estimate == 1.0
    assert est.ci_high == pytest.approx(1.0)
    assert 0.999 < est.ci_low < 1.0


def test_no_successes():
    est = wilson_interval(0, 100)
    assert est.ci_low == pytest.approx(0.0, abs=1e-12)
    assert est.ci_high > 0.0
    assert est.sigma == 0.0


@settings(max_examples=100, deadline=None)
@given(trials=st.integers(1, 5000), data=st.data())
def test_wilson_contains_estimate(trials, data):
    successes = data.draw(st.integers(0, trials))
    est = wilson_interval(successes, trials)
    assert est.ci_low - 1e-12 <= est.estimate <= est.ci_high + 1e-12


def test_wilson_validation():
    with pytest.raises(InvalidArgumentError, match="trials"):
        wilson_interval(0, 0)
    with pytest.raises(InvalidArgumentError, match="successes"):
        wilson_interval(11, 10)


def test_mean_interval():
    est = mean_interval([1.0, 2.0, 3.0])
    assert est.mean == pytest.approx(2.0)
    assert est.ci_low < 2.0 < est.ci_high
    single = mean_interval([0.5])
    assert (single.ci_low, single.ci_high) == (0.5, 0.5)
    with pytest.raises(InvalidArgumentError, match="empty"):
        mean_interval([])
