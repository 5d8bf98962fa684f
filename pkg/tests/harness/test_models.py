import pytest
from pydantic import ValidationError

from src.harness.models import ExperimentKind, ExperimentResult, ExperimentRow, ExperimentSpec, Measurement, judge


def test_grid_order_and_skipped_points():
    spec = ExperimentSpec(experiment=ExperimentKind.THEOREM1, n=[3, 4], k=[2, 4], S=[8, 10], trials=100)
    points = spec.grid()
    assert [(p.n, p.k, p.S) for p in points] == [(3, 2, 8), (3, 2, 10), (4, 2, 8), (4, 2, 10), (4, 4, 8), (4, 4, 10)]
    assert [p.index for p in points] == list(range(6))
    assert {p.epsilon for p in points} == {0.6}


def test_k_defaults_to_n():
    points = ExperimentSpec(experiment=ExperimentKind.SOUNDNESS, n=[3, 5], trials=100).grid()
    assert [(p.n, p.k) for p in points] == [(3, 3), (5, 5)]
    assert all(p.S is None and p.epsilon is None for p in points)


def test_unused_axes_are_blank():
    (point,) = ExperimentSpec(experiment=ExperimentKind.AE_FIDELITY, n=[4], k=[2], S=[3], trials=100).grid()
    assert (point.k, point.S, point.epsilon) == (None, None, None)


def test_spec_is_frozen():
    spec = ExperimentSpec(experiment=ExperimentKind.GUESS_BOUND, n=[4])
    with pytest.raises(ValidationError):
        spec.seed = 3  # type: ignore[misc]


@pytest.mark.parametrize(
    ("estimate", "low", "high", "bound", "kind", "verdict"),
    [
        (0.01, 0.0, 0.02, 0.078, "upper", "pass"),
        (0.1, 0.09, 0.11, 0.078, "upper", "fail"),
        (0.99, 0.98, 1.0, 1.0, "lower", "pass"),
        (0.9, 0.85, 0.95, 1.0, "lower", "fail"),
        (0.75, 0.70, 0.80, 0.75, "two_sided", "pass"),
        (0.75, 0.70, 0.80, 0.9, "two_sided", "fail"),
        (0.5, 0.4, 0.6, None, "upper", "info"),
        (0.5, 0.4, 0.6, 0.1, "none", "info"),
    ],
)
def test_judge(estimate, low, high, bound, kind, verdict):
    assert judge(estimate, low, high, bound, kind) == verdict


def test_judge_tolerance():
    assert judge(0.0, 1e-12, 1e-12, 0.0, "upper") == "pass"


def test_rows_and_result():
    spec = ExperimentSpec(experiment=ExperimentKind.GUESS_BOUND, n=[4], k=[2])
    (point,) = spec.grid()
    good = ExperimentRow.from_measurement(spec.experiment, point, 9, Measurement.exact("pgm_guess", 0.7, 1.1, "upper"))
    bad = ExperimentRow.from_measurement(spec.experiment, point, 9, Measurement.exact("pgm_guess", 1.2, 1.1, "upper"))
    assert good.verdict == "pass"
    assert good.as_record()["metric"] == "pgm_guess"
    assert ExperimentResult(spec, (good,)).passed
    result = ExperimentResult(spec, (good, bad))
    assert not result.passed
    assert result.failures == [bad]
