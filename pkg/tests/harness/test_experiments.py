import pytest

from src.errors import InvalidArgumentError
from src.harness.config import parse_config
from src.harness.experiments import check_grid, experiment_drivers, honest_success_floor, run_experiment
from src.harness.models import ExperimentKind
from tests.helpers import InMemorySpanExporter, metric_points


def _run(**values):
    return run_experiment(parse_config(values))


def _by_metric(result):
    return {row.metric: row for row in result.rows}


def test_every_kind_has_a_driver():
    assert set(experiment_drivers) == set(ExperimentKind)


def test_verification_completeness():
    rows = _by_metric(_run(experiment="verification_completeness", n=[3], trials=200, seed=1))
    assert rows["failure_rate"].estimate == 0.0
    assert rows["failure_rate"].verdict == "pass"
    assert rows["exact_failure_probability"].estimate == pytest.approx(0.0, abs=1e-12)


def test_guess_bound_rows():
    result = _run(experiment="guess_bound", n=[4], k=[2, 3], epsilon=[0.6])
    assert [(r.k, r.metric) for r in result.rows] == [
        (2, "helstrom_guess"),
        (2, "pgm_guess"),
        (2, "pairwise_fidelity_min"),
        (3, "pgm_guess"),
        (3, "pairwise_fidelity_min"),
    ]
    assert result.passed
    pairwise = [r for r in result.rows if r.metric == "pairwise_fidelity_min"]
    assert all(r.verdict == "info" for r in pairwise)
    assert pairwise[0].estimate == pytest.approx(0.36, abs=1e-6)


def test_soundness_never_exceeds_ceiling():
    rows = _by_metric(_run(experiment="soundness", n=[3], k=[2], trials=100, samples=200, seed=4))
    assert rows["exact_pass_minus_ceiling_max"].estimate <= 1e-12
    assert rows["exact_pass_minus_ceiling_max"].verdict == "pass"
    assert rows["pass_minus_ceiling_max"].bound == 0.0


def test_ae_fidelity_rows():
    rows = _by_metric(_run(experiment="ae_fidelity", n=[3], trials=100, fidelities=[0.9], seed=6))
    assert rows["ghz_branch_fidelity_min"].estimate == pytest.approx(1.0, abs=1e-9)
    assert rows["ghz_branch_fidelity_min"].verdict == "pass"
    mean = rows["mean_epr_fidelity@0.9"]
    assert mean.bound == pytest.approx(0.89)
    assert mean.verdict == "pass"


def test_classical_probs_rows():
    rows = _by_metric(_run(experiment="classical_probs", n=[3], S=[2], trials=100, seed=7))
    assert rows["parity_correct_fraction"].estimate == 1.0
    assert rows["notification_other_rate"].estimate == 0.0
    assert rows["notification_other_rate"].verdict == "pass"
    assert rows["or_success_rate"].bound == pytest.approx(0.75)
    assert rows["or_success_rate"].bound_kind == "two_sided"
    assert abs(rows["or_success_rate"].estimate - 0.75) < 0.2


def test_full_run_rows():
    rows = _by_metric(_run(experiment="full_run", n=[3], S=[2], trials=20, seed=9))
    assert rows["success_rate"].bound == pytest.approx(honest_success_floor(3, 2))
    assert rows["epr_fidelity_min"].estimate == pytest.approx(1.0, abs=1e-9)
    assert rows["mean_rounds"].bound == 4.0
    assert all(r.S == 2 and r.k == 3 for r in rows.values())


def test_honest_success_floor():
    assert honest_success_floor(3, 3) == pytest.approx(1 - 8 * 5 / 512)
    assert honest_success_floor(4, 10) > 1 - 1e-8
    assert honest_success_floor(2, 1) == 0.0


def test_pairwise_fidelity_respects_floor():
    rows = _by_metric(_run(experiment="pairwise_fidelity", n=[3], k=[2], epsilon=[0.6], trials=100, seed=4))
    assert rows["pairwise_minus_floor_min"].estimate >= -1e-9
    assert rows["pairwise_minus_floor_min"].verdict == "pass"
    assert 0.0 <= rows["fraction_below_one_minus_eps_sq"].estimate <= 1.0


def test_fprime_oracle_small():
    rows = _by_metric(_run(experiment="fprime_oracle", n=[3], k=[2], trials=3, seed=8))
    assert rows["fprime_search_gap_max"].estimate < 1e-6


def test_theorem1_small_grid():
    result = _run(experiment="theorem1", n=[3], k=[2], S=[4], epsilon=[0.6], trials=100, seed=3)
    rows = _by_metric(result)
    assert rows["pr_c_epsilon"].bound == pytest.approx(2.0**-4 * 12 / 0.2)
    assert rows["pr_c_epsilon"].verdict == "pass"
    assert rows["abort_rate"].verdict == "info"


def test_check_grid_rejections():
    with pytest.raises(InvalidArgumentError, match="at most 2 malicious"):
        check_grid(parse_config({"experiment": "fprime_oracle", "n": [4], "k": [1], "trials": 1}))
    with pytest.raises(InvalidArgumentError, match="k >= 2"):
        check_grid(parse_config({"experiment": "pairwise_fidelity", "n": [3], "k": [1], "trials": 100}))


def test_same_seed_same_rows():
    values = {"experiment": "classical_probs", "n": [3], "S": [1, 2], "trials": 100, "seed": 42}
    assert _run(**values).rows == _run(**values).rows
    other = _run(**{**values, "seed": 43})
    assert other.rows != _run(**values).rows


def test_points_get_spans_and_latency(otel_exporter: InMemorySpanExporter, metric_reader):
    result = _run(experiment="guess_bound", n=[4], k=[2, 3], epsilon=[0.6], seed=5)
    spans = otel_exporter.named("experiment.run")
    assert [s.attributes["point"] for s in spans] == [0, 1]
    assert spans[0].attributes["experiment"] == "guess_bound"
    assert spans[0].attributes["failures"] == 0
    assert len(result.durations) == 2
    assert metric_points(metric_reader, "anonq.experiment.duration")
