from pathlib import Path

import pytest

from src.errors import ConfigError
from src.harness.config import load_experiment_file, parse_config, select_entry
from src.harness.experiments import check_grid
from src.harness.models import ExperimentKind

REPO_CONFIG = Path(__file__).parents[2] / "config" / "experiments.yaml"


def test_flags_override_file_values():
    spec = parse_config({"experiment": "theorem1", "n": [4], "S": 8, "trials": 100}, {"S": [10], "seed": None})
    assert spec.S == [10]
    assert spec.n == [4]
    assert spec.seed == 0


def test_scalars_become_single_point_grids():
    spec = parse_config({"experiment": "guess_bound", "n": 4, "k": 2, "epsilon": 0.4})
    assert spec.n == [4]
    assert spec.k == [2]
    assert spec.epsilon == [0.4]


def test_epsilon_out_of_range_names_the_field():
    with pytest.raises(ConfigError) as excinfo:
        parse_config({"experiment": "theorem1", "n": [4], "epsilon": 1.5})
    assert excinfo.value.field == "epsilon"


def test_missing_kind_lists_valid_kinds():
    with pytest.raises(ConfigError, match="theorem1, guess_bound") as excinfo:
        parse_config({"n": [4]})
    assert excinfo.value.field == "experiment"


def test_unknown_kind():
    with pytest.raises(ConfigError, match="unknown kind 'teleport'"):
        parse_config({"experiment": "teleport", "n": [4]})


def test_too_few_trials_for_a_sampled_kind():
    with pytest.raises(ConfigError) as excinfo:
        parse_config({"experiment": "soundness", "n": [4], "trials": 5})
    assert excinfo.value.field == "trials"


@pytest.mark.parametrize(("values", "field"), [({"n": [1]}, "n"), ({"n": [4], "S": [0]}, "S")])
def test_other_field_errors(values, field):
    with pytest.raises(ConfigError) as excinfo:
        parse_config({"experiment": "theorem1", **values})
    assert excinfo.value.field == field


def test_grid_without_valid_point():
    with pytest.raises(ConfigError, match="k <= n") as excinfo:
        parse_config({"experiment": "theorem1", "n": [3], "k": [5]})
    assert excinfo.value.field == "grid"


def test_yaml_and_json_files(tmp_path):
    yaml_file = tmp_path / "exp.yaml"
    yaml_file.write_text("experiment: soundness\nn: [4]\nk: [3]\ntrials: 100\n")
    json_file = tmp_path / "exp.json"
    json_file.write_text('{"experiment": "soundness", "n": [4], "k": [3], "trials": 100}')
    assert parse_config(load_experiment_file(yaml_file)) == parse_config(load_experiment_file(json_file))


def test_unparseable_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError) as excinfo:
        load_experiment_file(bad)
    assert excinfo.value.field == "file"

    listed = tmp_path / "list.yaml"
    listed.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigError, match="mapping"):
        load_experiment_file(listed)


def test_empty_file_is_empty_mapping(tmp_path):
    empty = tmp_path / "empty.yaml"
    empty.write_text("")
    assert load_experiment_file(empty) == {}


def test_select_entry():
    data = {"experiments": {"theorem1": {"n": [3]}, "soundness": None}}
    assert select_entry(data, "theorem1") == {"n": [3], "experiment": "theorem1"}
    assert select_entry(data, "soundness") == {"experiment": "soundness"}
    assert select_entry({"experiment": "theorem1"}, None) == {"experiment": "theorem1"}
    with pytest.raises(ConfigError, match="choose one of"):
        select_entry(data, None)
    with pytest.raises(ConfigError, match="not in file"):
        select_entry(data, "full_run")


def test_shipped_grids_are_all_valid():
    data = load_experiment_file(REPO_CONFIG)
    assert set(data["experiments"]) == {k.value for k in ExperimentKind}
    for kind in ExperimentKind:
        spec = parse_config(select_entry(data, kind.value))
        assert spec.experiment == kind
        assert check_grid(spec)
