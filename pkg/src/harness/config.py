import json
from collections.abc import Mapping
from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from src.errors import ConfigError

from .models import ExperimentKind, ExperimentSpec

# Flags that take a single value on the command line but a list in the spec.
GRID_FIELDS = ("n", "k", "S", "epsilon")


def valid_kinds() -> str:
    return ", ".join(k.value for k in ExperimentKind)


def load_experiment_file(path: Path) -> dict[str, Any]:
    """Read a JSON or YAML experiment file into a plain mapping."""
    try:
        with open(path) as f:
            if path.suffix.lower() in (".yaml", ".yml"):
                data = yaml.safe_load(f)
            else:
                data = json.load(f)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError("file", f"cannot parse {path}: {exc}") from exc

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("file", f"{path} must contain a mapping at the top level")
    return data


def select_entry(data: Mapping[str, Any], experiment: str | None) -> dict[str, Any]:
    """Pick one experiment out of a file.

    A file is either a single spec or holds an `experiments` mapping keyed by
    kind, as config/experiments.yaml does.
    """
    if "experiments" not in data:
        return dict(data)
    entries = data["experiments"]
    if not isinstance(entries, dict):
        raise ConfigError("experiments", "must be a mapping of experiment kind to settings")
    if experiment is None:
        raise ConfigError("experiment", f"file holds several experiments; choose one of: {', '.join(entries)}")
    if experiment not in entries:
        raise ConfigError("experiment", f"{experiment!r} not in file; available: {', '.join(entries)}")
    entry = dict(entries[experiment] or {})
    entry.setdefault("experiment", experiment)
    return entry


def _as_list(value: Any) -> Any:
    if value is None or isinstance(value, list | tuple):
        return value
    return [value]


def parse_config(data: Mapping[str, Any] | None = None, overrides: Mapping[str, Any] | None = None) -> ExperimentSpec:
    """Merge file values and flag overrides (flags win) into a validated spec.

    Every failure is a ConfigError naming the offending field.
    """
    merged: dict[str, Any] = dict(data or {})
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value

    kind = merged.get("experiment")
    if kind is None:
        raise ConfigError("experiment", f"missing experiment kind; valid kinds: {valid_kinds()}")
    if kind not in {k.value for k in ExperimentKind}:
        raise ConfigError("experiment", f"unknown kind {kind!r}; valid kinds: {valid_kinds()}")

    for key in GRID_FIELDS:
        if key in merged:
            merged[key] = _as_list(merged[key])

    try:
        return ExperimentSpec.model_validate(merged)
    except ValidationError as exc:
        error = exc.errors()[0]
        field = str(error["loc"][0]) if error["loc"] else "grid"
        raise ConfigError(field, error["msg"]) from exc
