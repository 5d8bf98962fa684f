"""Result artifacts: the frozen CSV schema, the JSON summary and the text table.

The CSV and JSON files depend only on (spec, seed). Wall-clock timings go to a
separate `.timings.json` file next to them.
"""

import csv
import json
import logging
from dataclasses import fields
from pathlib import Path
from typing import Any

from rich.table import Table

from src.errors import InvalidArgumentError

from .models import ExperimentResult, ExperimentRow

logger = logging.getLogger(__name__)

CSV_COLUMNS = tuple(f.name for f in fields(ExperimentRow))
SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def write_csv(result: ExperimentResult, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in result.rows:
            record = row.as_record()
            writer.writerow([_cell(record[name]) for name in CSV_COLUMNS])
    return path


def summary_document(result: ExperimentResult) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "experiment": str(result.spec.experiment),
        "seed": result.spec.seed,
        "spec": result.spec.model_dump(mode="json", exclude={"out"}),
        "passed": result.passed,
        "failures": len(result.failures),
        "rows": [row.as_record() for row in result.rows],
    }


def write_json(result: ExperimentResult, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(summary_document(result), f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def write_timings(result: ExperimentResult, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump({"duration_s": list(result.durations)}, f, indent=2)
        f.write("\n")
    return path


def write_artifacts(result: ExperimentResult, out: Path) -> tuple[Path, Path]:
    """Write `<out>.csv`, `<out>.json` and `<out>.timings.json`; `out` is a path stem."""
    base = out.with_suffix("") if out.suffix in (".csv", ".json") else out
    csv_path = write_csv(result, base.with_name(base.name + ".csv"))
    json_path = write_json(result, base.with_name(base.name + ".json"))
    write_timings(result, base.with_name(base.name + ".timings.json"))
    logger.info("wrote %s and %s", csv_path, json_path)
    return csv_path, json_path


def load_rows(path: Path) -> list[ExperimentRow]:
    """Rows back from a JSON summary."""
    with open(path) as f:
        document = json.load(f)
    if "rows" not in document:
        raise InvalidArgumentError(f"{path} is not a result summary (no 'rows')")
    return [ExperimentRow(**record) for record in document["rows"]]


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.6g}"


def summarize(rows: list[ExperimentRow] | tuple[ExperimentRow, ...]) -> tuple[Table, int]:
    """Bound-versus-estimate table and the exit status it implies."""
    if not rows:
        raise InvalidArgumentError("no result rows to summarize")
    table = Table(title=f"{rows[0].experiment}: {len(rows)} rows")
    for name in ("point", "n", "k", "S", "epsilon", "metric", "estimate", "interval", "bound", "verdict"):
        table.add_column(name, justify="left" if name in ("metric", "verdict") else "right")
    for row in rows:
        style = {"pass": "green", "fail": "bold red", "info": "dim"}[row.verdict]
        table.add_row(
            str(row.point),
            str(row.n),
            _cell(row.k),
            _cell(row.S),
            _cell(row.epsilon),
            row.metric,
            _fmt(row.estimate),
            f"[{_fmt(row.ci_low)}, {_fmt(row.ci_high)}]",
            f"{row.bound_kind} {_fmt(row.bound)}" if row.bound_kind != "none" else "",
            f"[{style}]{row.verdict.upper()}[/{style}]",
        )
    status = EXIT_VIOLATION if any(r.verdict == "fail" for r in rows) else EXIT_OK
    return table, status
