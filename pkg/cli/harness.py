"""Command-line entry point for the experiment harness.

Exit codes: 0 when every verdict passes, 1 when any bound is violated, 2 on a
usage or configuration error.
"""

import logging
import sys
from pathlib import Path
from typing import Any

# Allow `python cli/harness.py` from the repository root
sys.path.insert(0, str(Path(__file__).parent.parent))

import typer
from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler

from src.errors import AnonQError, ConfigError
from src.harness.config import load_experiment_file, parse_config, select_entry
from src.harness.experiments import run_experiment
from src.harness.models import ExperimentKind
from src.harness.report import EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, load_rows, summarize, write_artifacts
from src.orchestrator import ProtocolConfig, export_run, replay_run, run_protocol5
from src.settings import get_settings
from src.telemetry import setup_telemetry

app = typer.Typer(help="Run and check the anonymous quantum transmission experiments.")
console = Console()


def _configure_logging(verbose: bool) -> None:
    settings = get_settings()
    level = logging.DEBUG if verbose else settings.log_level.upper()
    logging.basicConfig(
        level=level, format="%(message)s", handlers=[RichHandler(console=console, show_path=False)], force=True
    )


def _usage_error(message: str) -> typer.Exit:
    console.print(f"[red]Error:[/red] {message}")
    return typer.Exit(EXIT_USAGE)


@app.callback()
def main(verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging")) -> None:  # noqa: B008
    load_dotenv()
    _configure_logging(verbose)
    setup_telemetry()


@app.command()
def run(
    config: Path | None = typer.Option(None, "--config", "-c", help="JSON or YAML experiment file"),  # noqa: B008
    experiment: str | None = typer.Option(None, "--experiment", "-e", help="Experiment kind"),  # noqa: B008
    n: list[int] | None = typer.Option(None, "--n", help="Number of agents (repeatable)"),  # noqa: B008
    k: list[int] | None = typer.Option(None, "--k", help="Number of honest agents (repeatable)"),  # noqa: B008
    S: list[int] | None = typer.Option(None, "--S", help="Security parameter (repeatable)"),  # noqa: B008
    epsilon: list[float] | None = typer.Option(None, "--epsilon", help="Anonymity slack (repeatable)"),  # noqa: B008
    delta: float | None = typer.Option(None, "--delta", help="Target failure probability"),  # noqa: B008
    trials: int | None = typer.Option(None, "--trials", help="Trials per grid point"),  # noqa: B008
    seed: int | None = typer.Option(None, "--seed", help="Root seed"),  # noqa: B008
    out: Path | None = typer.Option(None, "--out", "-o", help="Output path stem (no suffix)"),  # noqa: B008
    transcript: Path | None = typer.Option(  # noqa: B008
        None, "--transcript", help="Also record one full_run execution to this JSONL file"
    ),
) -> None:
    """Execute an experiment grid and write CSV + JSON results.

    Examples:
        python cli/harness.py run -c config/experiments.yaml -e theorem1 --S 10
        python cli/harness.py run -e guess_bound --n 4 --k 2 --epsilon 0.6
    """
    try:
        data: dict[str, Any] = {}
        if config is not None:
            if not config.exists():
                raise _usage_error(f"config file not found: {config}")
            data = select_entry(load_experiment_file(config), experiment)
        overrides = {
            "experiment": experiment,
            "n": n or None,
            "k": k or None,
            "S": S or None,
            "epsilon": epsilon or None,
            "delta": delta,
            "trials": trials,
            "seed": seed,
            "out": out,
        }
        spec = parse_config(data, overrides)
    except ConfigError as exc:
        raise _usage_error(str(exc)) from None

    if transcript is not None and spec.experiment != ExperimentKind.FULL_RUN:
        raise _usage_error("--transcript only applies to full_run")

    settings = get_settings()
    stem = spec.out or settings.output_dir / f"{spec.experiment}-seed{spec.seed}"
    try:
        result = run_experiment(spec, workers=settings.workers)
        csv_path, json_path = write_artifacts(result, stem)
    except AnonQError as exc:
        raise _usage_error(str(exc)) from None
    except OSError as exc:
        console.print(f"[red]Cannot write results:[/red] {exc}")
        raise typer.Exit(EXIT_USAGE) from None

    if transcript is not None:
        point = spec.grid()[0]
        recorded = run_protocol5(
            ProtocolConfig(
                n=point.n,
                honest_set=tuple(range(1, (point.k or point.n) + 1)),
                S=point.S or 1,
                epsilon=point.epsilon or 0.6,
                delta=spec.delta,
                seed=spec.seed,
            )
        )
        export_run(recorded, transcript)
        console.print(f"Transcript: {transcript} ({recorded.outcome}, {recorded.round_count} rounds)")

    table, status = summarize(result.rows)
    console.print(table)
    console.print(f"Results: {csv_path}, {json_path}")
    raise typer.Exit(status)


@app.command(name="summarize")
def summarize_command(
    results: Path = typer.Argument(..., help="JSON summary written by `run`"),  # noqa: B008
) -> None:
    """Print bound versus estimate for a saved result; exit 1 if any verdict failed."""
    if not results.exists():
        raise _usage_error(f"results file not found: {results}")
    try:
        table, status = summarize(load_rows(results))
    except (AnonQError, ValueError, KeyError, TypeError) as exc:
        raise _usage_error(f"cannot summarize {results}: {exc}") from None
    console.print(table)
    raise typer.Exit(status)


@app.command()
def replay(
    transcript: Path = typer.Argument(..., help="Transcript JSONL recorded with `run --transcript`"),  # noqa: B008
) -> None:
    """Re-execute a recorded run from its seed and compare transcripts."""
    if not transcript.exists():
        raise _usage_error(f"transcript not found: {transcript}")
    try:
        run_, identical = replay_run(transcript)
    except (AnonQError, ValueError) as exc:
        raise _usage_error(f"cannot replay {transcript}: {exc}") from None
    if identical:
        console.print(f"[green]Identical[/green] ({run_.outcome}, {run_.round_count} rounds)")
        raise typer.Exit(EXIT_OK)
    console.print(f"[red]Diverged[/red] from {transcript}")
    raise typer.Exit(EXIT_VIOLATION)


if __name__ == "__main__":
    app()
