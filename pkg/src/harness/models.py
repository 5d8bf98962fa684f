import itertools
from dataclasses import asdict, dataclass
from enum import StrEnum
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator

from src.quantum.state import MAX_QUBITS

BOUND_TOLERANCE = 1e-9


class ExperimentKind(StrEnum):
    THEOREM1 = "theorem1"
    GUESS_BOUND = "guess_bound"
    SOUNDNESS = "soundness"
    AE_FIDELITY = "ae_fidelity"
    CLASSICAL_PROBS = "classical_probs"
    FULL_RUN = "full_run"
    PAIRWISE_FIDELITY = "pairwise_fidelity"
    FPRIME_ORACLE = "fprime_oracle"
    VERIFICATION_COMPLETENESS = "verification_completeness"


# Kinds whose verdicts rest on sampled frequencies need enough trials for the interval to mean anything.
SAMPLED_KINDS = frozenset(
    {
        ExperimentKind.THEOREM1,
        ExperimentKind.SOUNDNESS,
        ExperimentKind.AE_FIDELITY,
        ExperimentKind.CLASSICAL_PROBS,
        ExperimentKind.PAIRWISE_FIDELITY,
        ExperimentKind.VERIFICATION_COMPLETENESS,
    }
)
MIN_SAMPLED_TRIALS = 100

# Grid axes each kind actually varies; the others are left blank in the output.
GRID_AXES: dict[ExperimentKind, tuple[str, ...]] = {
    ExperimentKind.THEOREM1: ("n", "k", "S", "epsilon"),
    ExperimentKind.GUESS_BOUND: ("n", "k", "epsilon"),
    ExperimentKind.SOUNDNESS: ("n", "k"),
    ExperimentKind.AE_FIDELITY: ("n",),
    ExperimentKind.CLASSICAL_PROBS: ("n", "S"),
    ExperimentKind.FULL_RUN: ("n", "k", "S", "epsilon"),
    ExperimentKind.PAIRWISE_FIDELITY: ("n", "k", "epsilon"),
    ExperimentKind.FPRIME_ORACLE: ("n", "k"),
    ExperimentKind.VERIFICATION_COMPLETENESS: ("n",),
}

BoundKind = Literal["upper", "lower", "two_sided", "none"]
Verdict = Literal["pass", "fail", "info"]


@dataclass(frozen=True)
class GridPoint:
    index: int
    n: int
    k: int | None = None
    S: int | None = None
    epsilon: float | None = None


class ExperimentSpec(BaseModel):
    """One experiment over a parameter grid.

    `k` defaults to n (no malicious agents); malicious agents are always the
    highest-numbered ones. `samples` is the inner sample count for experiments
    that estimate a quantity per random state (angle samples for soundness).
    """

    model_config = ConfigDict(frozen=True)

    experiment: ExperimentKind
    n: list[int] = Field(min_length=1)
    k: list[int] | None = None
    S: list[int] = Field(default_factory=lambda: [10], min_length=1)
    epsilon: list[float] = Field(default_factory=lambda: [0.6], min_length=1)
    delta: float = Field(default=0.05, gt=0.0, lt=1.0)
    trials: int = Field(default=10_000, ge=1)
    samples: int = Field(default=10_000, ge=1)
    fidelities: list[float] = Field(default_factory=lambda: [0.8, 0.9, 0.95], min_length=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    out: Path | None = None

    @field_validator("n")
    @classmethod
    def _check_n(cls, value: list[int]) -> list[int]:
        for n in value:
            if not 2 <= n <= MAX_QUBITS:
                raise ValueError(f"every n must be in 2..{MAX_QUBITS}, got {n}")
        return value

    @field_validator("k")
    @classmethod
    def _check_k(cls, value: list[int] | None) -> list[int] | None:
        if value is not None and any(k < 1 for k in value):
            raise ValueError(f"every k must be >= 1, got {value}")
        return value

    @field_validator("S")
    @classmethod
    def _check_S(cls, value: list[int]) -> list[int]:
        if any(s < 1 for s in value):
            raise ValueError(f"every S must be >= 1, got {value}")
        return value

    @field_validator("epsilon")
    @classmethod
    def _check_epsilon(cls, value: list[float]) -> list[float]:
        for eps in value:
            if not 0.0 < eps < 1.0:
                raise ValueError(f"every epsilon must be in (0, 1), got {eps}")
        return value

    @field_validator("fidelities")
    @classmethod
    def _check_fidelities(cls, value: list[float]) -> list[float]:
        for f in value:
            if not 0.0 <= f <= 1.0:
                raise ValueError(f"every fidelity must be in [0, 1], got {f}")
        return value

    @field_validator("trials")
    @classmethod
    def _check_trials(cls, value: int, info: ValidationInfo) -> int:
        kind = info.data.get("experiment")
        if kind in SAMPLED_KINDS and value < MIN_SAMPLED_TRIALS:
            raise ValueError(f"trials must be >= {MIN_SAMPLED_TRIALS} for {kind}, got {value}")
        return value

    @model_validator(mode="after")
    def _check_grid(self) -> "ExperimentSpec":
        if self.k is not None and "k" in GRID_AXES[self.experiment] and not self.grid():
            raise ValueError(f"no grid point has k <= n (n={self.n}, k={self.k})")
        return self

    def grid(self) -> list[GridPoint]:
        """Grid points in a fixed order: n, then k, then S, then epsilon."""
        axes = GRID_AXES[self.experiment]
        ks: list[int | None] = list(self.k) if "k" in axes and self.k is not None else [None]
        ss: list[int | None] = list(self.S) if "S" in axes else [None]
        es: list[float | None] = list(self.epsilon) if "epsilon" in axes else [None]
        points: list[GridPoint] = []
        for n, k, s, eps in itertools.product(self.n, ks, ss, es):
            if "k" in axes:
                k = n if k is None else k
                if k > n:
                    continue
            points.append(GridPoint(index=len(points), n=n, k=k, S=s, epsilon=eps))
        return points


def judge(estimate: float, ci_low: float, ci_high: float, bound: float | None, bound_kind: BoundKind) -> Verdict:
    """Interval-based verdict: the point estimate alone never decides."""
    if bound is None or bound_kind == "none":
        return "info"
    if bound_kind == "upper":
        ok = ci_low <= bound + BOUND_TOLERANCE
    elif bound_kind == "lower":
        ok = ci_high >= bound - BOUND_TOLERANCE
    else:
        ok = ci_low - BOUND_TOLERANCE <= bound <= ci_high + BOUND_TOLERANCE
    return "pass" if ok else "fail"


@dataclass(frozen=True)
class Measurement:
    """What a driver reports for one metric at one grid point."""

    metric: str
    estimate: float
    ci_low: float
    ci_high: float
    bound: float | None = None
    bound_kind: BoundKind = "none"
    trials: int = 0

    @classmethod
    def exact(
        cls, metric: str, value: float, bound: float | None, bound_kind: BoundKind, trials: int = 0
    ) -> "Measurement":
        return cls(metric, value, value, value, bound, bound_kind, trials)


@dataclass(frozen=True)
class ExperimentRow:
    experiment: str
    point: int
    n: int
    k: int | None
    S: int | None
    epsilon: float | None
    trials: int
    seed: int
    metric: str
    estimate: float
    ci_low: float
    ci_high: float
    bound: float | None
    bound_kind: BoundKind
    verdict: Verdict

    @classmethod
    def from_measurement(
        cls, kind: ExperimentKind, point: GridPoint, seed: int, m: Measurement
    ) -> "ExperimentRow":
        return cls(
            experiment=str(kind),
            point=point.index,
            n=point.n,
            k=point.k,
            S=point.S,
            epsilon=point.epsilon,
            trials=m.trials,
            seed=seed,
            metric=m.metric,
            estimate=m.estimate,
            ci_low=m.ci_low,
            ci_high=m.ci_high,
            bound=m.bound,
            bound_kind=m.bound_kind,
            verdict=judge(m.estimate, m.ci_low, m.ci_high, m.bound, m.bound_kind),
        )

    def as_record(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class ExperimentResult:
    """Rows ordered by grid index, then by metric emission order.

    `durations` holds wall-clock seconds per grid point; it is kept out of the
    deterministic artifacts.
    """

    spec: ExperimentSpec
    rows: tuple[ExperimentRow, ...]
    durations: tuple[float, ...] = ()

    @property
    def passed(self) -> bool:
        return all(r.verdict != "fail" for r in self.rows)

    @property
    def failures(self) -> list[ExperimentRow]:
        return [r for r in self.rows if r.verdict == "fail"]
