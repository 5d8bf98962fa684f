"""Binomial confidence intervals for Monte Carlo estimates."""

from dataclasses import dataclass

from scipy.stats import binomtest, norm

from src.errors import InvalidArgumentError

CONFIDENCE_LEVEL = 0.99


@dataclass(frozen=True)
class ProportionEstimate:
    """Observed frequency with a two-sided Wilson interval."""

    successes: int
    trials: int
    estimate: float
    ci_low: float
    ci_high: float

    @property
    def sigma(self) -> float:
        """Binomial standard error of the estimate."""
        p = self.estimate
        return float((p * (1 - p) / self.trials) ** 0.5)


def wilson_interval(successes: int, trials: int, confidence: float = CONFIDENCE_LEVEL) -> ProportionEstimate:
    if trials < 1:
        raise InvalidArgumentError(f"trials must be >= 1, got {trials}")
    if not 0 <= successes <= trials:
        raise InvalidArgumentError(f"successes must be in [0, {trials}], got {successes}")
    ci = binomtest(successes, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return ProportionEstimate(
        successes=successes,
        trials=trials,
        estimate=successes / trials,
        ci_low=float(ci.low),
        ci_high=float(ci.high),
    )


@dataclass(frozen=True)
class MeanEstimate:
    """Sample mean with a normal-approximation interval at the same confidence."""

    mean: float
    ci_low: float
    ci_high: float
    samples: int


def mean_interval(values: list[float], confidence: float = CONFIDENCE_LEVEL) -> MeanEstimate:
    if not values:
        raise InvalidArgumentError("cannot average an empty sample")
    count = len(values)
    mean = sum(values) / count
    if count == 1:
        return MeanEstimate(mean=mean, ci_low=mean, ci_high=mean, samples=1)
    var = sum((v - mean) ** 2 for v in values) / (count - 1)
    half = float(norm.ppf(0.5 + confidence / 2)) * (var / count) ** 0.5
    return MeanEstimate(mean=mean, ci_low=mean - half, ci_high=mean + half, samples=count)
