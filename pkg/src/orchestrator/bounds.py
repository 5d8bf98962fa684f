"""Closed-form security bounds for the distribution protocol."""

import math
from dataclasses import dataclass

from src.errors import InvalidArgumentError

# log2 values within this distance of an integer are treated as that integer
_LOG_SLACK = 1e-9


@dataclass(frozen=True)
class BoundValue:
    value: float
    vacuous: bool


def _check_unit_interval(name: str, value: float) -> None:
    if not 0.0 < value < 1.0:
        raise InvalidArgumentError(f"{name} must be in (0, 1), got {value}")


def fidelity_threshold(epsilon: float) -> float:
    """sqrt(1 - eps^2): the F' at or below which a used state counts as a C_eps event."""
    _check_unit_interval("epsilon", epsilon)
    return math.sqrt(1.0 - epsilon * epsilon)


def theorem1_bound(n: int, S: int, epsilon: float) -> BoundValue:
    """Pr[C_eps] <= 2^-S * 4n / (1 - sqrt(1 - eps^2)). Values above 1 are flagged vacuous."""
    if n < 1 or S < 1:
        raise InvalidArgumentError(f"need n >= 1 and S >= 1, got n={n}, S={S}")
    value = 2.0**-S * 4 * n / (1.0 - fidelity_threshold(epsilon))
    return BoundValue(value=value, vacuous=value > 1.0)


def required_S(n: int, epsilon: float, delta: float) -> int:
    """Smallest integer S with theorem1_bound(n, S, epsilon) <= delta."""
    _check_unit_interval("delta", delta)
    exponent = math.log2(4 * n / ((1.0 - fidelity_threshold(epsilon)) * delta))
    return max(1, math.ceil(exponent - _LOG_SLACK))


def per_round_cap(n: int, k: int, S: int, fprime: float, l: int) -> float:  # noqa: E741
    """Probability cap for a C_eps event happening at round l."""
    if l < 1:
        raise InvalidArgumentError(f"round index must be >= 1, got {l}")
    if not 1 <= k <= n:
        raise InvalidArgumentError(f"need 1 <= k <= n, got k={k}, n={n}")
    if not 0.0 <= fprime <= 1.0:
        raise InvalidArgumentError(f"fprime must be in [0, 1], got {fprime}")
    keep_going = 1 - 2.0 ** (1 - S) + 2.0 ** (-2 * S)
    survive = 1 - (k - fprime * k) / (4 * n)
    return 2.0**-S * (keep_going * survive) ** (l - 1)
