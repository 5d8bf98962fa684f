from dataclasses import dataclass, field

from src.errors import InvalidArgumentError


@dataclass(frozen=True)
class ParityRun:
    """Record of one Parity execution.

    `shares[i-1][j-1]` is the share agent i sent to agent j; `announced` holds the
    public z_j in announcement order. `outputs` is the parity each agent ends up
    with (the skipped announcer adds its own z locally).
    """

    inputs: tuple[int, ...]
    shares: tuple[tuple[int, ...], ...]
    announced: tuple[tuple[int, int], ...]
    outputs: dict[int, int]
    skipped: int | None = None
    malformed: tuple[int, ...] = ()

    @property
    def public_parity(self) -> int:
        return sum(bit for _, bit in self.announced) % 2


@dataclass(frozen=True)
class OrRun:
    inputs: tuple[int, ...]
    S: int
    flips: tuple[tuple[int, ...], ...]
    outputs: dict[int, int]
    repetitions: int

    @property
    def result(self) -> int:
        return max(self.outputs.values())


@dataclass(frozen=True)
class RandomBitDistribution:
    """Distribution D of the sender's RandomBit input."""

    probability_of_zero: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.probability_of_zero <= 1.0:
            raise InvalidArgumentError(f"probability_of_zero must be in [0, 1], got {self.probability_of_zero}")

    @classmethod
    def uniform(cls) -> "RandomBitDistribution":
        return cls(0.5)

    @classmethod
    def all_heads(cls, S: int) -> "RandomBitDistribution":
        """Input 0 only when S fair coins all land heads."""
        if S < 1:
            raise InvalidArgumentError(f"S must be >= 1, got {S}")
        return cls(2.0**-S)


@dataclass(frozen=True)
class RandomBitRun:
    sender_input: int
    output: int
    or_run: OrRun | None = None

    @property
    def consistent(self) -> bool:
        return self.sender_input == self.output


@dataclass(frozen=True)
class RandomAgentRun:
    """Sender-chosen index versus the publicly assembled one, with every bit run.

    `chosen` is 0 when a bit came out different from the sender's input and
    the draw stopped there.
    """

    chosen: int
    bit_runs: tuple[RandomBitRun, ...]
    attempts: int

    @property
    def consistent(self) -> bool:
        return all(run.consistent for run in self.bit_runs)


@dataclass(frozen=True)
class NotificationRun:
    sender: int
    receiver: int
    S: int
    outputs: dict[int, int] = field(default_factory=dict)
