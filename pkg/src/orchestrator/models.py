from dataclasses import dataclass, field
from enum import StrEnum
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.adversary.models import MaliciousAgentPolicy, SourceStrategy
from src.models import Result
from src.network.models import Transcript
from src.quantum.protocols import AnonymousEntanglementResult
from src.quantum.state import MAX_QUBITS


class ProtocolConfig(BaseModel):
    """Everything that determines one execution of the distribution protocol."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=2, le=MAX_QUBITS)
    honest_set: tuple[int, ...] | None = None
    S: int = Field(ge=1)
    epsilon: float = Field(default=0.6, gt=0.0, lt=1.0)
    delta: float = Field(default=0.05, gt=0.0, lt=1.0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    source: SourceStrategy = SourceStrategy()
    policies: dict[int, MaliciousAgentPolicy] = Field(default_factory=dict)
    classical_mode: Literal["simulated", "ideal"] = "simulated"
    sender: int | None = None
    receiver: int | None = None
    max_rounds: int = Field(default=1_000_000, ge=1)
    record_transcript: bool = True

    @model_validator(mode="after")
    def _check_agents(self) -> "ProtocolConfig":
        honest = self.honest
        if not honest:
            raise ValueError("honest_set must contain at least one agent")
        if any(not 1 <= a <= self.n for a in honest):
            raise ValueError(f"honest_set entries must be in 1..{self.n}")
        bad = [a for a in self.policies if a in honest or not 1 <= a <= self.n]
        if bad:
            raise ValueError(f"policies given for agents that are not malicious: {bad}")
        if self.sender is not None and self.sender not in honest:
            raise ValueError(f"sender {self.sender} must be an honest agent")
        if self.receiver is not None:
            if not 1 <= self.receiver <= self.n:
                raise ValueError(f"receiver must be in 1..{self.n}")
            if self.receiver == self.sender:
                raise ValueError("receiver must differ from sender")
        return self

    @property
    def honest(self) -> tuple[int, ...]:
        if self.honest_set is None:
            return tuple(range(1, self.n + 1))
        return tuple(sorted(set(self.honest_set)))

    @property
    def malicious(self) -> tuple[int, ...]:
        return tuple(a for a in range(1, self.n + 1) if a not in self.honest)

    @property
    def k(self) -> int:
        return len(self.honest)

    def policy_for(self, agent: int) -> MaliciousAgentPolicy | None:
        """Malicious agents without an explicit policy follow the protocol."""
        if agent not in self.malicious:
            return None
        return self.policies.get(agent, MaliciousAgentPolicy())

    def malicious_policies(self) -> dict[int, MaliciousAgentPolicy]:
        return {a: self.policies.get(a, MaliciousAgentPolicy()) for a in self.malicious}


class Branch(StrEnum):
    USE = "use"
    VERIFY = "verify"


class AbortReason(StrEnum):
    VERIFICATION_FAILED = "verification_failed"
    SENDER_INCONSISTENCY = "sender_inconsistency"
    POLICY = "policy"
    ROUND_LIMIT = "round_limit"


@dataclass(frozen=True)
class RoundOutcome:
    round_index: int
    branch: Branch
    verifier: int | None = None
    passed: bool | None = None
    aborted: bool = False
    abort_reason: AbortReason | None = None
    used_state_fprime: float | None = None
    c_epsilon: bool = False


@dataclass
class ProtocolRun:
    """Outcome of one execution: every round plus the final pair or the abort reason."""

    config: ProtocolConfig
    sender: int
    receiver: int
    receiver_notified: bool
    rounds: list[RoundOutcome]
    result: Result[AnonymousEntanglementResult, AbortReason]
    transcript: Transcript | None = field(default=None, repr=False)

    @property
    def aborted(self) -> bool:
        return self.result.is_failure

    @property
    def c_epsilon(self) -> bool:
        return any(r.c_epsilon for r in self.rounds)

    @property
    def round_count(self) -> int:
        return len(self.rounds)

    @property
    def outcome(self) -> str:
        return "success" if self.result.is_success else str(self.result.error)
