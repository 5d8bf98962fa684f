from dataclasses import dataclass
from enum import StrEnum
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.quantum.state import ComplexArray, Gate2x2, H, S, StateVector, X, Z

NAMED_GATES: dict[str, Gate2x2] = {"x": X, "z": Z, "h": H, "s": S, "y": Gate2x2(np.array([[0, -1j], [1j, 0]]))}


class SourceKind(StrEnum):
    HONEST = "honest"
    BOUNDED_FIDELITY = "bounded_fidelity"
    PRODUCT = "product"


class SourceStrategy(BaseModel):
    """What the (possibly malicious) source emits each round."""

    model_config = ConfigDict(frozen=True)

    kind: SourceKind = SourceKind.HONEST
    target_fprime: float = Field(default=1.0, gt=0.0, le=1.0)

    @model_validator(mode="after")
    def _honest_means_ideal(self) -> "SourceStrategy":
        if self.kind == SourceKind.HONEST and self.target_fprime != 1.0:
            raise ValueError("target_fprime only applies to the bounded_fidelity source")
        return self


class MaliciousAgentPolicy(BaseModel):
    """Deviations a malicious agent applies at each protocol hook.

    Every deviation touches only the agent's own qubit or its own messages.
    """

    model_config = ConfigDict(frozen=True)

    flip_or_inputs: bool = False
    lie_in_verification: bool = False
    verifier_always_accepts: bool = False
    force_zero_when_last: bool = False
    pre_ae_gates: tuple[Literal["x", "z", "h", "s", "y"], ...] = ()

    @field_validator("pre_ae_gates", mode="before")
    @classmethod
    def _lowercase_gates(cls, value: object) -> object:
        if isinstance(value, list | tuple):
            return tuple(str(v).lower() for v in value)
        return value

    def gates(self) -> list[Gate2x2]:
        return [NAMED_GATES[name] for name in self.pre_ae_gates]


WORST_CASE_POLICY = MaliciousAgentPolicy(verifier_always_accepts=True)


class HookPoint(StrEnum):
    OR_INPUT = "or_input"
    OR_ANNOUNCE = "or_announce"
    VERIFICATION_REPORT = "verification_report"
    VERIFIER_ACCEPTANCE = "verifier_acceptance"
    PRE_AE_UNITARY = "pre_ae_unitary"


@dataclass(frozen=True)
class PolicyContext:
    """What a malicious agent knows when a hook fires."""

    agent: int
    n: int
    intended_bit: int = 0
    seen: tuple[tuple[int, int], ...] = ()
    honest_verdict: bool = True


@dataclass(frozen=True, eq=False)
class DiscriminationEnsemble:
    """Candidate post-sender states, one per honest agent who could be the sender."""

    senders: tuple[int, ...]
    candidates: tuple[StateVector, ...]
    priors: tuple[float, ...]
    operators: tuple[ComplexArray, ...] | None = None

    @property
    def k(self) -> int:
        return len(self.candidates)
