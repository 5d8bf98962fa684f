"""The epsilon-anonymous entanglement distribution protocol and its bounds."""

from src.orchestrator.bounds import BoundValue, fidelity_threshold, per_round_cap, required_S, theorem1_bound
from src.orchestrator.engine import (
    DistributionEngine,
    derive_seeds,
    export_run,
    replay_run,
    run_batch,
    run_protocol5,
    teleport_message,
)
from src.orchestrator.models import AbortReason, Branch, ProtocolConfig, ProtocolRun, RoundOutcome

__all__ = [
    "AbortReason",
    "BoundValue",
    "Branch",
    "DistributionEngine",
    "ProtocolConfig",
    "ProtocolRun",
    "RoundOutcome",
    "derive_seeds",
    "export_run",
    "fidelity_threshold",
    "per_round_cap",
    "replay_run",
    "required_S",
    "run_batch",
    "run_protocol5",
    "teleport_message",
    "theorem1_bound",
]
