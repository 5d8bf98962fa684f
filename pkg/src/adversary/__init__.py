"""Malicious sources, malicious agent policies and sender-identification attacks."""

from src.adversary.discrimination import (
    build_sender_ensemble,
    gram_guess_prob,
    helstrom_guess_prob,
    pairwise_fidelities,
    pgm_guess_prob,
    pgm_operators,
    rigorous_pairwise_floor,
)
from src.adversary.models import (
    WORST_CASE_POLICY,
    DiscriminationEnsemble,
    HookPoint,
    MaliciousAgentPolicy,
    PolicyContext,
    SourceKind,
    SourceStrategy,
)
from src.adversary.policies import apply_malicious_policy, classical_hooks, verification_hooks, verifier_verdict
from src.adversary.source import Source, craft_state_with_fprime

__all__ = [
    "WORST_CASE_POLICY",
    "DiscriminationEnsemble",
    "HookPoint",
    "MaliciousAgentPolicy",
    "PolicyContext",
    "Source",
    "SourceKind",
    "SourceStrategy",
    "apply_malicious_policy",
    "build_sender_ensemble",
    "classical_hooks",
    "craft_state_with_fprime",
    "gram_guess_prob",
    "helstrom_guess_prob",
    "pairwise_fidelities",
    "pgm_guess_prob",
    "pgm_operators",
    "rigorous_pairwise_floor",
    "verification_hooks",
    "verifier_verdict",
]
