"""State-vector simulation and the quantum subprotocols."""

from src.quantum.fidelity import (
    DecompositionResult,
    FidelityReport,
    decompose_honest,
    fidelity,
    fprime,
    search_fprime,
    trace_distance_pure,
)
from src.quantum.protocols import (
    EPR,
    AngleAssignment,
    AnonymousEntanglementResult,
    VerificationResult,
    anonymous_entanglement,
    estimate_pass_probability,
    exact_pass_probability,
    sample_angles,
    teleport,
    verification_round,
)
from src.quantum.state import (
    Gate2x2,
    StateVector,
    apply_gate,
    apply_local,
    ghz_to_phi_unitary,
    hamming_class,
    make_ghz,
    make_phi,
    measure_computational,
    measure_theta_basis,
    random_state,
    sender_transform,
)

__all__ = [
    "EPR",
    "AngleAssignment",
    "AnonymousEntanglementResult",
    "DecompositionResult",
    "FidelityReport",
    "Gate2x2",
    "StateVector",
    "VerificationResult",
    "anonymous_entanglement",
    "apply_gate",
    "apply_local",
    "decompose_honest",
    "estimate_pass_probability",
    "exact_pass_probability",
    "fidelity",
    "fprime",
    "ghz_to_phi_unitary",
    "hamming_class",
    "make_ghz",
    "make_phi",
    "measure_computational",
    "measure_theta_basis",
    "random_state",
    "sample_angles",
    "search_fprime",
    "sender_transform",
    "teleport",
    "trace_distance_pure",
    "verification_round",
]
