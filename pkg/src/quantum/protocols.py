"""Quantum subprotocols: GHZ verification, anonymous entanglement and teleportation.

Two frames are in use. The source hands out states in the Phi_0 frame, where
the ideal state is Phi_0^n and F' is defined. Anonymous entanglement runs in
the GHZ frame. `to_ghz_frame` and `to_verification_frame` move between them
with the per-qubit unitary S.H.
"""

import itertools
import logging
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from src.errors import InvalidArgumentError
from src.harness.stats import ProportionEstimate, wilson_interval

from .fidelity import fidelity
from .state import (
    IDENTITY,
    H,
    StateVector,
    X,
    Z,
    apply_gate,
    apply_local,
    ghz_to_phi_unitary,
    make_ghz,
    measure_computational,
    measure_theta_basis,
)

logger = logging.getLogger(__name__)

ANGLE_TOLERANCE = 1e-9

# Maps (agent, honestly measured bit) to the bit the agent reports.
ReportHook = Callable[[int, int], int]


@dataclass(frozen=True)
class AngleAssignment:
    thetas: tuple[float, ...]
    multiple_parity: int

    @property
    def total(self) -> float:
        return float(sum(self.thetas))


@dataclass(frozen=True)
class VerificationResult:
    """`outcomes` are the announced bits; `measured` what the agents actually observed."""

    outcomes: tuple[int, ...]
    passed: bool
    verifier: int
    angles: AngleAssignment
    measured: tuple[int, ...] = ()

    @property
    def honest_pass(self) -> bool:
        """Verdict had every agent announced its measured bit."""
        return sum(self.measured) % 2 == self.angles.multiple_parity


@dataclass(frozen=True)
class AnonymousEntanglementResult:
    """Public broadcasts of one anonymous entanglement run plus the resulting pair.

    `pair_state` is ordered (sender, receiver) regardless of agent indices.
    """

    broadcasts: Mapping[int, int]
    sender: int
    receiver: int
    sender_bit: int
    receiver_bit: int
    pair_state: StateVector = field(compare=False)

    @property
    def epr_fidelity(self) -> float:
        return fidelity(self.pair_state, EPR)


@dataclass(frozen=True)
class AEBranch:
    """One intermediate measurement record with its Born weight and output quality."""

    outcomes: tuple[int, ...]
    weight: float
    fidelity: float


EPR = make_ghz(2)


def to_verification_frame(state: StateVector) -> StateVector:
    return apply_local(state, ghz_to_phi_unitary())


def to_ghz_frame(state: StateVector) -> StateVector:
    return apply_local(state, ghz_to_phi_unitary().dagger())


def sample_angles(n: int, rng: np.random.Generator, draws: Sequence[float] | None = None) -> AngleAssignment:
    """Random angles in [0, pi) whose sum is a multiple of pi.

    The first n-1 angles are uniform (or taken from `draws`); the last one
    completes the sum.
    """
    if n < 2:
        raise InvalidArgumentError(f"verification needs at least 2 agents, got {n}")
    free = [float(x) for x in draws] if draws is not None else list(rng.uniform(0.0, np.pi, n - 1))
    if len(free) != n - 1:
        raise InvalidArgumentError(f"expected {n - 1} free angles, got {len(free)}")
    if any(not 0.0 <= t < np.pi for t in free):
        raise InvalidArgumentError("angles must lie in [0, pi)")
    last = float(np.mod(-sum(free), np.pi))
    if last >= np.pi - ANGLE_TOLERANCE:
        last = 0.0
    thetas = (*free, last)
    multiple = round(sum(thetas) / np.pi)
    return AngleAssignment(thetas=thetas, multiple_parity=multiple % 2)


def verification_round(
    state: StateVector,
    verifier: int,
    rng: np.random.Generator,
    report_hooks: Mapping[int, ReportHook] | None = None,
    angles: AngleAssignment | None = None,
) -> VerificationResult:
    """One GHZ verification round on a Phi_0-frame state.

    Every agent measures its qubit at the verifier's angle; agents with a
    report hook may replace the bit they announce.
    """
    n = state.num_qubits
    if not 1 <= verifier <= n:
        raise InvalidArgumentError(f"verifier {verifier} out of range for n={n}")
    hooks = report_hooks or {}
    angles = angles or sample_angles(n, rng)
    current = to_ghz_frame(state)
    measured: list[int] = []
    outcomes: list[int] = []
    for agent, theta in enumerate(angles.thetas, start=1):
        bit, current = measure_theta_basis(current, agent, theta, rng)
        measured.append(bit)
        outcomes.append(hooks[agent](agent, bit) & 1 if agent in hooks else bit)
    passed = sum(outcomes) % 2 == angles.multiple_parity
    return VerificationResult(
        outcomes=tuple(outcomes), passed=passed, verifier=verifier, angles=angles, measured=tuple(measured)
    )


def exact_pass_probability(state: StateVector) -> float:
    """Pass probability for honest reporters, averaged over the angle distribution.

    Only the |0..0>/|1..1> coherence in the GHZ frame survives the average.
    """
    ghz_frame = to_ghz_frame(state).amplitudes
    return float(0.5 + (np.conj(ghz_frame[-1]) * ghz_frame[0]).real)


def estimate_pass_probability(state: StateVector, trials: int, rng: np.random.Generator) -> ProportionEstimate:
    if trials < 1:
        raise InvalidArgumentError(f"trials must be >= 1, got {trials}")
    passes = sum(verification_round(state, 1, rng).passed for _ in range(trials))
    return wilson_interval(passes, trials)


def _pair_from_outcomes(
    psi: np.ndarray, n: int, sender: int, receiver: int, outcomes: Mapping[int, int]
) -> np.ndarray:
    index: list[slice | int] = [slice(None)] * n
    for agent, bit in outcomes.items():
        index[agent - 1] = bit
    pair = psi.reshape([2] * n)[tuple(index)]
    if sender > receiver:
        pair = pair.T
    return np.asarray(pair).reshape(-1)


def _check_endpoints(state: StateVector, sender: int, receiver: int) -> None:
    n = state.num_qubits
    if n < 2:
        raise InvalidArgumentError("anonymous entanglement needs at least 2 agents")
    if sender == receiver:
        raise InvalidArgumentError("sender and receiver must differ")
    for agent in (sender, receiver):
        if not 1 <= agent <= n:
            raise InvalidArgumentError(f"agent {agent} out of range for n={n}")


def anonymous_entanglement(
    state: StateVector,
    sender: int,
    receiver: int,
    rng: np.random.Generator,
) -> AnonymousEntanglementResult:
    """Turn a GHZ-frame state into a pair shared by sender and receiver.

    Intermediates measure in the X basis and broadcast in index order, then the
    sender announces a random b and applies Z^b, then the receiver announces a
    random b' and applies Z when the parity of all other broadcasts is 1.
    """
    _check_endpoints(state, sender, receiver)
    n = state.num_qubits
    broadcasts: dict[int, int] = {}
    current = state
    for agent in range(1, n + 1):
        if agent in (sender, receiver):
            continue
        current = apply_gate(current, agent, H)
        bit, current = measure_computational(current, agent, rng)
        broadcasts[agent] = bit

    sender_bit = int(rng.integers(2))
    if sender_bit:
        current = apply_gate(current, sender, Z)
    broadcasts[sender] = sender_bit

    receiver_bit = int(rng.integers(2))
    if (sum(broadcasts.values())) % 2:
        current = apply_gate(current, receiver, Z)
    broadcasts[receiver] = receiver_bit

    intermediates = {a: b for a, b in broadcasts.items() if a not in (sender, receiver)}
    pair = _pair_from_outcomes(current.amplitudes, n, sender, receiver, intermediates)
    logger.debug("anonymous entanglement: %d intermediate broadcasts", len(intermediates))
    return AnonymousEntanglementResult(
        broadcasts=broadcasts,
        sender=sender,
        receiver=receiver,
        sender_bit=sender_bit,
        receiver_bit=receiver_bit,
        pair_state=StateVector.from_unnormalized(2, pair),
    )


def ae_branch_fidelities(state: StateVector, sender: int, receiver: int) -> list[AEBranch]:
    """Enumerate every intermediate measurement record of anonymous entanglement.

    The sender's b does not change the |00>/|11> amplitudes, so each record has a
    single output fidelity. Zero-weight records are skipped.
    """
    _check_endpoints(state, sender, receiver)
    n = state.num_qubits
    intermediates = [a for a in range(1, n + 1) if a not in (sender, receiver)]
    rotated = state
    for agent in intermediates:
        rotated = apply_gate(rotated, agent, H)

    branches: list[AEBranch] = []
    for bits in itertools.product((0, 1), repeat=len(intermediates)):
        record = dict(zip(intermediates, bits, strict=True))
        pair = _pair_from_outcomes(rotated.amplitudes, n, sender, receiver, record)
        weight = float(np.vdot(pair, pair).real)
        if weight <= 1e-15:
            continue
        if sum(bits) % 2:
            pair = pair * np.array([1, 1, 1, -1])
        corrected = StateVector.from_unnormalized(2, pair)
        branches.append(AEBranch(outcomes=bits, weight=weight, fidelity=fidelity(corrected, EPR)))
    return branches


def average_ae_fidelity(state: StateVector, sender: int, receiver: int) -> float:
    return float(sum(b.weight * b.fidelity for b in ae_branch_fidelities(state, sender, receiver)))


def noisy_ghz(
    n: int,
    target_fidelity: float,
    rng: np.random.Generator,
    kind: Literal["dephased", "random"] = "dephased",
) -> StateVector:
    """A GHZ-frame state with F(state, GHZ) equal to `target_fidelity`.

    `dephased` mixes in (|0..0> - |1..1>)/sqrt2; `random` mixes in a Haar-random
    direction orthogonal to GHZ.
    """
    if not 0.0 <= target_fidelity <= 1.0:
        raise InvalidArgumentError(f"fidelity must be in [0, 1], got {target_fidelity}")
    ghz = make_ghz(n).amplitudes
    if kind == "dephased":
        deviation = ghz.copy()
        deviation[-1] = -deviation[-1]
    elif kind == "random":
        raw = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
        raw = raw - np.vdot(ghz, raw) * ghz
        deviation = raw / np.linalg.norm(raw)
    else:
        raise InvalidArgumentError(f"unknown noise kind {kind!r}")
    vec = np.sqrt(target_fidelity) * ghz + np.sqrt(1.0 - target_fidelity) * deviation
    return StateVector.from_unnormalized(n, vec)


def _cnot(psi: np.ndarray, control: int, target: int, n: int) -> np.ndarray:
    out = np.array(psi.reshape([2] * n))
    index: list[slice | int] = [slice(None)] * n
    index[control - 1] = 1
    sub = out[tuple(index)]
    axis = target - 1 if target < control else target - 2
    out[tuple(index)] = np.flip(sub, axis=axis)
    return out.reshape(-1)


def teleport(
    message: StateVector, pair: StateVector, rng: np.random.Generator
) -> tuple[StateVector, tuple[int, int]]:
    """Teleport a one-qubit message over a two-qubit pair.

    Returns the receiver's qubit and the two correction bits the sender would
    transmit.
    """
    if message.num_qubits != 1 or pair.num_qubits != 2:
        raise InvalidArgumentError("teleport takes a 1-qubit message and a 2-qubit pair")
    joint = StateVector(3, np.kron(message.amplitudes, pair.amplitudes))
    joint = StateVector.from_unnormalized(3, _cnot(joint.amplitudes, 1, 2, 3))
    joint = apply_gate(joint, 1, H)
    m1, joint = measure_computational(joint, 1, rng)
    m2, joint = measure_computational(joint, 2, rng)
    joint = apply_gate(joint, 3, X if m2 else IDENTITY)
    joint = apply_gate(joint, 3, Z if m1 else IDENTITY)
    out = joint.tensor()[m1, m2, :]
    return StateVector.from_unnormalized(1, out), (m1, m2)
