"""Dense pure-state simulation for up to 12 qubits.

Qubit j (1-based) is axis j-1 of the amplitude tensor, so qubit 1 is the most
significant bit of a basis label: amplitude index 0b10 of a 2-qubit state is |10>.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from src.errors import InvalidArgumentError

MAX_QUBITS = 12
NORM_TOLERANCE = 1e-9

ComplexArray = npt.NDArray[np.complex128]


@dataclass(frozen=True, eq=False)
class StateVector:
    """An n-qubit pure state. Immutable: every operation returns a new vector."""

    num_qubits: int
    amplitudes: ComplexArray = field(repr=False)

    def __post_init__(self) -> None:
        _check_qubit_count(self.num_qubits)
        amplitudes = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amplitudes.shape[0] != 2**self.num_qubits:
            raise InvalidArgumentError(
                f"expected {2**self.num_qubits} amplitudes for {self.num_qubits} qubits, got {amplitudes.shape[0]}"
            )
        norm_sq = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm_sq - 1.0) > NORM_TOLERANCE:
            raise InvalidArgumentError(f"state is not normalized (norm^2 = {norm_sq:.12f})")
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def from_unnormalized(cls, num_qubits: int, amplitudes: npt.ArrayLike) -> "StateVector":
        """Build a state from any nonzero vector by rescaling it to unit norm."""
        vec = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            raise InvalidArgumentError("cannot normalize the zero vector")
        return cls(num_qubits, vec / norm)

    @classmethod
    def basis(cls, bits: str | Sequence[int]) -> "StateVector":
        """Computational basis state, e.g. `StateVector.basis("010")`."""
        labels = [int(b) for b in bits]
        vec = np.zeros(2 ** len(labels), dtype=np.complex128)
        vec[int("".join(map(str, labels)), 2)] = 1.0
        return cls(len(labels), vec)

    def tensor(self) -> ComplexArray:
        """Amplitudes viewed as an n-axis tensor of shape (2, ..., 2)."""
        return self.amplitudes.reshape([2] * self.num_qubits)

    def amplitude(self, bits: str) -> complex:
        return complex(self.amplitudes[int(bits, 2)])


@dataclass(frozen=True, eq=False)
class Gate2x2:
    """Single-qubit gate; construction rejects non-unitary matrices."""

    matrix: ComplexArray

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=np.complex128)
        if matrix.shape != (2, 2):
            raise InvalidArgumentError(f"gate must be 2x2, got shape {matrix.shape}")
        if not np.allclose(matrix.conj().T @ matrix, np.eye(2), atol=NORM_TOLERANCE, rtol=0.0):
            raise InvalidArgumentError("gate is not unitary")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    def dagger(self) -> "Gate2x2":
        return Gate2x2(self.matrix.conj().T)

    def __matmul__(self, other: "Gate2x2") -> "Gate2x2":
        return Gate2x2(self.matrix @ other.matrix)


_SQRT2_INV = 1 / np.sqrt(2)

H = Gate2x2(np.array([[1, 1], [1, -1]], dtype=np.complex128) * _SQRT2_INV)
X = Gate2x2(np.array([[0, 1], [1, 0]], dtype=np.complex128))
Z = Gate2x2(np.array([[1, 0], [0, -1]], dtype=np.complex128))
# Phase shift sqrt(Z)
S = Gate2x2(np.array([[1, 0], [0, 1j]], dtype=np.complex128))
IDENTITY = Gate2x2(np.eye(2, dtype=np.complex128))


def _check_qubit_count(n: int) -> None:
    if not 1 <= n <= MAX_QUBITS:
        raise InvalidArgumentError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")


def _check_qubit_index(state: StateVector, q: int) -> None:
    if not 1 <= q <= state.num_qubits:
        raise InvalidArgumentError(f"qubit index {q} out of range for {state.num_qubits} qubits")


def make_ghz(n: int) -> StateVector:
    _check_qubit_count(n)
    vec = np.zeros(2**n, dtype=np.complex128)
    vec[0] = vec[-1] = _SQRT2_INV
    return StateVector(n, vec)


def hamming_class(y: str | Sequence[int]) -> int:
    """Hamming weight of a bit string, mod 4."""
    return sum(int(b) for b in y) % 4


def _weight_classes(n: int) -> npt.NDArray[np.int64]:
    weights = np.zeros(2**n, dtype=np.int64)
    for q in range(n):
        weights += (np.arange(2**n) >> q) & 1
    return weights % 4


def make_phi(n: int, class_bit: int) -> StateVector:
    """The state with +1 on Hamming class `class_bit` and -1 on class `class_bit + 2`."""
    _check_qubit_count(n)
    if class_bit not in (0, 1):
        raise InvalidArgumentError(f"class_bit must be 0 or 1, got {class_bit}")
    classes = _weight_classes(n)
    scale = 1 / np.sqrt(2 ** (n - 1))
    vec = np.zeros(2**n, dtype=np.complex128)
    vec[classes == class_bit] = scale
    vec[classes == class_bit + 2] = -scale
    return StateVector(n, vec)


def apply_gate(state: StateVector, q: int, g: Gate2x2) -> StateVector:
    _check_qubit_index(state, q)
    psi = np.tensordot(g.matrix, state.tensor(), axes=([1], [q - 1]))
    psi = np.moveaxis(psi, 0, q - 1)
    return StateVector(state.num_qubits, psi.reshape(-1))


def apply_local(state: StateVector, gate: Gate2x2) -> StateVector:
    """Apply the same gate to every qubit."""
    for q in range(1, state.num_qubits + 1):
        state = apply_gate(state, q, gate)
    return state


def outcome_probabilities(state: StateVector, q: int) -> tuple[float, float]:
    _check_qubit_index(state, q)
    probs = np.sum(np.abs(np.moveaxis(state.tensor(), q - 1, 0)) ** 2, axis=tuple(range(1, state.num_qubits)))
    return float(probs[0]), float(probs[1])


def project(state: StateVector, q: int, bit: int) -> tuple[float, StateVector | None]:
    """Born weight of `bit` on qubit q and the collapsed state (None for a zero-weight branch)."""
    weights = outcome_probabilities(state, q)
    weight = weights[bit]
    if weight <= 1e-15:
        return 0.0, None
    psi = np.array(state.tensor())
    index: list[slice | int] = [slice(None)] * state.num_qubits
    index[q - 1] = 1 - bit
    psi[tuple(index)] = 0.0
    return weight, StateVector.from_unnormalized(state.num_qubits, psi)


def measure_computational(state: StateVector, q: int, rng: np.random.Generator) -> tuple[int, StateVector]:
    _, p1 = outcome_probabilities(state, q)
    bit = 1 if rng.random() < p1 else 0
    _, collapsed = project(state, q, bit)
    if collapsed is None:
        # rng.random() < p1 never selects a zero-weight branch
        bit = 1 - bit
        _, collapsed = project(state, q, bit)
    assert collapsed is not None
    return bit, collapsed


def theta_rotation(theta: float) -> Gate2x2:
    """H . diag(1, e^{-i theta}): maps |+_theta> to |0> and |-_theta> to |1>."""
    return H @ Gate2x2(np.diag([1.0, np.exp(-1j * theta)]))


def measure_theta_basis(
    state: StateVector, q: int, theta: float, rng: np.random.Generator
) -> tuple[int, StateVector]:
    """Measure qubit q in {|+_theta>, |-_theta>}; outcome 0 is |+_theta>.

    The returned state is left in the rotated frame (qubit q collapsed to |Y>).
    """
    if not 0.0 <= theta < np.pi:
        raise InvalidArgumentError(f"theta must be in [0, pi), got {theta}")
    rotated = apply_gate(state, q, theta_rotation(theta))
    return measure_computational(rotated, q, rng)


SENDER_GATE = X @ Z


def sender_transform(state: StateVector, i: int) -> StateVector:
    """Sigma_z then sigma_x on agent i's qubit."""
    return apply_gate(state, i, SENDER_GATE)


def ghz_to_phi_unitary() -> Gate2x2:
    """Per-qubit local unitary S.H with (S.H)^{(x)n} |GHZ> = |Phi_0^n> exactly."""
    return S @ H


def random_state(n: int, rng: np.random.Generator) -> StateVector:
    """Haar-random pure state."""
    _check_qubit_count(n)
    vec = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return StateVector.from_unnormalized(n, vec)


def inner(a: StateVector, b: StateVector) -> complex:
    """<a|b>."""
    if a.num_qubits != b.num_qubits:
        raise InvalidArgumentError(f"dimension mismatch: {a.num_qubits} vs {b.num_qubits} qubits")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def split_subsystems(state: StateVector, first: Sequence[int]) -> ComplexArray:
    """Reshape amplitudes into a (2^|first|, 2^rest) matrix.

    Rows run over the qubits in `first` (ascending), columns over the
    remaining qubits (ascending), both most-significant-first.
    """
    first_sorted = sorted(first)
    for q in first_sorted:
        _check_qubit_index(state, q)
    rest = [q for q in range(1, state.num_qubits + 1) if q not in first_sorted]
    order = [q - 1 for q in first_sorted + rest]
    psi = np.transpose(state.tensor(), order)
    return psi.reshape(2 ** len(first_sorted), 2 ** len(rest))
