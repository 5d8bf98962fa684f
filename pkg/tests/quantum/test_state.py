import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import InvalidArgumentError
from src.quantum.state import (
    H,
    SENDER_GATE,
    X,
    Gate2x2,
    StateVector,
    apply_gate,
    apply_local,
    ghz_to_phi_unitary,
    hamming_class,
    inner,
    make_ghz,
    make_phi,
    measure_computational,
    measure_theta_basis,
    outcome_probabilities,
    project,
    random_state,
    sender_transform,
    split_subsystems,
    theta_rotation,
)


def test_ghz_amplitudes():
    ghz = make_ghz(3)
    assert ghz.amplitude("000") == pytest.approx(1 / np.sqrt(2))
    assert ghz.amplitude("111") == pytest.approx(1 / np.sqrt(2))
    assert ghz.amplitude("010") == 0


def test_qubit_one_is_most_significant():
    state = apply_gate(StateVector.basis("00"), 1, X)
    assert state.amplitude("10") == pytest.approx(1.0)


def test_unnormalized_state_rejected():
    with pytest.raises(InvalidArgumentError, match="normalized"):
        StateVector(1, np.array([1.0, 1.0]))


def test_wrong_length_rejected():
    with pytest.raises(InvalidArgumentError, match="amplitudes"):
        StateVector(2, np.array([1.0, 0.0]))


@pytest.mark.parametrize("n", [0, 13])
def test_qubit_count_out_of_range(n):
    with pytest.raises(InvalidArgumentError):
        make_ghz(n)


def test_amplitudes_are_read_only():
    state = make_ghz(2)
    with pytest.raises(ValueError):
        state.amplitudes[0] = 0.0


def test_from_unnormalized_rejects_zero_vector():
    with pytest.raises(InvalidArgumentError, match="zero"):
        StateVector.from_unnormalized(1, [0.0, 0.0])


def test_non_unitary_gate_rejected():
    with pytest.raises(InvalidArgumentError, match="unitary"):
        Gate2x2(np.array([[1, 1], [0, 1]]))


@pytest.mark.parametrize(("bits", "expected"), [("0000", 0), ("110", 2), ("1111", 0), ("111", 3), ("10101", 3)])
def test_hamming_class(bits, expected):
    assert hamming_class(bits) == expected


def test_phi_two_qubits():
    phi0 = make_phi(2, 0)
    assert phi0.amplitude("00") == pytest.approx(1 / np.sqrt(2))
    assert phi0.amplitude("11") == pytest.approx(-1 / np.sqrt(2))
    phi1 = make_phi(2, 1)
    assert phi1.amplitude("01") == pytest.approx(1 / np.sqrt(2))
    assert phi1.amplitude("10") == pytest.approx(1 / np.sqrt(2))


def test_phi_rejects_bad_class():
    with pytest.raises(InvalidArgumentError, match="class_bit"):
        make_phi(3, 2)


@pytest.mark.parametrize("n", range(1, 8))
def test_local_unitary_maps_ghz_to_phi0_without_phase(n):
    mapped = apply_local(make_ghz(n), ghz_to_phi_unitary())
    assert inner(make_phi(n, 0), mapped) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_sender_transform_maps_phi0_to_phi1(n):
    for agent in range(1, n + 1):
        moved = sender_transform(make_phi(n, 0), agent)
        assert abs(inner(make_phi(n, 1), moved)) == pytest.approx(1.0, abs=1e-12)


def test_sender_gate_is_x_after_z():
    assert np.allclose(SENDER_GATE.matrix, np.array([[0, -1], [1, 0]]))


def test_outcome_probabilities_of_ghz():
    assert outcome_probabilities(make_ghz(4), 2) == pytest.approx((0.5, 0.5))


def test_project_zero_weight_branch():
    weight, state = project(StateVector.basis("01"), 1, 1)
    assert weight == 0.0
    assert state is None


def test_measurement_collapses_ghz(rng):
    bit, collapsed = measure_computational(make_ghz(3), 2, rng)
    label = str(bit) * 3
    assert collapsed.amplitude(label) == pytest.approx(1.0)


def test_theta_rotation_zero_is_hadamard():
    assert np.allclose(theta_rotation(0.0).matrix, H.matrix)


def test_theta_measurement_rejects_pi(rng):
    with pytest.raises(InvalidArgumentError, match="theta"):
        measure_theta_basis(make_ghz(2), 1, np.pi, rng)


def test_theta_measurement_of_plus_state_is_deterministic(rng):
    plus = StateVector.from_unnormalized(1, [1.0, 1.0])
    for _ in range(20):
        bit, _ = measure_theta_basis(plus, 1, 0.0, rng)
        assert bit == 0


def test_split_subsystems_shape_and_order():
    state = StateVector.basis("011")
    matrix = split_subsystems(state, [2])
    assert matrix.shape == (2, 4)
    # row: qubit 2 = 1; column: qubits (1, 3) = (0, 1)
    assert matrix[1, 1] == pytest.approx(1.0)


def test_inner_rejects_dimension_mismatch():
    with pytest.raises(InvalidArgumentError, match="mismatch"):
        inner(make_ghz(2), make_ghz(3))


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**32 - 1),
    n=st.integers(min_value=1, max_value=6),
    theta=st.floats(min_value=0.0, max_value=3.14),
)
def test_gate_then_dagger_is_identity(seed, n, theta):
    rng = np.random.default_rng(seed)
    state = random_state(n, rng)
    q = int(rng.integers(1, n + 1))
    gate = theta_rotation(theta)
    back = apply_gate(apply_gate(state, q, gate), q, gate.dagger())
    assert np.allclose(back.amplitudes, state.amplitudes, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1), n=st.integers(min_value=1, max_value=6))
def test_outcome_probabilities_sum_to_one(seed, n):
    rng = np.random.default_rng(seed)
    state = random_state(n, rng)
    for q in range(1, n + 1):
        assert sum(outcome_probabilities(state, q)) == pytest.approx(1.0)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1), n=st.integers(min_value=1, max_value=5), data=st.data())
def test_sender_transform_twice_negates_the_state(seed, n, data):
    state = random_state(n, np.random.default_rng(seed))
    agent = data.draw(st.integers(min_value=1, max_value=n))
    twice = sender_transform(sender_transform(state, agent), agent)
    assert np.allclose(twice.amplitudes, -state.amplitudes)


@pytest.mark.parametrize("n", range(2, 7))
def test_sender_transform_of_phi0_is_the_same_for_every_agent(n):
    phi1 = make_phi(n, 1).amplitudes
    for agent in range(1, n + 1):
        assert np.allclose(sender_transform(make_phi(n, 0), agent).amplitudes, phi1)


def test_computational_measurement_follows_born_rule(rng):
    ones = sum(measure_computational(make_ghz(3), 2, rng)[0] for _ in range(10_000))
    assert ones / 10_000 == pytest.approx(0.5, abs=0.02)


def test_half_pi_measurement_of_zero_is_uniform(rng):
    zero = StateVector.basis("0")
    ones = sum(measure_theta_basis(zero, 1, np.pi / 2, rng)[0] for _ in range(10_000))
    assert ones / 10_000 == pytest.approx(0.5, abs=0.02)
