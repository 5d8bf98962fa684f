import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import InvalidArgumentError
from src.quantum.fidelity import (
    cross_operator,
    decompose_honest,
    fidelity,
    fprime,
    search_fprime,
    trace_distance_pure,
)
from src.quantum.state import (
    Gate2x2,
    H,
    StateVector,
    apply_gate,
    make_ghz,
    make_phi,
    random_state,
)


def test_fidelity_of_identical_states():
    assert fidelity(make_phi(3, 0), make_phi(3, 0)) == pytest.approx(1.0)
    assert trace_distance_pure(make_phi(3, 0), make_phi(3, 0)) == pytest.approx(0.0, abs=1e-7)


def test_phi0_and_phi1_are_orthogonal():
    assert fidelity(make_phi(4, 0), make_phi(4, 1)) == pytest.approx(0.0, abs=1e-12)


def test_fprime_without_malicious_agents_is_plain_fidelity(rng):
    state = random_state(3, rng)
    report = fprime(state, [])
    assert report.fprime == pytest.approx(fidelity(state, make_phi(3, 0)))
    assert report.fidelity == report.fprime


def test_malicious_unitary_is_undone(rng):
    """Scrambling a malicious qubit of Phi_0 leaves F' at 1."""
    scrambled = apply_gate(make_phi(4, 0), 4, Gate2x2(np.array([[0, 1j], [1j, 0]])))
    report = fprime(scrambled, [4])
    assert report.fidelity < 0.5
    assert report.fprime == pytest.approx(1.0)


def test_maximizing_unitary_attains_fprime(rng):
    state = random_state(4, rng)
    report = fprime(state, [2])
    rotated = apply_gate(state, 2, Gate2x2(report.maximizing_unitary))
    assert fidelity(rotated, make_phi(4, 0)) == pytest.approx(report.fprime, abs=1e-10)


def test_cross_operator_shape():
    assert cross_operator(make_ghz(4), [3, 4]).shape == (4, 4)


def test_fprime_rejects_unknown_agent():
    with pytest.raises(InvalidArgumentError, match="out of range"):
        fprime(make_ghz(3), [4])


def test_decompose_honest_weights(rng):
    state = random_state(4, rng)
    parts = decompose_honest(state, [4])
    assert parts.weight0 + parts.weight1 + parts.chi_norm_sq == pytest.approx(1.0)


def test_decompose_phi0_is_pure_psi0():
    parts = decompose_honest(make_phi(3, 0), [3])
    assert parts.weight0 == pytest.approx(0.5)
    assert parts.weight1 == pytest.approx(0.5)
    assert parts.chi_norm_sq == pytest.approx(0.0, abs=1e-12)


def test_decompose_needs_an_honest_agent():
    with pytest.raises(InvalidArgumentError, match="honest"):
        decompose_honest(make_ghz(2), [1, 2])


@pytest.mark.parametrize("malicious", [[3], [2, 3]])
def test_closed_form_matches_randomized_search(malicious):
    rng = np.random.default_rng(7)
    state = random_state(3, rng)
    assert search_fprime(state, malicious, rng) == pytest.approx(fprime(state, malicious).fprime, abs=1e-6)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1), n=st.integers(min_value=2, max_value=5))
def test_fprime_bounds(seed, n):
    rng = np.random.default_rng(seed)
    state = random_state(n, rng)
    malicious = [q for q in range(1, n + 1) if rng.random() < 0.5]
    report = fprime(state, malicious)
    assert report.fidelity - 1e-12 <= report.fprime <= 1.0


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_fprime_invariant_under_malicious_unitaries(seed):
    rng = np.random.default_rng(seed)
    state = random_state(4, rng)
    moved = apply_gate(apply_gate(state, 3, H), 4, Gate2x2(np.diag([1.0, np.exp(1j * rng.uniform(0, 6))])))
    assert fprime(moved, [3, 4]).fprime == pytest.approx(fprime(state, [3, 4]).fprime, abs=1e-10)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_growing_the_coalition_never_lowers_fprime(seed):
    rng = np.random.default_rng(seed)
    state = random_state(4, rng)
    assert fprime(state, [3, 4]).fprime >= fprime(state, [4]).fprime - 1e-12


def test_fidelity_is_symmetric():
    a = StateVector.from_unnormalized(2, [1, 2, 3, 4j])
    b = StateVector.from_unnormalized(2, [1j, 0, 1, 1])
    assert fidelity(a, b) == pytest.approx(fidelity(b, a))
