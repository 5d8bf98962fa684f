"""State sources for the distribution protocol.

States are emitted in the Phi_0 frame, where the ideal state is Phi_0^n.
"""

import logging
from collections.abc import Collection

import numpy as np
from scipy.stats import unitary_group

from src.errors import InvalidArgumentError
from src.quantum.fidelity import fprime
from src.quantum.state import Gate2x2, StateVector, apply_gate, make_phi

from .models import SourceKind, SourceStrategy

logger = logging.getLogger(__name__)

FPRIME_TOLERANCE = 1e-6
_BISECTION_STEPS = 80


def _mixture(base: np.ndarray, deviation: np.ndarray, s: float, n: int) -> StateVector:
    return StateVector.from_unnormalized(n, np.sqrt(s) * base + np.sqrt(1.0 - s) * deviation)


def _bisect(
    n: int, malicious: list[int], base: np.ndarray, deviation: np.ndarray, target: float
) -> StateVector:
    """Find s with fprime(normalize(sqrt(s) base + sqrt(1-s) deviation)) == target."""
    floor = fprime(_mixture(base, deviation, 0.0, n), malicious).fprime
    if target < floor - FPRIME_TOLERANCE:
        raise InvalidArgumentError(
            f"target F'={target} is below the smallest reachable value {floor:.6f} "
            f"for n={n} with {n - len(malicious)} honest agent(s)"
        )
    lo, hi = 0.0, 1.0
    for _ in range(_BISECTION_STEPS):
        mid = (lo + hi) / 2
        if fprime(_mixture(base, deviation, mid, n), malicious).fprime < target:
            lo = mid
        else:
            hi = mid
    return _mixture(base, deviation, (lo + hi) / 2, n)


def _honest_deviation(n: int, honest: list[int]) -> np.ndarray:
    """|chi> (x) |0..0>_malicious with chi orthogonal to Phi_0^k and Phi_1^k.

    chi is |0^k> with its Phi_0^k component removed; it needs k >= 2.
    """
    k = len(honest)
    zero = np.zeros(2**k, dtype=np.complex128)
    zero[0] = 1.0
    phi0 = make_phi(k, 0).amplitudes
    chi = zero - np.vdot(phi0, zero) * phi0
    chi /= np.linalg.norm(chi)

    tensor = np.zeros([2] * n, dtype=np.complex128)
    index: list[slice | int] = [0] * n
    for q in honest:
        index[q - 1] = slice(None)
    tensor[tuple(index)] = chi.reshape([2] * k)
    return tensor.reshape(-1)


def craft_state_with_fprime(n: int, malicious_set: Collection[int], target: float) -> StateVector:
    """A pure state whose F' against the malicious coalition equals `target`.

    The deviation from Phi_0^n lives on the honest subsystem, orthogonal to both
    Phi_0^k and Phi_1^k, so no malicious unitary can raise the overlap.
    """
    if not 0.0 < target <= 1.0:
        raise InvalidArgumentError(f"target F' must be in (0, 1], got {target}")
    malicious = sorted(set(malicious_set))
    honest = [q for q in range(1, n + 1) if q not in malicious]
    if not honest:
        raise InvalidArgumentError("at least one agent must be honest")
    base = make_phi(n, 0).amplitudes
    if target == 1.0:
        return make_phi(n, 0)

    if len(honest) >= 2:
        deviation = _honest_deviation(n, honest)
    elif not malicious:
        deviation = make_phi(n, 1).amplitudes
    else:
        deviation = np.zeros(2**n, dtype=np.complex128)
        deviation[0] = 1.0
        return _bisect(n, malicious, base, deviation, target)

    state = _mixture(base, deviation, target, n)
    achieved = fprime(state, malicious).fprime
    if abs(achieved - target) > FPRIME_TOLERANCE:
        logger.warning("crafted state missed F'=%.6f (got %.6f); adjusting by bisection", target, achieved)
        return _bisect(n, malicious, base, deviation, target)
    return state


class Source:
    """Emits one fresh state per protocol round according to a `SourceStrategy`.

    The bounded source re-randomizes the malicious qubits each round with Haar
    unitaries, which leaves F' unchanged.
    """

    def __init__(self, strategy: SourceStrategy, n: int, malicious_set: Collection[int] = ()) -> None:
        self.strategy = strategy
        self.n = n
        self.malicious = sorted(set(malicious_set))
        if strategy.kind == SourceKind.HONEST:
            self._template = make_phi(n, 0)
        elif strategy.kind == SourceKind.BOUNDED_FIDELITY:
            self._template = craft_state_with_fprime(n, self.malicious, strategy.target_fprime)
        else:
            self._template = StateVector.basis("0" * n)

    def emit(self, rng: np.random.Generator) -> StateVector:
        if self.strategy.kind != SourceKind.BOUNDED_FIDELITY or not self.malicious:
            return self._template
        state = self._template
        for q in self.malicious:
            state = apply_gate(state, q, Gate2x2(unitary_group.rvs(2, random_state=rng)))
        return state
