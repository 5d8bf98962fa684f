"""Sender-identification attacks by state discrimination.

Candidates are the states the malicious coalition would hold if honest agent i
had applied the sender transform. Helstrom is the exact optimum for two
candidates; the pretty-good measurement is used for more.
"""

from collections.abc import Collection, Sequence

import numpy as np

from src.errors import InvalidArgumentError
from src.quantum.fidelity import fidelity
from src.quantum.state import ComplexArray, StateVector, sender_transform

from .models import DiscriminationEnsemble

SUPPORT_TOLERANCE = 1e-12


def build_sender_ensemble(state: StateVector, honest_set: Collection[int]) -> DiscriminationEnsemble:
    """Candidate i is `sender_transform(state, i)` for each honest i, with prior 1/k."""
    senders = tuple(sorted(set(honest_set)))
    if not senders:
        raise InvalidArgumentError("honest set must not be empty")
    candidates = tuple(sender_transform(state, i) for i in senders)
    k = len(senders)
    return DiscriminationEnsemble(senders=senders, candidates=candidates, priors=tuple([1.0 / k] * k))


def pairwise_fidelities(ensemble: DiscriminationEnsemble) -> dict[tuple[int, int], float]:
    out: dict[tuple[int, int], float] = {}
    for a in range(ensemble.k):
        for b in range(a + 1, ensemble.k):
            out[(ensemble.senders[a], ensemble.senders[b])] = fidelity(ensemble.candidates[a], ensemble.candidates[b])
    return out


def _density(state: StateVector | ComplexArray) -> ComplexArray:
    if isinstance(state, StateVector):
        vec = state.amplitudes
        return np.outer(vec, vec.conj())
    return np.asarray(state, dtype=np.complex128)


def helstrom_guess_prob(rho1: StateVector | ComplexArray, rho2: StateVector | ComplexArray) -> float:
    """Optimal success probability for two equiprobable states: 1/2 + ||rho1 - rho2||_1 / 4."""
    a = _density(rho1)
    b = _density(rho2)
    if a.shape != b.shape:
        raise InvalidArgumentError(f"dimension mismatch: {a.shape} vs {b.shape}")
    trace_norm = float(np.sum(np.abs(np.linalg.eigvalsh(a - b))))
    return min(1.0, 0.5 + trace_norm / 4)


def _inverse_sqrt_on_support(rho: ComplexArray) -> tuple[ComplexArray, ComplexArray]:
    """rho^{-1/2} restricted to the support of rho, and the projector onto its kernel."""
    evals, evecs = np.linalg.eigh(rho)
    support = evals > SUPPORT_TOLERANCE
    inv_sqrt = np.zeros_like(evals)
    inv_sqrt[support] = 1.0 / np.sqrt(evals[support])
    root = (evecs * inv_sqrt) @ evecs.conj().T
    kernel = evecs[:, ~support] @ evecs[:, ~support].conj().T
    return root, kernel


def pgm_operators(ensemble: DiscriminationEnsemble) -> list[ComplexArray]:
    """Pretty-good measurement, completed to the identity off the ensemble's support."""
    rhos = [_density(c) for c in ensemble.candidates]
    average = sum((p * r for p, r in zip(ensemble.priors, rhos, strict=True)), np.zeros_like(rhos[0]))
    root, kernel = _inverse_sqrt_on_support(average)
    return [root @ (p * r) @ root + kernel / ensemble.k for p, r in zip(ensemble.priors, rhos, strict=True)]


def pgm_guess_prob(ensemble: DiscriminationEnsemble) -> float:
    operators = ensemble.operators or tuple(pgm_operators(ensemble))
    total = 0.0
    for prior, candidate, op in zip(ensemble.priors, ensemble.candidates, operators, strict=True):
        vec = candidate.amplitudes
        total += prior * float(np.vdot(vec, op @ vec).real)
    return min(1.0, total)


def gram_guess_prob(states: Sequence[StateVector]) -> float:
    """PGM success for equiprobable pure states from the square root of the Gram matrix."""
    if not states:
        raise InvalidArgumentError("need at least one state")
    k = len(states)
    vecs = np.array([s.amplitudes for s in states])
    gram = (vecs.conj() @ vecs.T) / k
    evals, evecs = np.linalg.eigh(gram)
    root = (evecs * np.sqrt(np.clip(evals, 0.0, None))) @ evecs.conj().T
    return float(np.sum(np.abs(np.diag(root)) ** 2))


def rigorous_pairwise_floor(fprime_value: float) -> float:
    """Lower bound (2F' - 1)^2 on F(Psi_i, Psi_j) for any two honest senders i, j.

    Holds for F' >= 1/2; below that the bound is 0.
    """
    return max(0.0, 2 * fprime_value - 1) ** 2
