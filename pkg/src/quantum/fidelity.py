"""Overlap measures between pure states, including the fidelity maximized over
unitaries held by a malicious coalition.
"""

import logging
from collections.abc import Collection
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

from src.errors import InvalidArgumentError

from .state import ComplexArray, StateVector, inner, make_phi, split_subsystems

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FidelityReport:
    """`fidelity` is F(state, Phi_0^n); `fprime` is the same overlap after the best
    unitary on the malicious qubits, which is `maximizing_unitary`.
    """

    fidelity: float
    fprime: float
    maximizing_unitary: ComplexArray = field(repr=False)


@dataclass(frozen=True, eq=False)
class DecompositionResult:
    """Honest part of a state split along Phi_0^k, Phi_1^k and a residual."""

    psi0: ComplexArray
    psi1: ComplexArray
    chi_norm_sq: float

    @property
    def weight0(self) -> float:
        return float(np.vdot(self.psi0, self.psi0).real)

    @property
    def weight1(self) -> float:
        return float(np.vdot(self.psi1, self.psi1).real)


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2."""
    return min(1.0, abs(inner(a, b)) ** 2)


def trace_distance_pure(a: StateVector, b: StateVector) -> float:
    return float(np.sqrt(max(0.0, 1.0 - fidelity(a, b))))


def _validate_malicious(state: StateVector, malicious_set: Collection[int]) -> list[int]:
    malicious = sorted(set(malicious_set))
    for agent in malicious:
        if not 1 <= agent <= state.num_qubits:
            raise InvalidArgumentError(f"malicious agent {agent} out of range for n={state.num_qubits}")
    return malicious


def _honest_agents(n: int, malicious: list[int]) -> list[int]:
    return [a for a in range(1, n + 1) if a not in malicious]


def cross_operator(state: StateVector, malicious_set: Collection[int]) -> ComplexArray:
    """M[m', m] = sum_h Psi[h, m'] conj(Phi_0[h, m]) over honest labels h.

    The overlap after a malicious unitary U is Tr(U M), so max |Tr(U M)| is
    the nuclear norm of M.
    """
    malicious = _validate_malicious(state, malicious_set)
    honest = _honest_agents(state.num_qubits, malicious)
    psi = split_subsystems(state, honest)
    phi = split_subsystems(make_phi(state.num_qubits, 0), honest)
    return psi.T @ phi.conj()


def fprime(state: StateVector, malicious_set: Collection[int]) -> FidelityReport:
    """Fidelity with Phi_0^n maximized over unitaries on the malicious qubits.

    The maximizing unitary acts on the malicious qubits in ascending order,
    most significant first.
    """
    plain = fidelity(state, make_phi(state.num_qubits, 0))
    malicious = _validate_malicious(state, malicious_set)
    if not malicious:
        return FidelityReport(fidelity=plain, fprime=plain, maximizing_unitary=np.eye(1, dtype=np.complex128))

    w, sigma, vh = np.linalg.svd(cross_operator(state, malicious))
    best = min(1.0, float(np.sum(sigma)) ** 2)
    unitary = vh.conj().T @ w.conj().T
    return FidelityReport(fidelity=plain, fprime=max(best, plain), maximizing_unitary=unitary)


def decompose_honest(state: StateVector, malicious_set: Collection[int]) -> DecompositionResult:
    malicious = _validate_malicious(state, malicious_set)
    honest = _honest_agents(state.num_qubits, malicious)
    if not honest:
        raise InvalidArgumentError("decomposition needs at least one honest agent")
    k = len(honest)
    psi = split_subsystems(state, honest)
    phi0 = make_phi(k, 0).amplitudes
    phi1 = make_phi(k, 1).amplitudes
    psi0 = phi0.conj() @ psi
    psi1 = phi1.conj() @ psi
    chi = 1.0 - float(np.vdot(psi0, psi0).real) - float(np.vdot(psi1, psi1).real)
    return DecompositionResult(psi0=psi0, psi1=psi1, chi_norm_sq=max(0.0, chi))


def _hermitian(params: np.ndarray, dim: int) -> ComplexArray:
    herm = np.zeros((dim, dim), dtype=np.complex128)
    diag = params[:dim]
    upper = params[dim:]
    herm[np.diag_indices(dim)] = diag
    rows, cols = np.triu_indices(dim, k=1)
    half = len(rows)
    herm[rows, cols] = upper[:half] + 1j * upper[half:]
    herm[cols, rows] = upper[:half] - 1j * upper[half:]
    return herm


def search_fprime(
    state: StateVector,
    malicious_set: Collection[int],
    rng: np.random.Generator,
    restarts: int = 6,
) -> float:
    """Randomized search for F' over exp(iH) unitaries on the malicious qubits.

    Independent of the singular-value closed form; used to cross-check it.
    """
    malicious = _validate_malicious(state, malicious_set)
    target = make_phi(state.num_qubits, 0)
    if not malicious:
        return fidelity(state, target)

    honest = _honest_agents(state.num_qubits, malicious)
    psi = split_subsystems(state, honest)
    phi = split_subsystems(target, honest)
    dim = psi.shape[1]

    def negative_overlap(params: np.ndarray) -> float:
        unitary = expm(1j * _hermitian(params, dim))
        rotated = psi @ unitary.T
        return -float(abs(np.vdot(phi, rotated)) ** 2)

    best = -negative_overlap(np.zeros(dim * dim))
    starts = [np.zeros(dim * dim)] + [rng.uniform(-np.pi, np.pi, dim * dim) for _ in range(restarts)]
    for x0 in starts:
        res = minimize(negative_overlap, x0, method="Powell", options={"xtol": 1e-10, "ftol": 1e-14, "maxiter": 20000})
        best = max(best, -float(res.fun))
    logger.debug("randomized F' search over %d starts: %.12f", len(starts), best)
    return min(1.0, best)
