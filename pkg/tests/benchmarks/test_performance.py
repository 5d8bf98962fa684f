"""Performance benchmarks for the simulation hot paths.

Measures latency for:
- one GHZ verification round
- the closed-form F' for a 6-qubit state
- one simulated Parity over the network fabric
- one ideal-mode protocol execution

Run with: uv run pytest tests/benchmarks/test_performance.py -v
"""

from typing import Any

import numpy as np
import pytest

from src.classical import parity
from src.network import NetworkFabric
from src.orchestrator import ProtocolConfig, run_protocol5
from src.quantum.fidelity import fprime
from src.quantum.protocols import verification_round
from src.quantum.state import make_phi, random_state


@pytest.mark.benchmark
class TestQuantumBenchmarks:
    """Benchmarks for state-vector operations."""

    def test_verification_round_latency(self, benchmark: Any) -> None:
        rng = np.random.default_rng(1)
        state = make_phi(6, 0)
        result = benchmark(lambda: verification_round(state, 1, rng))
        assert result.passed

    def test_fprime_latency(self, benchmark: Any) -> None:
        state = random_state(6, np.random.default_rng(2))
        report = benchmark(lambda: fprime(state, [5, 6]))
        assert 0.0 <= report.fprime <= 1.0


@pytest.mark.benchmark
class TestProtocolBenchmarks:
    """Benchmarks for classical and end-to-end protocol steps."""

    def test_parity_latency(self, benchmark: Any) -> None:
        rng = np.random.default_rng(3)
        inputs = [1, 0, 1, 0, 0]

        def run() -> int:
            return parity(NetworkFabric.for_agents(5), inputs, rng).public_parity

        assert benchmark(run) == 0

    def test_ideal_run_latency(self, benchmark: Any) -> None:
        config = ProtocolConfig(n=4, S=4, seed=5, classical_mode="ideal", record_transcript=False)
        run = benchmark(lambda: run_protocol5(config))
        assert run.round_count >= 1
