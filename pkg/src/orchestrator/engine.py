import logging
import time
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from src.adversary.policies import classical_hooks, pre_ae_gates, verification_hooks, verifier_verdict
from src.adversary.source import Source
from src.classical.models import RandomAgentRun, RandomBitDistribution, RandomBitRun
from src.classical.protocols import (
    AgentHooks,
    ideal_notification,
    ideal_random_agent,
    ideal_random_bit,
    notification,
    random_agent,
    random_bit,
)
from src.errors import InvalidArgumentError
from src.models import Result
from src.network import NetworkFabric, Ordering, Transcript
from src.quantum.fidelity import fprime
from src.quantum.protocols import (
    AnonymousEntanglementResult,
    VerificationResult,
    anonymous_entanglement,
    teleport,
    to_ghz_frame,
    verification_round,
)
from src.quantum.state import StateVector, apply_gate
from src.telemetry import get_round_histogram, get_run_counter, get_tracer, get_verification_counter

from .bounds import fidelity_threshold
from .models import AbortReason, Branch, ProtocolConfig, ProtocolRun, RoundOutcome

logger = logging.getLogger(__name__)

_tracer = get_tracer("anon-quantum-transmission.orchestrator")

C_EPSILON_SLACK = 1e-9


class DistributionEngine:
    """Runs the epsilon-anonymous entanglement distribution protocol for one config.

    Each round the source emits a fresh state and the sender's RandomBit decides
    between using it (anonymous entanglement, then stop) and testing it
    (RandomAgent picks a verifier, then GHZ verification; failure aborts).
    """

    def __init__(self, config: ProtocolConfig) -> None:
        self.config = config
        self.rng = np.random.default_rng(config.seed)
        self.policies = config.malicious_policies()
        self.hooks: AgentHooks = classical_hooks(self.policies, config.n)
        self.report_hooks = verification_hooks(self.policies, config.n)
        self.source = Source(config.source, config.n, config.malicious)
        self.fabric = NetworkFabric.for_agents(config.n, config.malicious)
        self.threshold = fidelity_threshold(config.epsilon)
        self._extra_or_ones = any(p.flip_or_inputs for p in self.policies.values())

    @property
    def simulated(self) -> bool:
        return self.config.classical_mode == "simulated"

    def _choose_endpoints(self) -> tuple[int, int]:
        config = self.config
        sender = config.sender if config.sender is not None else int(self.rng.choice(config.honest))
        if config.receiver is not None:
            return sender, config.receiver
        others = [a for a in range(1, config.n + 1) if a != sender]
        return sender, int(self.rng.choice(others))

    def _notify(self, sender: int, receiver: int) -> bool:
        if self.simulated:
            self.fabric.enter_phase("notification")
            run = notification(self.fabric, sender, receiver, self.config.S, self.rng, self.hooks)
        else:
            run = ideal_notification(self.config.n, sender, receiver, self.config.S, self.rng)
        return bool(run.outputs[receiver])

    def _random_bit(self, sender: int, round_index: int) -> RandomBitRun:
        d = RandomBitDistribution.all_heads(self.config.S)
        if self.simulated:
            self.fabric.enter_phase(f"round:{round_index}:random_bit")
            return random_bit(self.fabric, sender, d, self.config.S, self.rng, self.hooks)
        return ideal_random_bit(d, self.config.S, self.config.n, self.rng, extra_ones=self._extra_or_ones)

    def _random_agent(self, sender: int, round_index: int) -> RandomAgentRun:
        if self.simulated:
            self.fabric.enter_phase(f"round:{round_index}:random_agent")
            return random_agent(self.fabric, sender, self.config.S, self.rng, self.hooks)
        return ideal_random_agent(
            self.config.n, self.config.S, self.config.n, self.rng, extra_ones=self._extra_or_ones
        )

    def _verify(self, state: StateVector, verifier: int, round_index: int) -> VerificationResult:
        result = verification_round(state, verifier, self.rng, self.report_hooks)
        if self.simulated:
            self.fabric.enter_phase(f"round:{round_index}:verification")
            for agent, theta in enumerate(result.angles.thetas, start=1):
                self.fabric.send_private(verifier, agent, f"{theta:.17g}")
            for agent in range(1, self.config.n + 1):
                self.fabric.drain(agent)
            announcements = dict(enumerate(result.outcomes, start=1))
            self.fabric.broadcast_ordered(Ordering(tuple(range(1, self.config.n + 1))), announcements)
        return result

    def _entangle(
        self, state: StateVector, sender: int, receiver: int, round_index: int
    ) -> AnonymousEntanglementResult:
        for agent, policy in self.policies.items():
            for gate in pre_ae_gates(policy, agent, self.config.n):
                state = apply_gate(state, agent, gate)
        result = anonymous_entanglement(to_ghz_frame(state), sender, receiver, self.rng)
        if self.simulated:
            self.fabric.enter_phase(f"round:{round_index}:anonymous_entanglement")
            order = [a for a in range(1, self.config.n + 1) if a not in (sender, receiver)] + [sender, receiver]
            self.fabric.broadcast_ordered(Ordering(tuple(order)), result.broadcasts)
        return result

    def run(self) -> ProtocolRun:
        config = self.config
        start = time.perf_counter()
        with _tracer.start_as_current_span("protocol5.run") as span:
            span.set_attribute("n", config.n)
            span.set_attribute("k", config.k)
            span.set_attribute("S", config.S)
            span.set_attribute("seed", str(config.seed))
            span.set_attribute("classical_mode", config.classical_mode)

            sender, receiver = self._choose_endpoints()
            notified = self._notify(sender, receiver)
            rounds: list[RoundOutcome] = []
            result: Result[AnonymousEntanglementResult, AbortReason] = Result.failure(AbortReason.ROUND_LIMIT)

            for round_index in range(1, config.max_rounds + 1):
                state = self.source.emit(self.rng)
                coin = self._random_bit(sender, round_index)
                if not coin.consistent:
                    rounds.append(
                        RoundOutcome(
                            round_index,
                            Branch.VERIFY if coin.output else Branch.USE,
                            aborted=True,
                            abort_reason=AbortReason.SENDER_INCONSISTENCY,
                        )
                    )
                    result = Result.failure(AbortReason.SENDER_INCONSISTENCY)
                    break

                if coin.output == 0:
                    used_fprime = fprime(state, config.malicious).fprime
                    pair = self._entangle(state, sender, receiver, round_index)
                    rounds.append(
                        RoundOutcome(
                            round_index,
                            Branch.USE,
                            used_state_fprime=used_fprime,
                            c_epsilon=used_fprime <= self.threshold + C_EPSILON_SLACK,
                        )
                    )
                    result = Result.success(pair)
                    break

                pick = self._random_agent(sender, round_index)
                if not pick.consistent:
                    rounds.append(
                        RoundOutcome(
                            round_index, Branch.VERIFY, aborted=True, abort_reason=AbortReason.SENDER_INCONSISTENCY
                        )
                    )
                    result = Result.failure(AbortReason.SENDER_INCONSISTENCY)
                    break

                verification = self._verify(state, pick.chosen, round_index)
                verdict = verifier_verdict(
                    config.policy_for(pick.chosen), pick.chosen, config.n, verification.passed
                )
                vc = get_verification_counter()
                if vc is not None:
                    vc.add(1, {"passed": verdict})
                span.add_event("protocol5.round", {"round": round_index, "verifier": pick.chosen, "passed": verdict})

                if verdict:
                    rounds.append(RoundOutcome(round_index, Branch.VERIFY, verifier=pick.chosen, passed=True))
                    continue
                reason = AbortReason.POLICY if verification.honest_pass else AbortReason.VERIFICATION_FAILED
                rounds.append(
                    RoundOutcome(
                        round_index,
                        Branch.VERIFY,
                        verifier=pick.chosen,
                        passed=False,
                        aborted=True,
                        abort_reason=reason,
                    )
                )
                result = Result.failure(reason)
                break
            else:
                rounds.append(
                    RoundOutcome(config.max_rounds, Branch.VERIFY, aborted=True, abort_reason=AbortReason.ROUND_LIMIT)
                )

            run = ProtocolRun(
                config=config,
                sender=sender,
                receiver=receiver,
                receiver_notified=notified,
                rounds=rounds,
                result=result,
                transcript=self.fabric.transcript if config.record_transcript and self.simulated else None,
            )

            elapsed_ms = (time.perf_counter() - start) * 1000
            span.set_attribute("outcome", run.outcome)
            span.set_attribute("rounds", run.round_count)
            span.set_attribute("c_epsilon", run.c_epsilon)
            span.set_attribute("elapsed_ms", elapsed_ms)

            rc = get_run_counter()
            if rc is not None:
                rc.add(1, {"outcome": run.outcome})
            rh = get_round_histogram()
            if rh is not None:
                rh.record(run.round_count)

            logger.debug("protocol run seed=%d ended %s after %d rounds", config.seed, run.outcome, run.round_count)
            return run


def run_protocol5(config: ProtocolConfig) -> ProtocolRun:
    return DistributionEngine(config).run()


def derive_seeds(seed: int, executions: int) -> list[int]:
    """Independent 64-bit seeds for a batch, stable for a given root seed."""
    children = np.random.SeedSequence(seed).spawn(executions)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]


def run_batch(
    config: ProtocolConfig,
    executions: int,
    workers: int = 1,
    reducer: Callable[[ProtocolRun], ProtocolRun] | None = None,
) -> list[ProtocolRun]:
    """Run `executions` independent copies of `config`, ordered by execution index.

    `reducer` may strip heavy fields (such as transcripts) from each run.
    """
    if executions < 1:
        raise InvalidArgumentError(f"executions must be >= 1, got {executions}")
    configs = [config.model_copy(update={"seed": s}) for s in derive_seeds(config.seed, executions)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(run_protocol5, configs, chunksize=max(1, executions // (4 * workers))))
    else:
        runs = [run_protocol5(c) for c in configs]
    return [reducer(r) for r in runs] if reducer else runs


def teleport_message(
    run: ProtocolRun, message: StateVector, rng: np.random.Generator
) -> Result[tuple[StateVector, tuple[int, int]], AbortReason]:
    """Teleport `message` over the pair a successful run established."""
    return run.result.map(lambda pair: teleport(message, pair.pair_state, rng))


def export_run(run: ProtocolRun, path: Path) -> Path:
    """Write a run's transcript with a header that lets `replay_run` re-execute it."""
    if run.transcript is None:
        raise InvalidArgumentError("run has no transcript; use classical_mode='simulated' with record_transcript")
    header = {
        "seed": run.config.seed,
        "config": run.config.model_dump(mode="json"),
        "outcome": run.outcome,
        "rounds": run.round_count,
    }
    run.transcript.export_jsonl(path, header)
    return path


def replay_run(path: Path) -> tuple[ProtocolRun, bool]:
    """Re-execute a recorded run and report whether every record matches."""
    header, recorded = Transcript.load_jsonl(path)
    if "config" not in header:
        raise InvalidArgumentError(f"{path} has no replay header")
    config = ProtocolConfig.model_validate(header["config"])
    run = run_protocol5(config)
    identical = run.transcript is not None and run.transcript.records() == recorded.records()
    if not identical:
        logger.warning("replay of %s diverged from the recorded transcript", path)
    return run, identical
