"""Seeded Monte Carlo and exact drivers, one per experiment kind.

Each driver evaluates a single grid point from its own derived seed, so grid
points can run in any order or in parallel without changing a byte of output.
"""

import itertools
import logging
import math
import time
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from src.adversary import (
    WORST_CASE_POLICY,
    SourceKind,
    SourceStrategy,
    build_sender_ensemble,
    craft_state_with_fprime,
    helstrom_guess_prob,
    pairwise_fidelities,
    pgm_guess_prob,
    rigorous_pairwise_floor,
)
from src.classical.protocols import logical_or, notification, parity
from src.errors import ImprobableFailureError, InvalidArgumentError
from src.network import NetworkFabric, default_orderings
from src.orchestrator import ProtocolConfig, derive_seeds, fidelity_threshold, run_batch, theorem1_bound
from src.quantum.fidelity import fprime, search_fprime
from src.quantum.protocols import (
    ae_branch_fidelities,
    anonymous_entanglement,
    estimate_pass_probability,
    exact_pass_probability,
    noisy_ghz,
    verification_round,
)
from src.quantum.state import StateVector, make_ghz, make_phi, random_state
from src.telemetry import get_experiment_latency, get_tracer

from .models import ExperimentKind, ExperimentResult, ExperimentRow, ExperimentSpec, GridPoint, Measurement
from .stats import mean_interval, wilson_interval

logger = logging.getLogger(__name__)

_tracer = get_tracer("anon-quantum-transmission.harness")

Driver = Callable[[ExperimentSpec, GridPoint, int], list[Measurement]]

AE_FIDELITY_SLACK = 0.01
EXACT_TOLERANCE = 1e-9
ORACLE_TOLERANCE = 1e-6
MAX_ORACLE_MALICIOUS = 2
EXHAUSTIVE_PARITY_MAX_N = 5
EXHAUSTIVE_AE_MAX_N = 5
_MAX_REJECTIONS_PER_STATE = 1000


def _agents(point: GridPoint) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Honest agents are 1..k, malicious ones k+1..n."""
    k = point.k if point.k is not None else point.n
    return tuple(range(1, k + 1)), tuple(range(k + 1, point.n + 1))


def _require(point: GridPoint, *names: str) -> None:
    missing = [name for name in names if getattr(point, name) is None]
    if missing:
        raise InvalidArgumentError(f"grid point {point.index} has no value for {', '.join(missing)}")


def run_theorem1(spec: ExperimentSpec, point: GridPoint, seed: int) -> list[Measurement]:
    """Pr[C_eps] for a bounded-fidelity source and verifiers that always accept."""
    _require(point, "S", "epsilon")
    assert point.S is not None and point.epsilon is not None
    honest, malicious = _agents(point)
    config = ProtocolConfig(
        n=point.n,
        honest_set=honest,
        S=point.S,
        epsilon=point.epsilon,
        delta=spec.delta,
        seed=seed,
        source=SourceStrategy(kind=SourceKind.BOUNDED_FIDELITY, target_fprime=fidelity_threshold(point.epsilon)),
        policies={a: WORST_CASE_POLICY for a in malicious},
        classical_mode="ideal",
        record_transcript=False,
    )
    runs = run_batch(config, spec.trials)
    hits = wilson_interval(sum(run.c_epsilon for run in runs), spec.trials)
    aborts = wilson_interval(sum(run.aborted for run in runs), spec.trials)
    bound = theorem1_bound(point.n, point.S, point.epsilon)
    if bound.vacuous:
        logger.info("theorem1 bound %.4f is vacuous at n=%d S=%d", bound.value, point.n, point.S)
    return [
        Measurement("pr_c_epsilon", hits.estimate, hits.ci_low, hits.ci_high, bound.value, "upper", spec.trials),
        Measurement("abort_rate", aborts.estimate, aborts.ci_low, aborts.ci_high, trials=spec.trials),
    ]


def run_guess_bound(spec: ExperimentSpec, point: GridPoint, seed: int) -> list[Measurement]:
    """Sender-guessing success against a state crafted at F' = sqrt(1 - eps^2)."""
    _require(point, "epsilon")
    assert point.epsilon is not None
    honest, malicious = _agents(point)
    k = len(honest)
    bound = 1.0 / k + point.epsilon
    state = craft_state_with_fprime(point.n, malicious, fidelity_threshold(point.epsilon))
    ensemble = build_sender_ensemble(state, honest)

    out: list[Measurement] = []
    if k == 2:
        out.append(Measurement.exact("helstrom_guess", helstrom_guess_prob(*ensemble.candidates), bound, "upper"))
    out.append(Measurement.exact("pgm_guess", pgm_guess_prob(ensemble), bound, "upper"))
    if k >= 2:
        closest = min(pairwise_fidelities(ensemble).values())
        out.append(Measurement.exact("pairwise_fidelity_min", closest, 1.0 - point.epsilon**2, "none"))
    return out


def run_soundness(spec: ExperimentSpec, point: GridPoint, seed: int) -> list[Measurement]:
    """Pass probability of random states against the 3/4 + F'/4 ceiling.

    Reported as the worst margin P - (3/4 + F'/4) over all states; the sampled
    row passes when no state's interval lies wholly above its ceiling.
    """
    rng = np.random.default_rng(seed)
    _, malicious = _agents(point)
    worst: tuple[float, float, float] | None = None
    worst_exact = -1.0
    for _ in range(spec.trials):
        state = random_state(point.n, rng)
        ceiling = 0.75 + fprime(state, malicious).fprime / 4
        sampled = estimate_pass_probability(state, spec.samples, rng)
        margin = (sampled.estimate - ceiling, sampled.ci_low - ceiling, sampled.ci_high - ceiling)
        if worst is None or margin[1] > worst[1]:
            worst = margin
        worst_exact = max(worst_exact, exact_pass_probability(state) - ceiling)
    assert worst is not None
    return [
        Measurement("pass_minus_ceiling_max", *worst, bound=0.0, bound_kind="upper", trials=spec.trials),
        Measurement.exact("exact_pass_minus_ceiling_max", worst_exact, 0.0, "upper", trials=spec.trials),
    ]


def _endpoints(n: int, rng: np.random.Generator) -> tuple[int, int]:
    sender, receiver = rng.choice(np.arange(1, n + 1), size=2, replace=False)
    return int(sender), int(receiver)


def run_ae_fidelity(spec: ExperimentSpec, point: GridPoint, seed: int) -> list[Measurement]:
    """Anonymous entanglement on perfect and noisy GHZ inputs."""
    rng = np.random.default_rng(seed)
    n = point.n
    out: list[Measurement] = []

    ghz = make_ghz(n)
    if n <= EXHAUSTIVE_AE_MAX_N:
        pairs = list(itertools.permutations(range(1, n + 1), 2))
        floor = min(b.fidelity for s, r in pairs for b in ae_branch_fidelities(ghz, s, r))
        out.append(Measurement.exact("ghz_branch_fidelity_min", floor, 1.0 - EXACT_TOLERANCE, "lower"))
    else:
        floor = min(
            anonymous_entanglement(ghz, *_endpoints(n, rng), rng).epr_fidelity for _ in range(spec.trials)
        )
        out.append(Measurement.exact("ghz_sampled_fidelity_min", floor, 1.0 - EXACT_TOLERANCE, "lower", spec.trials))

    for target in spec.fidelities:
        values = [
            anonymous_entanglement(noisy_ghz(n, target, rng, kind="random"), *_endpoints(n, rng), rng).epr_fidelity
            for _ in range(spec.trials)
        ]
        mean = mean_interval(values)
        out.append(
            Measurement(
                f"mean_epr_fidelity@{target:g}",
                mean.mean,
                mean.ci_low,
                mean.ci_high,
                target - AE_FIDELITY_SLACK,
                "lower",
                spec.trials,
            )
        )
    return out


def run_classical_probs(spec: ExperimentSpec, point: GridPoint, seed: int) -> list[Measurement]:
    """Parity exactness, LogicalOR success rate and Notification outputs."""
    _require(point, "S")
    assert point.S is not None
    rng = np.random.default_rng(seed)
    n, S = point.n, point.S
    success = 1.0 - 2.0**-S
    out: list[Measurement] = []

    if n <= EXHAUSTIVE_PARITY_MAX_N:
        inputs = list(itertools.product((0, 1), repeat=n))
        correct = 0
        for bits in inputs:
            run = parity(NetworkFabric.for_agents(n), bits, rng)
            correct += all(v == sum(bits) % 2 for v in run.outputs.values())
        out.append(Measurement.exact("parity_correct_fraction", correct / len(inputs), 1.0, "lower", len(inputs)))

    single = default_orderings(n)[:1]
    or_hits = 0
    for _ in range(spec.trials):
        or_inputs = [1] + [0] * (n - 1)
        or_hits += logical_or(NetworkFabric.for_agents(n), or_inputs, S, rng, orderings=single).result
    est = wilson_interval(or_hits, spec.trials)
    out.append(Measurement("or_success_rate", est.estimate, est.ci_low, est.ci_high, success, "two_sided", spec.trials))

    notified = 0
    leaked = 0
    for _ in range(spec.trials):
        sender, receiver = _endpoints(n, rng)
        run = notification(NetworkFabric.for_agents(n), sender, receiver, S, rng)
        notified += run.outputs[receiver]
        leaked += any(y for agent, y in run.outputs.items() if agent != receiver)
    est = wilson_interval(notified, spec.trials)
    out.append(
        Measurement(
            "notification_receiver_rate", est.estimate, est.ci_low, est.ci_high, success, "two_sided", spec.trials
        )
    )
    est = wilson_interval(leaked, spec.trials)
    out.append(Measurement("notification_other_rate", est.estimate, est.ci_low, est.ci_high, 0.0, "upper", spec.trials))
    return out


def honest_success_floor(n: int, S: int) -> float:
    """Union bound on an honest run finishing without a sender-inconsistency abort.

    The run lasts 2^S rounds on average; each round has one RandomBit and, when
    verifying, at most 2*ceil(log2 n) expected RandomBit calls inside RandomAgent.
    Each call misreports a 1 with probability 2^(-S*n).
    """
    calls_per_round = 1 + 2 * math.ceil(math.log2(n))
    return max(0.0, 1.0 - 2.0**S * calls_per_round * 2.0 ** (-S * n))


def run_full(spec: ExperimentSpec, point: GridPoint, seed: int) -> list[Measurement]:
    """End-to-end runs with an honest source and every classical step simulated."""
    _require(point, "S", "epsilon")
    assert point.S is not None and point.epsilon is not None
    honest, _ = _agents(point)
    config = ProtocolConfig(
        n=point.n,
        honest_set=honest,
        S=point.S,
        epsilon=point.epsilon,
        delta=spec.delta,
        seed=seed,
        classical_mode="simulated",
        record_transcript=False,
    )
    runs = run_batch(config, spec.trials)
    succeeded = [run for run in runs if not run.aborted]
    out: list[Measurement] = []

    rate = wilson_interval(len(succeeded), spec.trials)
    floor = honest_success_floor(point.n, point.S)
    out.append(Measurement("success_rate", rate.estimate, rate.ci_low, rate.ci_high, floor, "lower", spec.trials))
    if succeeded:
        worst = min(run.result.unwrap().epr_fidelity for run in succeeded)
        out.append(Measurement.exact("epr_fidelity_min", worst, 1.0 - EXACT_TOLERANCE, "lower", len(succeeded)))

    rounds = mean_interval([float(run.round_count) for run in runs])
    out.append(
        Measurement("mean_rounds", rounds.mean, rounds.ci_low, rounds.ci_high, 2.0**point.S, "two_sided", spec.trials)
    )
    notified = wilson_interval(sum(run.receiver_notified for run in runs), spec.trials)
    out.append(
        Measurement(
            "receiver_notified_rate",
            notified.estimate,
            notified.ci_low,
            notified.ci_high,
            1.0 - 2.0**-point.S,
            "two_sided",
            spec.trials,
        )
    )
    return out


def _near_ideal_state(n: int, floor: float, malicious: tuple[int, ...], rng: np.random.Generator) -> StateVector:
    """Random state with F' >= floor: Phi_0^n blended with a Haar direction."""
    base = make_phi(n, 0).amplitudes
    for _ in range(_MAX_REJECTIONS_PER_STATE):
        weight = rng.uniform(floor, 1.0)
        noise = random_state(n, rng).amplitudes
        state = StateVector.from_unnormalized(n, np.sqrt(weight) * base + np.sqrt(1.0 - weight) * noise)
        if fprime(state, malicious).fprime >= floor:
            return state
    raise ImprobableFailureError(f"no state with F' >= {floor} after {_MAX_REJECTIONS_PER_STATE} draws")


def run_pairwise_fidelity(spec: ExperimentSpec, point: GridPoint, seed: int) -> list[Measurement]:
    """Closeness of the candidate post-sender states for states with high F'.

    The verdict uses the floor (2F' - 1)^2 that holds for every state; how many
    states fall below 1 - eps^2 is reported alongside.
    """
    _require(point, "epsilon")
    assert point.epsilon is not None
    rng = np.random.default_rng(seed)
    honest, malicious = _agents(point)
    floor = fidelity_threshold(point.epsilon)
    worst_margin = 1.0
    below = 0
    for _ in range(spec.trials):
        state = _near_ideal_state(point.n, floor, malicious, rng)
        value = fprime(state, malicious).fprime
        closest = min(pairwise_fidelities(build_sender_ensemble(state, honest)).values())
        worst_margin = min(worst_margin, closest - rigorous_pairwise_floor(value))
        below += closest < 1.0 - point.epsilon**2 - EXACT_TOLERANCE
    return [
        Measurement.exact("pairwise_minus_floor_min", worst_margin, -EXACT_TOLERANCE, "lower", spec.trials),
        Measurement.exact("fraction_below_one_minus_eps_sq", below / spec.trials, None, "none", spec.trials),
    ]


def run_fprime_oracle(spec: ExperimentSpec, point: GridPoint, seed: int) -> list[Measurement]:
    """Closed-form F' against an independent randomized unitary search."""
    rng = np.random.default_rng(seed)
    _, malicious = _agents(point)
    gap = 0.0
    for _ in range(spec.trials):
        state = random_state(point.n, rng)
        gap = max(gap, abs(fprime(state, malicious).fprime - search_fprime(state, malicious, rng)))
    return [Measurement.exact("fprime_search_gap_max", gap, ORACLE_TOLERANCE, "upper", spec.trials)]


def run_verification_completeness(spec: ExperimentSpec, point: GridPoint, seed: int) -> list[Measurement]:
    """Failure rate of verification on the ideal state (expected zero)."""
    rng = np.random.default_rng(seed)
    ideal = make_phi(point.n, 0)
    failures = sum(not verification_round(ideal, t % point.n + 1, rng).passed for t in range(spec.trials))
    est = wilson_interval(failures, spec.trials)
    return [
        Measurement("failure_rate", est.estimate, est.ci_low, est.ci_high, 0.0, "upper", spec.trials),
        Measurement.exact("exact_failure_probability", 1.0 - exact_pass_probability(ideal), 0.0, "upper"),
    ]


experiment_drivers: dict[ExperimentKind, Driver] = {
    ExperimentKind.THEOREM1: run_theorem1,
    ExperimentKind.GUESS_BOUND: run_guess_bound,
    ExperimentKind.SOUNDNESS: run_soundness,
    ExperimentKind.AE_FIDELITY: run_ae_fidelity,
    ExperimentKind.CLASSICAL_PROBS: run_classical_probs,
    ExperimentKind.FULL_RUN: run_full,
    ExperimentKind.PAIRWISE_FIDELITY: run_pairwise_fidelity,
    ExperimentKind.FPRIME_ORACLE: run_fprime_oracle,
    ExperimentKind.VERIFICATION_COMPLETENESS: run_verification_completeness,
}


def check_grid(spec: ExperimentSpec) -> list[GridPoint]:
    """Reject grids a driver cannot evaluate before any work starts."""
    points = spec.grid()
    for point in points:
        honest, malicious = _agents(point)
        if spec.experiment == ExperimentKind.FPRIME_ORACLE and len(malicious) > MAX_ORACLE_MALICIOUS:
            raise InvalidArgumentError(
                f"fprime_oracle supports at most {MAX_ORACLE_MALICIOUS} malicious agents, got {len(malicious)}"
            )
        if spec.experiment == ExperimentKind.PAIRWISE_FIDELITY and len(honest) < 2:
            raise InvalidArgumentError(f"pairwise_fidelity needs k >= 2, got k={len(honest)}")
    return points


def _run_point(task: tuple[ExperimentSpec, GridPoint, int]) -> tuple[list[ExperimentRow], float]:
    spec, point, seed = task
    start = time.perf_counter()
    with _tracer.start_as_current_span("experiment.run") as span:
        span.set_attribute("experiment", str(spec.experiment))
        span.set_attribute("point", point.index)
        span.set_attribute("n", point.n)
        for name in ("k", "S", "epsilon"):
            value = getattr(point, name)
            if value is not None:
                span.set_attribute(name, value)
        span.set_attribute("seed", str(seed))

        measurements = experiment_drivers[spec.experiment](spec, point, seed)
        rows = [ExperimentRow.from_measurement(spec.experiment, point, seed, m) for m in measurements]

        elapsed = time.perf_counter() - start
        span.set_attribute("failures", sum(r.verdict == "fail" for r in rows))
        latency = get_experiment_latency()
        if latency is not None:
            latency.record(elapsed * 1000, {"experiment": str(spec.experiment)})
    logger.info("%s point %d (n=%d) done in %.2fs", spec.experiment, point.index, point.n, elapsed)
    return rows, elapsed


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> ExperimentResult:
    """Evaluate every grid point and collect rows in grid order.

    Grid point i runs from the i-th seed spawned off `spec.seed`; `workers > 1`
    spreads points over processes without changing the result.
    """
    points = check_grid(spec)
    tasks = [(spec, point, seed) for point, seed in zip(points, derive_seeds(spec.seed, len(points)), strict=True)]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_point, tasks))
    else:
        outcomes = [_run_point(task) for task in tasks]
    rows = tuple(row for point_rows, _ in outcomes for row in point_rows)
    return ExperimentResult(spec=spec, rows=rows, durations=tuple(elapsed for _, elapsed in outcomes))
