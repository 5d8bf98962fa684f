"""Classical anonymous protocols: Parity, LogicalOR, RandomBit, RandomAgent, Notification.

Each protocol runs message by message over a `NetworkFabric`. Malicious
behaviour enters only through `AgentHooks`; the honest code path is shared.
The `ideal_*` functions sample the same outputs from their exact functional
distributions without touching the network.
"""

import logging
import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from src.errors import ImprobableFailureError, InvalidArgumentError
from src.network import AnnounceHook, NetworkFabric, Ordering, default_orderings

from .models import (
    NotificationRun,
    OrRun,
    ParityRun,
    RandomAgentRun,
    RandomBitDistribution,
    RandomBitRun,
)

logger = logging.getLogger(__name__)

MAX_AGENT_ATTEMPTS = 64

# (agent, input bit, rng) -> n share bits the agent sends to agents 1..n
ShareHook = Callable[[int, int, np.random.Generator], Sequence[int]]
# (agent, bit the protocol asks for) -> bit the agent actually uses
InputHook = Callable[[int, int], int]


@dataclass(frozen=True)
class AgentHooks:
    """Per-agent deviations injected into the classical protocols."""

    announce: Mapping[int, AnnounceHook] = field(default_factory=dict)
    shares: Mapping[int, ShareHook] = field(default_factory=dict)
    or_input: Mapping[int, InputHook] = field(default_factory=dict)


NO_HOOKS = AgentHooks()


def _as_bits(inputs: Sequence[int] | Mapping[int, int], n: int) -> tuple[int, ...]:
    if isinstance(inputs, Mapping):
        values = tuple(int(inputs.get(i, 0)) for i in range(1, n + 1))
    else:
        values = tuple(int(b) for b in inputs)
    if len(values) != n:
        raise InvalidArgumentError(f"expected one input per agent ({n}), got {len(values)}")
    if any(b not in (0, 1) for b in values):
        raise InvalidArgumentError("inputs must be bits")
    return values


def honest_shares(bit: int, n: int, rng: np.random.Generator) -> list[int]:
    """n random bits whose XOR is `bit`."""
    free = [int(b) for b in rng.integers(0, 2, size=n - 1)]
    return [*free, (bit + sum(free)) % 2]


def parity(
    fabric: NetworkFabric,
    inputs: Sequence[int] | Mapping[int, int],
    rng: np.random.Generator,
    mode: Literal["simultaneous"] | Ordering = "simultaneous",
    skip_announcer: int | None = None,
    hooks: AgentHooks = NO_HOOKS,
) -> ParityRun:
    """XOR of all inputs, computed without revealing any single input.

    Each agent splits its bit into n shares and sends share j to agent j
    (itself included); agent j announces the XOR z_j of what it received.
    """
    n = fabric.n
    bits = _as_bits(inputs, n)
    shares: list[list[int]] = []
    malformed: list[int] = []
    for agent in range(1, n + 1):
        x = bits[agent - 1]
        if agent in hooks.shares:
            row = [int(b) & 1 for b in hooks.shares[agent](agent, x, rng)]
            if len(row) != n:
                raise InvalidArgumentError(f"agent {agent} produced {len(row)} shares, expected {n}")
        else:
            row = honest_shares(x, n, rng)
        if sum(row) % 2 != x:
            malformed.append(agent)
        shares.append(row)
        for recipient, share in enumerate(row, start=1):
            fabric.send_private(agent, recipient, str(share))
    if malformed:
        fabric.flag(f"parity:malformed-shares:{','.join(map(str, malformed))}")

    z: dict[int, int] = {}
    for agent in range(1, n + 1):
        received = [int(m.payload) for m in fabric.drain(agent)]
        z[agent] = sum(received) % 2

    if mode == "simultaneous":
        announced = fabric.broadcast_simultaneous(z, hooks.announce, skip=skip_announcer)
    else:
        announced = fabric.broadcast_ordered(mode, z, hooks.announce, skip=skip_announcer)

    public = sum(bit for _, bit in announced) % 2
    outputs = {a: public for a in range(1, n + 1)}
    if skip_announcer is not None:
        outputs[skip_announcer] = (public + z[skip_announcer]) % 2
    return ParityRun(
        inputs=bits,
        shares=tuple(tuple(r) for r in shares),
        announced=tuple(announced),
        outputs=outputs,
        skipped=skip_announcer,
        malformed=tuple(malformed),
    )


def logical_or(
    fabric: NetworkFabric,
    inputs: Sequence[int] | Mapping[int, int],
    S: int,
    rng: np.random.Generator,
    orderings: Sequence[Ordering] | None = None,
    full_loop: bool = False,
    hooks: AgentHooks = NO_HOOKS,
) -> OrRun:
    """OR of all inputs via repeated parities of random flips.

    Agents with input 1 flip p_i = 1 with probability 1/2, others keep 0. For
    each ordering, up to S parities are announced in that ordering; the first
    parity of 1 settles the output at 1. `full_loop` keeps running every
    repetition after that point.
    """
    if S < 1:
        raise InvalidArgumentError(f"S must be >= 1, got {S}")
    n = fabric.n
    bits = _as_bits(inputs, n)
    bits = tuple(hooks.or_input[a](a, b) & 1 if a in hooks.or_input else b for a, b in enumerate(bits, start=1))
    plan = list(orderings) if orderings is not None else default_orderings(n)

    result = 0
    flips: list[tuple[int, ...]] = []
    for ordering in plan:
        for _ in range(S):
            p = tuple(int(rng.integers(2)) if x else 0 for x in bits)
            flips.append(p)
            run = parity(fabric, p, rng, mode=ordering, hooks=hooks)
            if run.public_parity:
                result = 1
                if not full_loop:
                    break
        if result and not full_loop:
            break
    return OrRun(
        inputs=bits,
        S=S,
        flips=tuple(flips),
        outputs={a: result for a in range(1, n + 1)},
        repetitions=len(flips),
    )


def _check_sender(fabric: NetworkFabric, sender: int) -> None:
    if sender not in fabric.agents:
        raise InvalidArgumentError(f"unknown sender {sender}")
    if not fabric.agents[sender].honest:
        raise InvalidArgumentError(f"sender {sender} must be honest")


def sample_bit(d: RandomBitDistribution, rng: np.random.Generator) -> int:
    return 0 if rng.random() < d.probability_of_zero else 1


def random_bit(
    fabric: NetworkFabric,
    sender: int,
    d: RandomBitDistribution,
    S: int,
    rng: np.random.Generator,
    hooks: AgentHooks = NO_HOOKS,
    orderings: Sequence[Ordering] | None = None,
) -> RandomBitRun:
    """Anonymously publish a bit drawn by the sender from `d`; everyone else inputs 0."""
    _check_sender(fabric, sender)
    x = sample_bit(d, rng)
    inputs = {a: (x if a == sender else 0) for a in fabric.agents}
    run = logical_or(fabric, inputs, S, rng, orderings=orderings, hooks=hooks)
    return RandomBitRun(sender_input=x, output=run.result, or_run=run)


def _index_bits(n: int) -> int:
    return math.ceil(math.log2(n))


def _assemble_agent(n: int, draw_bit: Callable[[], RandomBitRun]) -> RandomAgentRun:
    if n == 1:
        return RandomAgentRun(chosen=1, bit_runs=(), attempts=0)
    width = _index_bits(n)
    runs: list[RandomBitRun] = []
    for attempt in range(1, MAX_AGENT_ATTEMPTS + 1):
        draw: list[RandomBitRun] = []
        for _ in range(width):
            bit = draw_bit()
            draw.append(bit)
            if not bit.consistent:
                return RandomAgentRun(chosen=0, bit_runs=(*runs, *draw), attempts=attempt)
        runs.extend(draw)
        index = int("".join(str(r.output) for r in draw), 2)
        if index < n:
            return RandomAgentRun(chosen=index + 1, bit_runs=tuple(runs), attempts=attempt)
        logger.debug("random agent index %d >= n=%d rejected", index, n)
    raise ImprobableFailureError(f"random agent selection rejected {MAX_AGENT_ATTEMPTS} times for n={n}")


def random_agent(
    fabric: NetworkFabric,
    sender: int,
    S: int,
    rng: np.random.Generator,
    hooks: AgentHooks = NO_HOOKS,
    orderings: Sequence[Ordering] | None = None,
) -> RandomAgentRun:
    """Uniform agent index assembled from ceil(log2 n) RandomBit runs.

    Public indices beyond n are rejected and redrawn, at most 64 times. The
    draw stops at the first bit whose public output differs from the sender's
    input; the returned run is then inconsistent and `chosen` is 0.
    """
    _check_sender(fabric, sender)
    d = RandomBitDistribution.uniform()
    return _assemble_agent(fabric.n, lambda: random_bit(fabric, sender, d, S, rng, hooks, orderings))


def notification(
    fabric: NetworkFabric,
    sender: int,
    receiver: int,
    S: int,
    rng: np.random.Generator,
    hooks: AgentHooks = NO_HOOKS,
) -> NotificationRun:
    """The sender tells `receiver` it was chosen; nobody else learns who.

    For each candidate i, S parities run with agent i silent. The sender's
    p is a fair coin when i is the receiver and 0 otherwise; only agent i
    learns the resulting y_i.
    """
    _check_sender(fabric, sender)
    if receiver not in fabric.agents:
        raise InvalidArgumentError(f"unknown receiver {receiver}")
    if S < 1:
        raise InvalidArgumentError(f"S must be >= 1, got {S}")
    ordering = Ordering(tuple(sorted(fabric.agents)))
    outputs: dict[int, int] = {}
    for candidate in sorted(fabric.agents):
        y = 0
        for _ in range(S):
            p = {a: 0 for a in fabric.agents}
            if candidate == receiver:
                p[sender] = int(rng.integers(2))
            run = parity(fabric, p, rng, mode=ordering, skip_announcer=candidate, hooks=hooks)
            y |= run.outputs[candidate]
        outputs[candidate] = y
    return NotificationRun(sender=sender, receiver=receiver, S=S, outputs=outputs)


def ideal_logical_or(inputs: Sequence[int], S: int, n_orderings: int, rng: np.random.Generator) -> int:
    """Output distribution of an honest LogicalOR: a false 0 has probability 2^(-S * orderings)."""
    if not any(inputs):
        return 0
    return 0 if rng.random() < 2.0 ** (-S * n_orderings) else 1


def ideal_random_bit(
    d: RandomBitDistribution, S: int, n_orderings: int, rng: np.random.Generator, extra_ones: bool = False
) -> RandomBitRun:
    x = sample_bit(d, rng)
    return RandomBitRun(sender_input=x, output=ideal_logical_or([x, int(extra_ones)], S, n_orderings, rng))


def ideal_random_agent(
    n: int, S: int, n_orderings: int, rng: np.random.Generator, extra_ones: bool = False
) -> RandomAgentRun:
    d = RandomBitDistribution.uniform()
    return _assemble_agent(n, lambda: ideal_random_bit(d, S, n_orderings, rng, extra_ones=extra_ones))


def ideal_notification(n: int, sender: int, receiver: int, S: int, rng: np.random.Generator) -> NotificationRun:
    outputs = {i: 0 for i in range(1, n + 1)}
    outputs[receiver] = 0 if rng.random() < 2.0**-S else 1
    return NotificationRun(sender=sender, receiver=receiver, S=S, outputs=outputs)
