"""In-process message fabric: private channels, regular and simultaneous broadcast.

Everything runs on one logical thread. Simultaneous broadcast is emulated with a
commit-then-reveal barrier: every bit is fixed before any is logged.
"""

import logging
from collections.abc import Callable, Iterable, Mapping

from src.errors import InvalidArgumentError, ProtocolViolationError

from .models import BROADCAST, AgentId, ChannelMessage, Ordering, Transcript

logger = logging.getLogger(__name__)

# (agent, announcements revealed so far this round, bit the agent would honestly send) -> announced bit
AnnounceHook = Callable[[int, list[tuple[int, int]], int], int]


class NetworkFabric:
    """Delivers messages between n agents and records them in a transcript."""

    def __init__(self, agents: Iterable[AgentId]) -> None:
        self.agents: dict[int, AgentId] = {a.index: a for a in agents}
        if not self.agents:
            raise InvalidArgumentError("a network needs at least one agent")
        if not any(a.honest for a in self.agents.values()):
            raise InvalidArgumentError("at least one agent must be honest")
        self.transcript = Transcript()
        self._next_tag = 0
        self._phase = "setup"
        self._inboxes: dict[int, list[ChannelMessage]] = {i: [] for i in self.agents}

    @classmethod
    def for_agents(cls, n: int, malicious: Iterable[int] = ()) -> "NetworkFabric":
        bad = set(malicious)
        return cls(AgentId(i, honest=i not in bad) for i in range(1, n + 1))

    @property
    def n(self) -> int:
        return len(self.agents)

    def enter_phase(self, label: str) -> None:
        self._phase = label
        self.transcript.mark(self._next_tag, label)

    def flag(self, label: str) -> None:
        """Annotate the transcript without changing the current phase."""
        self.transcript.mark(self._next_tag, label)

    def _check_agent(self, agent: int) -> None:
        if agent not in self.agents:
            raise InvalidArgumentError(f"unknown agent {agent}")

    def _log(self, sender: int, recipient: int, payload: str) -> ChannelMessage:
        message = ChannelMessage(sender, recipient, payload, self._next_tag, self._phase)
        self._next_tag += 1
        self.transcript.append(message)
        return message

    def send_private(self, sender: int, recipient: int, payload: str) -> None:
        """Deliver `payload` to `recipient` only. Self-delivery is allowed."""
        self._check_agent(sender)
        self._check_agent(recipient)
        message = self._log(sender, recipient, payload)
        self._inboxes[recipient].append(message)

    def inbox(self, agent: int) -> list[ChannelMessage]:
        self._check_agent(agent)
        return list(self._inboxes[agent])

    def drain(self, agent: int) -> list[ChannelMessage]:
        """Return and clear the agent's private inbox."""
        self._check_agent(agent)
        messages, self._inboxes[agent] = self._inboxes[agent], []
        return messages

    def observations(self, agent: int) -> list[ChannelMessage]:
        """Everything `agent` could have seen: its private messages plus all broadcasts."""
        self._check_agent(agent)
        return self.transcript.visible_to(agent)

    def _announce(
        self, agent: int, bits: Mapping[int, int], hooks: Mapping[int, AnnounceHook], seen: list[tuple[int, int]]
    ) -> int:
        self._check_agent(agent)
        if agent not in bits and agent not in hooks:
            raise ProtocolViolationError(f"agent {agent} never announced in phase {self._phase!r}")
        intended = bits.get(agent, 0)
        if agent in hooks:
            return hooks[agent](agent, list(seen), intended) & 1
        return intended & 1

    def broadcast_ordered(
        self,
        ordering: Ordering,
        bits: Mapping[int, int],
        hooks: Mapping[int, AnnounceHook] | None = None,
        skip: int | None = None,
    ) -> list[tuple[int, int]]:
        """Reveal announcements one by one in `ordering`.

        A hooked agent sees every earlier announcement of the round before
        choosing its own bit. `skip` names an agent who stays silent.
        """
        hooks = hooks or {}
        revealed: list[tuple[int, int]] = []
        for agent in ordering.agents:
            if agent == skip:
                continue
            bit = self._announce(agent, bits, hooks, revealed)
            self._log(agent, BROADCAST, str(bit))
            revealed.append((agent, bit))
        return revealed

    def broadcast_simultaneous(
        self,
        bits: Mapping[int, int],
        hooks: Mapping[int, AnnounceHook] | None = None,
        skip: int | None = None,
    ) -> list[tuple[int, int]]:
        """Commit every announcement, then reveal them together in index order.

        Hooks receive no information about the current round.
        """
        hooks = hooks or {}
        committed = [(a, self._announce(a, bits, hooks, [])) for a in sorted(self.agents) if a != skip]
        for agent, bit in committed:
            self._log(agent, BROADCAST, str(bit))
        logger.debug("simultaneous broadcast of %d bits in phase %s", len(committed), self._phase)
        return committed
