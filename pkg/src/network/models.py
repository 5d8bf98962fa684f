from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import jsonlines

from src.errors import InvalidArgumentError

BROADCAST = 0


@dataclass(frozen=True)
class AgentId:
    """Agent j owns qubit j."""

    index: int
    honest: bool = True


@dataclass(frozen=True)
class ChannelMessage:
    """One delivered message. `recipient == BROADCAST` for public announcements."""

    sender: int
    recipient: int
    payload: str
    round_tag: int
    phase: str

    @property
    def is_broadcast(self) -> bool:
        return self.recipient == BROADCAST


@dataclass(frozen=True)
class PhaseMarker:
    round_tag: int
    label: str


@dataclass
class Transcript:
    """Ordered log of every message in one protocol execution."""

    messages: list[ChannelMessage] = field(default_factory=list)
    phases: list[PhaseMarker] = field(default_factory=list)

    def append(self, message: ChannelMessage) -> None:
        if self.messages and message.round_tag <= self.messages[-1].round_tag:
            raise InvalidArgumentError("round tags must strictly increase")
        self.messages.append(message)

    def mark(self, round_tag: int, label: str) -> None:
        self.phases.append(PhaseMarker(round_tag, label))

    def visible_to(self, agent: int) -> list[ChannelMessage]:
        return [m for m in self.messages if m.recipient in (agent, BROADCAST)]

    def broadcasts(self, phase: str | None = None) -> list[ChannelMessage]:
        return [m for m in self.messages if m.is_broadcast and (phase is None or m.phase == phase)]

    def records(self) -> list[dict[str, Any]]:
        entries: list[dict[str, Any]] = [{"kind": "phase", **asdict(p)} for p in self.phases]
        entries += [{"kind": "message", **asdict(m)} for m in self.messages]
        # Phases and messages interleave by tag; a phase marker precedes the message carrying its tag.
        entries.sort(key=lambda e: (e["round_tag"], 0 if e["kind"] == "phase" else 1))
        return entries

    def export_jsonl(self, path: Path, header: dict[str, Any] | None = None) -> None:
        """Write one JSON object per line; the first line is the replay header."""
        path.parent.mkdir(parents=True, exist_ok=True)
        with jsonlines.open(path, mode="w") as writer:
            writer.write({"kind": "header", **(header or {})})
            writer.write_all(self.records())

    @classmethod
    def load_jsonl(cls, path: Path) -> tuple[dict[str, Any], "Transcript"]:
        header: dict[str, Any] = {}
        transcript = cls()
        with jsonlines.open(path) as reader:
            for entry in reader:
                kind = entry.pop("kind", None)
                if kind == "header":
                    header = entry
                elif kind == "phase":
                    transcript.mark(entry["round_tag"], entry["label"])
                elif kind == "message":
                    transcript.append(ChannelMessage(**entry))
                else:
                    raise InvalidArgumentError(f"unknown transcript record kind {kind!r} in {path}")
        return header, transcript


@dataclass(frozen=True)
class Ordering:
    """An announcement order for regular broadcast; `last` speaks after everyone else."""

    agents: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.agents or len(set(self.agents)) != len(self.agents):
            raise InvalidArgumentError("an ordering must be a non-empty permutation of agents")

    @property
    def last(self) -> int:
        return self.agents[-1]


def default_orderings(n: int) -> list[Ordering]:
    """Ordering t is the rotation (t+1, ..., n, 1, ..., t), so agent t is last."""
    if n < 1:
        raise InvalidArgumentError(f"need at least one agent, got {n}")
    agents = list(range(1, n + 1))
    return [Ordering(tuple(agents[t:] + agents[:t])) for t in range(1, n + 1)]
