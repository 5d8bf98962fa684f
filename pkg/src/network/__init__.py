"""Deterministic message passing between protocol agents."""

from src.network.fabric import AnnounceHook, NetworkFabric
from src.network.models import BROADCAST, AgentId, ChannelMessage, Ordering, Transcript, default_orderings

__all__ = [
    "BROADCAST",
    "AgentId",
    "AnnounceHook",
    "ChannelMessage",
    "NetworkFabric",
    "Ordering",
    "Transcript",
    "default_orderings",
]
