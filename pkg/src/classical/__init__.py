"""Classical anonymous protocols over the network fabric."""

from src.classical.models import (
    NotificationRun,
    OrRun,
    ParityRun,
    RandomAgentRun,
    RandomBitDistribution,
    RandomBitRun,
)
from src.classical.protocols import (
    NO_HOOKS,
    AgentHooks,
    logical_or,
    notification,
    parity,
    random_agent,
    random_bit,
)

__all__ = [
    "NO_HOOKS",
    "AgentHooks",
    "NotificationRun",
    "OrRun",
    "ParityRun",
    "RandomAgentRun",
    "RandomBitDistribution",
    "RandomBitRun",
    "logical_or",
    "notification",
    "parity",
    "random_agent",
    "random_bit",
]
