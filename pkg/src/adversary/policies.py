"""Malicious agent behaviour, dispatched per protocol hook point."""

from collections.abc import Mapping

from src.classical.protocols import AgentHooks, InputHook
from src.network import AnnounceHook
from src.quantum.protocols import ReportHook
from src.quantum.state import Gate2x2

from .models import HookPoint, MaliciousAgentPolicy, PolicyContext

PolicyAction = int | bool | list[Gate2x2]


def apply_malicious_policy(hook: HookPoint, policy: MaliciousAgentPolicy, context: PolicyContext) -> PolicyAction:
    """What `policy` does at `hook` given what the agent currently knows."""
    match hook:
        case HookPoint.OR_INPUT:
            return 1 - context.intended_bit if policy.flip_or_inputs else context.intended_bit
        case HookPoint.OR_ANNOUNCE:
            # Last speaker cancels the parity of everything announced before it.
            if policy.force_zero_when_last and len(context.seen) == context.n - 1:
                return sum(bit for _, bit in context.seen) % 2
            return context.intended_bit
        case HookPoint.VERIFICATION_REPORT:
            return 1 - context.intended_bit if policy.lie_in_verification else context.intended_bit
        case HookPoint.VERIFIER_ACCEPTANCE:
            return True if policy.verifier_always_accepts else context.honest_verdict
        case HookPoint.PRE_AE_UNITARY:
            return policy.gates()
    raise ValueError(f"unhandled hook point {hook}")


def _or_input_hook(policy: MaliciousAgentPolicy, n: int) -> InputHook:
    def hook(agent: int, bit: int) -> int:
        return int(apply_malicious_policy(HookPoint.OR_INPUT, policy, PolicyContext(agent, n, intended_bit=bit)))

    return hook


def _announce_hook(policy: MaliciousAgentPolicy, n: int) -> AnnounceHook:
    def hook(agent: int, seen: list[tuple[int, int]], intended: int) -> int:
        context = PolicyContext(agent, n, intended_bit=intended, seen=tuple(seen))
        return int(apply_malicious_policy(HookPoint.OR_ANNOUNCE, policy, context))

    return hook


def _report_hook(policy: MaliciousAgentPolicy, n: int) -> ReportHook:
    def hook(agent: int, bit: int) -> int:
        context = PolicyContext(agent, n, intended_bit=bit)
        return int(apply_malicious_policy(HookPoint.VERIFICATION_REPORT, policy, context))

    return hook


def classical_hooks(policies: Mapping[int, MaliciousAgentPolicy], n: int) -> AgentHooks:
    """Hooks for the classical protocols, installed only where a policy deviates."""
    return AgentHooks(
        announce={a: _announce_hook(p, n) for a, p in policies.items() if p.force_zero_when_last},
        or_input={a: _or_input_hook(p, n) for a, p in policies.items() if p.flip_or_inputs},
    )


def verification_hooks(policies: Mapping[int, MaliciousAgentPolicy], n: int) -> dict[int, ReportHook]:
    return {a: _report_hook(p, n) for a, p in policies.items() if p.lie_in_verification}


def verifier_verdict(policy: MaliciousAgentPolicy | None, verifier: int, n: int, honest_verdict: bool) -> bool:
    """Verdict announced by the verifier; honest verifiers report what they computed."""
    if policy is None:
        return honest_verdict
    context = PolicyContext(verifier, n, honest_verdict=honest_verdict)
    return bool(apply_malicious_policy(HookPoint.VERIFIER_ACCEPTANCE, policy, context))


def pre_ae_gates(policy: MaliciousAgentPolicy, agent: int, n: int) -> list[Gate2x2]:
    action = apply_malicious_policy(HookPoint.PRE_AE_UNITARY, policy, PolicyContext(agent, n))
    assert isinstance(action, list)
    return action
