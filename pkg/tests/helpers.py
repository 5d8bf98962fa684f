"""Shared test utilities: span capture and small state builders."""

from collections.abc import Sequence
from typing import Any

import numpy as np
from opentelemetry.sdk.trace.export import SpanExporter, SpanExportResult

from src.quantum.state import StateVector


class InMemorySpanExporter(SpanExporter):
    """Keeps finished spans in memory so tests can inspect them."""

    def __init__(self) -> None:
        self.spans: list[Any] = []

    def export(self, spans: Sequence[object]) -> SpanExportResult:
        self.spans.extend(spans)
        return SpanExportResult.SUCCESS

    def shutdown(self) -> None:
        self.spans.clear()

    def force_flush(self, timeout_millis: int | None = None) -> bool:
        return True

    def get_spans(self) -> list[Any]:
        return list(self.spans)

    def named(self, name: str) -> list[Any]:
        return [s for s in self.spans if s.name == name]

    def clear(self) -> None:
        self.spans.clear()


def metric_points(reader: Any, name: str) -> list[Any]:
    """Data points recorded so far for the metric called `name`."""
    data = reader.get_metrics_data()
    points: list[Any] = []
    if data is None:
        return points
    for resource in data.resource_metrics:
        for scope in resource.scope_metrics:
            for metric in scope.metrics:
                if metric.name == name:
                    points.extend(metric.data.data_points)
    return points


def state_from(n: int, amplitudes: dict[str, complex]) -> StateVector:
    """Normalized state from a sparse {bit label: amplitude} map."""
    vec = np.zeros(2**n, dtype=np.complex128)
    for bits, amp in amplitudes.items():
        vec[int(bits, 2)] = amp
    return StateVector.from_unnormalized(n, vec)
