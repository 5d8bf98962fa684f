"""Root pytest configuration.

OpenTelemetry providers can be installed only once per process, so one
in-memory capture is shared by the whole session and spans are cleared
between tests.
"""

from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np
import pytest
from opentelemetry import metrics, trace
from opentelemetry.sdk.metrics import MeterProvider
from opentelemetry.sdk.metrics.export import InMemoryMetricReader
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import SimpleSpanProcessor

from src.telemetry import create_instruments
from tests.helpers import InMemorySpanExporter


@dataclass(frozen=True)
class OtelCapture:
    spans: InMemorySpanExporter
    metrics: InMemoryMetricReader


@pytest.fixture(scope="session", autouse=True)
def otel_capture() -> Iterator[OtelCapture]:
    capture = OtelCapture(InMemorySpanExporter(), InMemoryMetricReader())

    tracer_provider = TracerProvider()
    tracer_provider.add_span_processor(SimpleSpanProcessor(capture.spans))
    trace.set_tracer_provider(tracer_provider)

    meter_provider = MeterProvider(metric_readers=[capture.metrics])
    metrics.set_meter_provider(meter_provider)
    create_instruments(metrics.get_meter("anonq-tests"))

    yield capture

    tracer_provider.shutdown()
    meter_provider.shutdown()


@pytest.fixture(autouse=True)
def _fresh_spans(otel_capture: OtelCapture) -> None:
    otel_capture.spans.clear()


@pytest.fixture()
def otel_exporter(otel_capture: OtelCapture) -> InMemorySpanExporter:
    return otel_capture.spans


@pytest.fixture()
def metric_reader(otel_capture: OtelCapture) -> InMemoryMetricReader:
    return otel_capture.metrics


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)
