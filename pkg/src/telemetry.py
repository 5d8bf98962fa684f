"""OpenTelemetry wiring for protocol runs and experiments.

Nothing is exported unless `OTEL_ENABLED=true`. Until `create_instruments`
runs, the metric getters return None and callers skip recording.
"""

import logging
from dataclasses import dataclass
from typing import Any

from opentelemetry import metrics, trace

from src.settings import TelemetrySettings

logger = logging.getLogger(__name__)


@dataclass
class _Instruments:
    runs: Any = None
    rounds: Any = None
    verifications: Any = None
    experiment_latency: Any = None


_instruments = _Instruments()


def create_instruments(meter: Any) -> None:
    """Bind the package's counters and histograms to `meter`."""
    _instruments.runs = meter.create_counter(
        name="anonq.protocol.runs.total", description="Completed protocol executions by outcome", unit="1"
    )
    _instruments.rounds = meter.create_histogram(
        name="anonq.protocol.rounds", description="Rounds executed before the protocol stopped", unit="1"
    )
    _instruments.verifications = meter.create_counter(
        name="anonq.verification.total", description="Verification rounds by pass/fail", unit="1"
    )
    _instruments.experiment_latency = meter.create_histogram(
        name="anonq.experiment.duration", description="Time to evaluate one experiment grid point", unit="ms"
    )


def _install_exporters(settings: TelemetrySettings) -> None:
    from opentelemetry.exporter.otlp.proto.grpc._log_exporter import OTLPLogExporter
    from opentelemetry.exporter.otlp.proto.grpc.metric_exporter import OTLPMetricExporter
    from opentelemetry.exporter.otlp.proto.grpc.trace_exporter import OTLPSpanExporter
    from opentelemetry.instrumentation.logging import LoggingInstrumentor
    from opentelemetry.sdk._logs import LoggerProvider, LoggingHandler
    from opentelemetry.sdk._logs.export import SimpleLogRecordProcessor
    from opentelemetry.sdk.metrics import MeterProvider
    from opentelemetry.sdk.metrics.export import PeriodicExportingMetricReader
    from opentelemetry.sdk.resources import SERVICE_NAME, Resource
    from opentelemetry.sdk.trace import TracerProvider
    from opentelemetry.sdk.trace.export import BatchSpanProcessor

    endpoint = settings.exporter_otlp_endpoint
    resource = Resource.create({SERVICE_NAME: settings.service_name})

    tracer_provider = TracerProvider(resource=resource)
    tracer_provider.add_span_processor(BatchSpanProcessor(OTLPSpanExporter(endpoint=endpoint, insecure=True)))
    trace.set_tracer_provider(tracer_provider)

    reader = PeriodicExportingMetricReader(
        OTLPMetricExporter(endpoint=endpoint, insecure=True), export_interval_millis=settings.export_interval_ms
    )
    metrics.set_meter_provider(MeterProvider(resource=resource, metric_readers=[reader]))

    # Experiment logs carry the run's trace and span ids
    logger_provider = LoggerProvider(resource=resource)
    log_exporter = OTLPLogExporter(endpoint=endpoint, insecure=True)
    logger_provider.add_log_record_processor(SimpleLogRecordProcessor(log_exporter))
    logging.getLogger().addHandler(LoggingHandler(level=logging.NOTSET, logger_provider=logger_provider))
    LoggingInstrumentor().instrument(set_logging_format=False)


def setup_telemetry(settings: TelemetrySettings | None = None) -> bool:
    """Install OTLP exporters once at startup. Returns whether exporting is on."""
    settings = settings or TelemetrySettings()
    if not settings.enabled:
        logger.debug("OTEL disabled; spans and metrics stay in-process")
        return False

    _install_exporters(settings)
    create_instruments(metrics.get_meter(settings.service_name))
    logger.info("OTEL exporting to %s as %s", settings.exporter_otlp_endpoint, settings.service_name)
    return True


def get_tracer(name: str) -> trace.Tracer:
    return trace.get_tracer(name)


def get_run_counter() -> Any:
    return _instruments.runs


def get_round_histogram() -> Any:
    return _instruments.rounds


def get_verification_counter() -> Any:
    return _instruments.verifications


def get_experiment_latency() -> Any:
    return _instruments.experiment_latency
