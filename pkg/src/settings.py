from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class HarnessSettings(BaseSettings):
    """Process-level settings read from ANONQ_* environment variables or `.env`."""

    model_config = SettingsConfigDict(env_prefix="ANONQ_", env_file=".env", extra="ignore")

    output_dir: Path = Path("reports")
    workers: int = Field(default=1, ge=1)
    log_level: str = "WARNING"


class TelemetrySettings(BaseSettings):
    """The standard OTEL_* variables this package honours."""

    model_config = SettingsConfigDict(env_prefix="OTEL_", env_file=".env", extra="ignore")

    enabled: bool = False
    service_name: str = "anon-quantum-transmission"
    exporter_otlp_endpoint: str = "http://localhost:4317"
    export_interval_ms: int = Field(default=30_000, ge=1)


def get_settings() -> HarnessSettings:
    """Read settings fresh so tests can monkeypatch the environment."""
    return HarnessSettings()
