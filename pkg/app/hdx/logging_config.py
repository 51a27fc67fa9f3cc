"""Structured logging for the HDX toolkit.

JSON output (python-json-logger) for batch sweeps, plain text for
interactive runs. Logs go to stderr; stdout carries command output.
"""
import logging
import sys
from datetime import datetime, timezone
from typing import Any, Dict, Optional

try:
    from pythonjsonlogger.json import JsonFormatter
except ImportError:  # python-json-logger < 3
    from pythonjsonlogger.jsonlogger import JsonFormatter

# ===== CONFIGURACIÓN =====
LOG_LEVEL = "INFO"
JSON_LOGS = False
CONTEXT_FIELDS = ("point_id", "theorem", "seed", "complex_id")

# ===== FORMATEADORES =====


class HDXJsonFormatter(JsonFormatter):
    """JSON records with a UTC timestamp and the logger coordinates."""

    def add_fields(self, log_record: Dict[str, Any], record: logging.LogRecord, message_dict: Dict[str, Any]) -> None:
        super().add_fields(log_record, record, message_dict)
        log_record["timestamp"] = datetime.now(timezone.utc).isoformat()
        log_record["level"] = record.levelname
        log_record["logger"] = record.name
        log_record["function"] = record.funcName


class PlainFormatter(logging.Formatter):
    """Single-line text for local runs."""

    def format(self, record: logging.LogRecord) -> str:
        timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        context = " ".join(
            f"{name}={getattr(record, name)}" for name in CONTEXT_FIELDS if getattr(record, name, None) is not None
        )
        line = f"[{timestamp}] {record.levelname:8s} {record.name:24s} {record.getMessage()}"
        if context:
            line = f"{line} ({context})"
        if record.exc_info:
            line = f"{line}\n{self.formatException(record.exc_info)}"
        return line


# ===== CONFIGURACIÓN DE LOGGING =====


def setup_logging(json_format: bool = JSON_LOGS, level: str = LOG_LEVEL) -> logging.Logger:
    """Configure the root logger once for the whole process."""
    root_logger = logging.getLogger()
    numeric_level = getattr(logging, level.upper(), logging.INFO)
    root_logger.setLevel(numeric_level)

    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(numeric_level)
    handler.setFormatter(HDXJsonFormatter() if json_format else PlainFormatter())
    root_logger.addHandler(handler)
    return root_logger


# ===== LOGGING HELPERS =====


class LogContext(logging.LoggerAdapter):
    """Logger bound to a sweep point; usable as a context manager."""

    def __init__(self, logger: logging.Logger, point_id: Optional[int] = None, theorem: Optional[str] = None,
                 seed: Optional[int] = None, complex_id: Optional[str] = None):
        context = {"point_id": point_id, "theorem": theorem, "seed": seed, "complex_id": complex_id}
        super().__init__(logger, {k: v for k, v in context.items() if v is not None})

    def process(self, msg: str, kwargs: Dict[str, Any]):
        kwargs["extra"] = {**self.extra, **kwargs.get("extra", {})}
        return msg, kwargs

    def __enter__(self) -> "LogContext":
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> bool:
        if exc_type is not None:
            self.error(f"{exc_type.__name__}: {exc_val}")
        return False


# ===== EVENTOS ESPECIALES =====


def log_verdict_event(logger: logging.Logger, theorem: str, status: str, duration_ms: float,
                      details: Optional[Dict[str, Any]] = None) -> None:
    """One line per finished theorem check."""
    log_data = {
        "event_type": "VERDICT",
        "theorem": theorem,
        "status": status,
        "duration_ms": round(duration_ms, 3),
        "slow": duration_ms > 10_000,
        "details": details or {},
    }
    logger.info(f"CHECK_COMPLETED: {theorem} -> {status}", extra=log_data)


def log_numerical_event(logger: logging.Logger, event_type: str, details: Optional[Dict[str, Any]] = None) -> None:
    """Numerical diagnostics: ill-conditioning, ambiguous strips, disconnected links."""
    log_data = {"event_type": event_type, "severity": "NUMERICAL", "details": details or {}}
    logger.warning(f"NUMERICAL_EVENT: {event_type}", extra=log_data)
