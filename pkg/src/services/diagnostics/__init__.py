"""Logging configuration and decomposition diagnostics."""

from .afd import (
    DecompositionDiagnostics,
    DiagnosticsEvent,
    DiagnosticsLogger,
    configure_logging,
    get_logger,
)

__all__ = [
    "DecompositionDiagnostics",
    "DiagnosticsEvent",
    "DiagnosticsLogger",
    "configure_logging",
    "get_logger",
]
