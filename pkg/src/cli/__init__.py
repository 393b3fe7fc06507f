"""Command-line interface for slice-regular adaptive decomposition."""

from .app import build_parser, main
from .signals import SignalSpec, SignalSpecError, load_signal, parse_signal_text
from .verify import PropertyResult, run_suite

__all__ = [
    "PropertyResult",
    "SignalSpec",
    "SignalSpecError",
    "build_parser",
    "load_signal",
    "main",
    "parse_signal_text",
    "run_suite",
]
