"""Structured logging and run diagnostics for the decomposition loop."""

from __future__ import annotations

import logging
import sys
import time
from collections import deque
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import asdict, dataclass
from typing import IO, Any, Protocol, cast

import structlog


class DiagnosticsLogger(Protocol):
    """The subset of the structlog bound-logger API used in this package."""

    def bind(self, **_: Any) -> "DiagnosticsLogger": ...

    def info(self, _event: str, **_: Any) -> None: ...

    def warning(self, _event: str, **_: Any) -> None: ...

    def error(self, _event: str, **_: Any) -> None: ...


def get_logger(name: str, **initial_values: Any) -> DiagnosticsLogger:
    """Lazy structlog proxy; configuration is resolved on every call, not at import."""
    return cast(DiagnosticsLogger, structlog.get_logger(name, **initial_values))


def configure_logging(*, verbose: bool = False, stream: IO[str] | None = None) -> None:
    """Render JSON log lines to ``stream`` (stderr by default).

    WARNING and above are emitted unless ``verbose`` is set, in which case INFO events
    such as ``afd_step`` are included. stdout is never used.
    """
    level = logging.INFO if verbose else logging.WARNING
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.JSONRenderer(sort_keys=True),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.PrintLoggerFactory(file=stream or sys.stderr),
        cache_logger_on_first_use=False,
    )


@dataclass
class DiagnosticsEvent:
    """Structured log entry kept in the in-memory history."""

    timestamp: float
    component: str
    event: str
    data: dict[str, Any]


class DecompositionDiagnostics:
    """Collect per-step telemetry and a health summary for decomposition runs."""

    def __init__(
        self,
        *,
        history_size: int = 200,
        time_source: Callable[[], float] | None = None,
    ) -> None:
        if history_size <= 0:
            raise ValueError("history_size must be positive")

        self._history: deque[DiagnosticsEvent] = deque(maxlen=history_size)
        self._step_history: deque[dict[str, Any]] = deque(maxlen=history_size)

        self._status = "idle"
        self._termination_reason: str | None = None
        self._steps = 0
        self._fallbacks = 0
        self._shell_hits = 0
        self._max_lemma_deviation = 0.0
        self._step_durations: list[float] = []

        self._run_started_ts: float | None = None
        self._step_started_ts: float | None = None
        self._last_step_ts: float | None = None

        self._time_source = time_source or time.perf_counter
        self._logger = get_logger("slice_afd.diagnostics", service="slice-afd")

    # ------------------------------------------------------------------
    # Recording helpers
    # ------------------------------------------------------------------
    def start_run(self, *, signal_norm: float, trunc_order: int, config: Mapping[str, Any]) -> None:
        """Reset the per-run counters and mark the start of a decomposition."""
        timestamp = self._now()
        self._status = "running"
        self._termination_reason = None
        self._steps = 0
        self._fallbacks = 0
        self._shell_hits = 0
        self._max_lemma_deviation = 0.0
        self._step_durations.clear()
        self._run_started_ts = timestamp
        self._step_started_ts = timestamp
        payload = {
            "signal_norm": float(signal_norm),
            "trunc_order": int(trunc_order),
            "config": dict(config),
        }
        self._append_event("afd", "afd_started", payload, timestamp)

    def record_step(
        self,
        *,
        step: int,
        param: Sequence[float],
        coefficient: Sequence[float],
        energy: float,
        remainder_norm: float,
        lemma_deviation: float,
        on_shell: bool,
        fallbacks: int = 0,
    ) -> None:
        """Record one greedy step and emit an ``afd_step`` event."""
        timestamp = self._now()
        duration = timestamp - self._step_started_ts if self._step_started_ts is not None else 0.0
        self._step_started_ts = timestamp
        self._last_step_ts = timestamp
        self._steps = step
        self._fallbacks += int(fallbacks)
        self._shell_hits += int(on_shell)
        self._max_lemma_deviation = max(self._max_lemma_deviation, float(lemma_deviation))
        self._step_durations.append(duration)
        payload = {
            "step": int(step),
            "param": [float(c) for c in param],
            "coefficient": [float(c) for c in coefficient],
            "energy": float(energy),
            "remainder_norm": float(remainder_norm),
            "lemma_deviation": float(lemma_deviation),
            "on_shell": bool(on_shell),
            "duration_s": float(duration),
        }
        self._step_history.append(payload)
        self._append_event("afd", "afd_step", payload, timestamp)

    def record_termination(self, *, reason: str, steps: int, remainder_norm: float) -> None:
        """Record why the greedy loop stopped."""
        timestamp = self._now()
        self._status = "terminated"
        self._termination_reason = reason
        payload = {
            "reason": reason,
            "steps": int(steps),
            "remainder_norm": float(remainder_norm),
        }
        self._append_event("afd", "afd_terminated", payload, timestamp)

    # ------------------------------------------------------------------
    # Reporting helpers
    # ------------------------------------------------------------------
    def health_report(self) -> dict[str, Any]:
        """Summarise the current or last run."""
        mean_step = (
            sum(self._step_durations) / len(self._step_durations) if self._step_durations else None
        )
        return {
            "status": self._status,
            "termination_reason": self._termination_reason,
            "steps": self._steps,
            "objective_fallbacks": self._fallbacks,
            "shell_hits": self._shell_hits,
            "max_lemma_deviation": self._max_lemma_deviation,
            "mean_step_s": mean_step,
            "last_step_ts": self._last_step_ts,
        }

    def report_payload(self, history: int = 10) -> dict[str, Any]:
        """Return the health summary together with the most recent steps and events."""
        if history <= 0:
            raise ValueError("history must be positive")
        return {
            **self.health_report(),
            "history": self._serialize_history(self._step_history, history),
            "events": [asdict(event) for event in self._tail(self._history, history)],
        }

    # ------------------------------------------------------------------
    # Internal helpers
    # ------------------------------------------------------------------
    def _append_event(
        self,
        component: str,
        event: str,
        payload: Mapping[str, Any],
        timestamp: float | None = None,
    ) -> None:
        ts = timestamp if timestamp is not None else self._now()
        entry = DiagnosticsEvent(timestamp=ts, component=component, event=event, data=dict(payload))
        self._history.append(entry)
        self._logger.bind(component=component).info(event, **dict(payload))

    def _serialize_history(
        self, history: deque[dict[str, Any]], limit: int
    ) -> list[dict[str, Any]]:
        samples = list(history)[-limit:]
        samples.reverse()
        return [dict(sample) for sample in samples]

    def _tail(self, history: deque[DiagnosticsEvent], limit: int) -> Iterable[DiagnosticsEvent]:
        return list(history)[-limit:]

    def _now(self) -> float:
        return float(self._time_source())
