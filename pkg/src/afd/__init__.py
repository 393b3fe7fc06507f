"""Adaptive Fourier decomposition on the quaternionic unit ball."""

from .config import RunConfig, SearchConfig, load_run_config, load_search_config
from .decompose import afd_decompose, afd_step, reconstruct, reconstruct_from_result
from .experiments import SliceComparison, single_slice_comparison
from .rate import (
    Atom,
    AtomicSignal,
    RateReport,
    RateRow,
    check_recurrence,
    rate_report,
    recurrence_bound_holds,
)
from .search import Selection, maximize_objective, objective
from .state import AFDResult, AFDState

__all__ = [
    "AFDResult",
    "AFDState",
    "Atom",
    "AtomicSignal",
    "RateReport",
    "RateRow",
    "RunConfig",
    "SearchConfig",
    "Selection",
    "SliceComparison",
    "afd_decompose",
    "afd_step",
    "check_recurrence",
    "load_run_config",
    "load_search_config",
    "maximize_objective",
    "objective",
    "rate_report",
    "reconstruct",
    "reconstruct_from_result",
    "recurrence_bound_holds",
    "single_slice_comparison",
]
