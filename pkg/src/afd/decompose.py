"""The greedy adaptive decomposition loop and partial-sum reconstruction."""

from __future__ import annotations

from src.algebra.quat import DomainError
from src.algebra.sliceseries import SliceSeries, series_sum
from src.hardy.blaschke import backward_shift, tm_system
from src.hardy.space import inner_product
from src.services.diagnostics import DecompositionDiagnostics, get_logger

from .config import SearchConfig
from .search import kernel_coefficient, maximize_objective
from .state import AFDResult, AFDState

LEMMA_TOL = 1e-8

_LOGGER = get_logger("slice_afd.decompose", service="slice-afd", component="afd")


def _energy_reached(state: AFDState, energy_tol: float) -> bool:
    signal_sq = state.signal_norm**2
    return state.remainder_norms[-1] ** 2 <= energy_tol * signal_sq


def afd_step(state: AFDState, cfg: SearchConfig) -> bool:
    """Run one maximum-selection step in place; return ``False`` if the remainder vanished."""
    selection = maximize_objective(state, cfg)
    if selection.terminated:
        return False

    a = selection.point
    expected = kernel_coefficient(a, state)
    tm = state.tm.extend(a)
    tm_function = tm.tm_functions[-1]
    coefficient = inner_product(state.original, tm_function)

    deviation = (coefficient - expected).norm()
    tolerance = LEMMA_TOL * state.signal_norm
    if deviation > tolerance:
        _LOGGER.error(
            "coefficient_identity_drift", step=len(tm), deviation=deviation, tolerance=tolerance
        )
        raise DomainError(
            f"step {len(tm)}: <f, T_n> differs from <f_n, e_a> by {deviation:.3e} "
            f"(tolerance {tolerance:.3e})"
        )

    state.std_remainder = state.std_remainder - tm_function.right_mul(coefficient)
    state.reduced_remainder = backward_shift(state.reduced_remainder, a)
    state.blaschke_prod = tm.tail_product
    state.tm = tm
    state.coefficients.append(coefficient)
    state.energies.append(coefficient.norm() ** 2)
    state.remainder_norms.append(state.std_remainder.norm())
    state.lemma_deviations.append(deviation)
    state.fallback_counts.append(selection.fallbacks)
    if selection.on_shell:
        state.shell_hits.append(len(tm))
    return True


def afd_decompose(
    f: SliceSeries,
    max_iters: int,
    energy_tol: float,
    cfg: SearchConfig,
    *,
    diagnostics: DecompositionDiagnostics | None = None,
) -> AFDState:
    """Greedy decomposition ``f = sum_n T_n <f, T_n>``.

    Stops after ``max_iters`` steps or once ``||r||**2 <= energy_tol ||f||**2``.
    ``termination_reason`` on the returned state is one of ``zero_signal``,
    ``energy_tol``, ``zero_remainder`` or ``max_iters``.
    """
    if max_iters < 0:
        raise ValueError("max_iters must be non-negative")
    state = AFDState.start(f)
    if diagnostics is not None:
        diagnostics.start_run(
            signal_norm=state.signal_norm, trunc_order=state.trunc_order, config=cfg.snapshot()
        )

    reason = "max_iters"
    if state.signal_norm == 0.0:
        reason = "zero_signal"
    else:
        for _ in range(max_iters):
            if _energy_reached(state, energy_tol):
                reason = "energy_tol"
                break
            if not afd_step(state, cfg):
                reason = "zero_remainder"
                break
            step = state.steps
            _LOGGER.info(
                "afd_step",
                step=step,
                param=state.tm.params[-1].to_list(),
                energy=state.energies[-1],
                remainder=state.remainder_norms[-1],
            )
            if diagnostics is not None:
                diagnostics.record_step(
                    step=step,
                    param=state.tm.params[-1].to_list(),
                    coefficient=state.coefficients[-1].to_list(),
                    energy=state.energies[-1],
                    remainder_norm=state.remainder_norms[-1],
                    lemma_deviation=state.lemma_deviations[-1],
                    on_shell=bool(state.shell_hits and state.shell_hits[-1] == step),
                    fallbacks=state.fallback_counts[-1],
                )
        else:
            if _energy_reached(state, energy_tol):
                reason = "energy_tol"

    state.termination_reason = reason
    _LOGGER.info("afd_terminated", reason=reason, steps=state.steps)
    if diagnostics is not None:
        diagnostics.record_termination(
            reason=reason, steps=state.steps, remainder_norm=state.remainder_norms[-1]
        )
    return state


def reconstruct(state: AFDState, n_terms: int) -> SliceSeries:
    """Partial sum ``sum_{k <= n_terms} T_k c_k``."""
    if not 0 <= n_terms <= state.steps:
        raise DomainError(f"n_terms must lie in [0, {state.steps}], got {n_terms}")
    terms = (
        state.tm.tm_functions[k].right_mul(state.coefficients[k]) for k in range(n_terms)
    )
    return series_sum(terms, state.trunc_order)


def reconstruct_from_result(result: AFDResult, n_terms: int) -> SliceSeries:
    """Rebuild the TM system from an exported result and form the partial sum."""
    if not 0 <= n_terms <= result.steps:
        raise DomainError(f"n_terms must lie in [0, {result.steps}], got {n_terms}")
    system = tm_system(result.ball_points()[:n_terms], result.trunc_order)
    coeffs = result.quaternion_coeffs()
    terms = (system.tm_functions[k].right_mul(coeffs[k]) for k in range(n_terms))
    return series_sum(terms, result.trunc_order)


__all__ = ["afd_decompose", "afd_step", "reconstruct", "reconstruct_from_result"]
