"""Maximum selection: the greedy objective and its global search over the ball.

The objective at step ``n`` is ``|<f_n, e_a>| = sqrt(1 - |a|**2) |f_n(a)|`` with the reduced
remainder ``f_n = B**-* * r_n``.  It is evaluated without series division:

``f_n(a) = B(a_hat)**-1 r_n(a_hat)`` with ``a_hat = B^c(a)**-1 a B^c(a)``,

where ``B^c = B_{conj(a_k)} * ... * B_{conj(a_1)}`` is the regular conjugate of ``B``.
Both are read off one closed-form stem pair of ``B``, so the cost of an evaluation barely
grows with the step count.  Near the zero spheres of ``B^c`` the maintained reduced
remainder series is evaluated directly instead.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from src.algebra.quat import (
    FloatArray,
    Quaternion,
    UnitImaginary,
    hamilton,
    inv_array,
    norm_array,
)
from src.algebra.sliceseries import evaluate_many
from src.hardy.blaschke import blaschke_product_stems, conjugate_stem_value, stem_value
from src.hardy.space import ORIGIN, BallPoint
from src.services.diagnostics import get_logger

from .config import SearchConfig
from .state import AFDState

TWIST_ZERO_TOL = 1e-12
PRODUCT_ZERO_TOL = 1e-8
REMAINDER_ZERO_TOL = 1e-13
SHELL_TOL = 1e-9

# Irrational step ratios of the super-Fibonacci spiral on S^3.
_SPIRAL_PHI = math.sqrt(2.0)
_SPIRAL_PSI = 1.533751168755204288118041

_LOGGER = get_logger("slice_afd.search", service="slice-afd", component="search")


@dataclass(frozen=True)
class Selection:
    """Outcome of one maximum-selection step."""

    point: BallPoint
    value: float
    terminated: bool = False
    on_shell: bool = False
    fallbacks: int = 0


# ----------------------------------------------------------------------
# Objective
# ----------------------------------------------------------------------
def reduced_values(state: AFDState, points: FloatArray) -> tuple[FloatArray, int]:
    """Return ``f_n(a)`` for every row of ``points`` and the number of fallback evaluations."""
    pts = np.asarray(points, dtype=float).reshape(-1, 4)
    params = state.params_array()
    if params.shape[0] == 0:
        return evaluate_many(state.std_remainder, pts), 0

    # The twist keeps each point on its sphere, so one stem pair serves both evaluations.
    alpha, beta = blaschke_product_stems(params, pts)
    twist = conjugate_stem_value((alpha, beta), pts)
    out = np.zeros_like(pts)
    use_series = norm_array(twist) < TWIST_ZERO_TOL
    direct = ~use_series
    if np.any(direct):
        rot = twist[direct]
        twisted = hamilton(inv_array(rot), hamilton(pts[direct], rot))
        product = stem_value((alpha[direct], beta[direct]), twisted)
        small = norm_array(product) < PRODUCT_ZERO_TOL
        idx = np.flatnonzero(direct)
        good = ~small
        if np.any(good):
            remainder = evaluate_many(state.std_remainder, twisted[good])
            out[idx[good]] = hamilton(inv_array(product[good]), remainder)
        use_series[idx[small]] = True
    fallbacks = int(np.count_nonzero(use_series))
    if fallbacks:
        out[use_series] = evaluate_many(state.reduced_remainder, pts[use_series])
    return out, fallbacks


def objective_values(state: AFDState, points: FloatArray) -> tuple[FloatArray, int]:
    """Vectorised objective ``sqrt(1 - |a|**2) |f_n(a)|`` over a ``(M, 4)`` array."""
    pts = np.asarray(points, dtype=float).reshape(-1, 4)
    values, fallbacks = reduced_values(state, pts)
    weight = np.sqrt(np.clip(1.0 - np.sum(pts * pts, axis=1), 0.0, None))
    return weight * norm_array(values), fallbacks


def objective(a: BallPoint, state: AFDState) -> float:
    """Return ``|<f_n, e_a>|`` for the current reduced remainder."""
    values, fallbacks = objective_values(state, a.as_array()[None, :])
    if fallbacks:
        _LOGGER.info("objective_fallback", step=state.steps + 1, point=a.to_list())
    return float(values[0])


def kernel_coefficient(a: BallPoint, state: AFDState) -> Quaternion:
    """Return ``<f_n, e_a> = sqrt(1 - |a|**2) f_n(a)`` as a quaternion."""
    values, _ = reduced_values(state, a.as_array()[None, :])
    return Quaternion.from_array(math.sqrt(1.0 - a.modulus**2) * values[0])


# ----------------------------------------------------------------------
# Candidate grid
# ----------------------------------------------------------------------
def super_fibonacci_directions(count: int) -> FloatArray:
    """Return ``count`` well-spread unit quaternions on ``S^3``."""
    s = np.arange(count) + 0.5
    inner = np.sqrt(s / count)
    outer = np.sqrt(1.0 - s / count)
    alpha = 2.0 * np.pi * s / _SPIRAL_PHI
    beta = 2.0 * np.pi * s / _SPIRAL_PSI
    return np.stack(
        (inner * np.sin(alpha), inner * np.cos(alpha), outer * np.sin(beta), outer * np.cos(beta)),
        axis=1,
    )


def slice_directions(unit: UnitImaginary, count: int) -> FloatArray:
    """Return ``count`` equally spaced points ``cos(phi) + I sin(phi)`` of the slice circle."""
    phi = 2.0 * np.pi * np.arange(count) / count
    out = np.zeros((count, 4))
    out[:, 0] = np.cos(phi)
    out[:, 1:] = np.outer(np.sin(phi), unit.direction)
    return out


def chebyshev_radii(levels: int, rho_max: float) -> FloatArray:
    """Chebyshev-Lobatto radii in ``[0, rho_max]``, clustered at both ends."""
    k = np.arange(levels)
    radii = 0.5 * rho_max * (1.0 - np.cos(np.pi * k / (levels - 1)))
    radii[0] = 0.0
    radii[-1] = rho_max
    return radii


def candidate_grid(cfg: SearchConfig) -> FloatArray:
    """Origin followed by every non-zero radius times every direction, in a fixed order."""
    unit = cfg.slice_unit
    if unit is None:
        directions = super_fibonacci_directions(cfg.sphere_points)
    else:
        directions = slice_directions(unit, cfg.sphere_points)
    radii = chebyshev_radii(cfg.radial_levels, cfg.rho_max)[1:]
    shells = radii[:, None, None] * directions[None, :, :]
    return np.concatenate((np.zeros((1, 4)), shells.reshape(-1, 4)), axis=0)


def _evaluate_grid(state: AFDState, grid: FloatArray, cfg: SearchConfig) -> tuple[FloatArray, int]:
    size = cfg.chunk_size
    chunks = [grid[start : start + size] for start in range(0, grid.shape[0], size)]
    if cfg.workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(lambda chunk: objective_values(state, chunk), chunks))
    else:
        results = [objective_values(state, chunk) for chunk in chunks]
    values = np.concatenate([values for values, _ in results])
    fallbacks = sum(count for _, count in results)
    return np.where(np.isfinite(values), values, -np.inf), fallbacks


def best_candidate(grid: FloatArray, values: FloatArray) -> int:
    """Index of the largest value; ties go to smaller ``|a|`` then lexicographic components."""
    modulus = norm_array(grid)
    order = np.lexsort((grid[:, 3], grid[:, 2], grid[:, 1], grid[:, 0], modulus, -values))
    return int(order[0])


# ----------------------------------------------------------------------
# Local refinement
# ----------------------------------------------------------------------
def _clip_to_ball(x: FloatArray, rho_max: float) -> FloatArray:
    radius = float(np.linalg.norm(x))
    if radius > rho_max:
        return x * (rho_max / radius)
    return x


def _initial_step(cfg: SearchConfig) -> float:
    radial = cfg.rho_max / (cfg.radial_levels - 1)
    if cfg.single_slice is None:
        angular = (2.0 * np.pi**2 / cfg.sphere_points) ** (1.0 / 3.0)
    else:
        angular = 2.0 * np.pi / cfg.sphere_points
    return float(min(max(radial, 0.5 * cfg.rho_max * angular), 0.25))


class _Refiner:
    """Nelder-Mead refinement of the objective in ``R^4`` or in one slice."""

    def __init__(self, state: AFDState, cfg: SearchConfig) -> None:
        self._state = state
        self._cfg = cfg
        self._unit = cfg.slice_unit

    def to_point(self, x: FloatArray) -> FloatArray:
        if self._unit is None:
            return _clip_to_ball(np.asarray(x, dtype=float), self._cfg.rho_max)
        clipped = _clip_to_ball(np.asarray(x, dtype=float), self._cfg.rho_max)
        out = np.zeros(4)
        out[0] = clipped[0]
        out[1:] = clipped[1] * np.asarray(self._unit.direction)
        return out

    def from_point(self, point: FloatArray) -> FloatArray:
        if self._unit is None:
            return np.array(point, dtype=float)
        return np.array([point[0], float(np.dot(point[1:], self._unit.direction))])

    def negative(self, x: FloatArray) -> float:
        values, _ = objective_values(self._state, self.to_point(x)[None, :])
        return -float(values[0])

    def run(self, start: FloatArray) -> tuple[FloatArray, float]:
        x = self.from_point(start)
        best_value = -self.negative(x)
        step = _initial_step(self._cfg)
        for _ in range(self._cfg.refine_restarts + 1):
            simplex = np.vstack([x, x + step * np.eye(x.shape[0])])
            result = minimize(
                self.negative,
                x,
                method="Nelder-Mead",
                options={
                    "maxiter": self._cfg.refine_iters,
                    "xatol": self._cfg.refine_tol,
                    "fatol": np.inf,
                    "initial_simplex": simplex,
                },
            )
            candidate = np.asarray(result.x, dtype=float)
            value = -float(result.fun)
            if value > best_value:
                x, best_value = self.from_point(self.to_point(candidate)), value
            step *= 0.1
        return self.to_point(x), best_value


# ----------------------------------------------------------------------
# Maximum selection
# ----------------------------------------------------------------------
def maximize_objective(state: AFDState, cfg: SearchConfig) -> Selection:
    """Grid search followed by Nelder-Mead refinement of the best candidate.

    The refined point replaces the grid winner only if it is strictly better, so the
    returned value dominates every grid candidate.  A vanishing remainder returns the
    origin with value 0 and ``terminated=True``.
    """
    if state.std_remainder.norm() < REMAINDER_ZERO_TOL:
        return Selection(point=ORIGIN, value=0.0, terminated=True)

    grid = candidate_grid(cfg)
    values, fallbacks = _evaluate_grid(state, grid, cfg)
    index = best_candidate(grid, values)
    point, value = grid[index], float(values[index])

    if cfg.refine_iters > 0:
        refined, refined_value = _Refiner(state, cfg).run(point)
        if refined_value > value:
            point, value = refined, refined_value

    if fallbacks:
        _LOGGER.info("objective_fallback", step=state.steps + 1, count=fallbacks)
    selected = BallPoint.from_sequence(point)
    on_shell = selected.modulus >= cfg.rho_max - SHELL_TOL
    if on_shell:
        _LOGGER.warning(
            "search_on_shell", step=state.steps + 1, point=selected.to_list(), rho_max=cfg.rho_max
        )
    return Selection(point=selected, value=value, on_shell=on_shell, fallbacks=fallbacks)


__all__ = [
    "Selection",
    "best_candidate",
    "candidate_grid",
    "chebyshev_radii",
    "kernel_coefficient",
    "maximize_objective",
    "objective",
    "objective_values",
    "reduced_values",
    "slice_directions",
    "super_fibonacci_directions",
]
