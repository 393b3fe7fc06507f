"""Signal synthesis: seeded random generators and the baked scenario catalogue."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from src.afd.rate import Atom, AtomicSignal
from src.algebra.quat import FloatArray, Quaternion, UnitImaginary
from src.algebra.sliceseries import DEFAULT_TRUNC_ORDER, SliceSeries
from src.hardy.space import BallPoint

from .scenarios import SCENARIOS, AtomSpec, SignalScenario

__all__ = [
    "AtomSpec",
    "SignalScenario",
    "list_scenarios",
    "load_scenario",
    "random_atomic_signal",
    "random_ball_points",
    "random_quaternion",
    "random_series",
    "random_unit_imaginary",
    "scenario_signal",
    "synthesize_atoms",
]


def list_scenarios() -> list[str]:
    """Return the available scenario slugs."""
    return sorted(SCENARIOS.keys())


def load_scenario(slug: str) -> SignalScenario:
    """Retrieve a scenario definition by slug."""
    try:
        return SCENARIOS[slug]
    except KeyError as exc:
        raise ValueError(f"Unknown signal scenario: {slug}") from exc


def scenario_signal(scenario: SignalScenario) -> SliceSeries:
    """Materialise a scenario as a power series at its truncation order."""
    if scenario.atoms:
        pairs = [
            (BallPoint.from_sequence(atom.point), Quaternion.from_array(atom.coeff))
            for atom in scenario.atoms
        ]
        return synthesize_atoms(pairs, scenario.trunc_order)
    return SliceSeries.from_quaternions(np.asarray(scenario.coeffs), scenario.trunc_order)


def synthesize_atoms(
    atoms: Sequence[tuple[BallPoint, Quaternion]], trunc_order: int = DEFAULT_TRUNC_ORDER
) -> SliceSeries:
    """Return ``sum_k e_{b_k} c_k`` truncated at ``trunc_order``."""
    return AtomicSignal.from_pairs(atoms).synthesize(trunc_order)


def random_quaternion(rng: np.random.Generator, scale: float = 1.0) -> Quaternion:
    return Quaternion.from_array(scale * rng.standard_normal(4))


def random_unit_imaginary(rng: np.random.Generator) -> UnitImaginary:
    return UnitImaginary.from_vector(rng.standard_normal(3).tolist())


def random_ball_points(
    rng: np.random.Generator, count: int, rho: float, *, uniform_volume: bool = True
) -> list[BallPoint]:
    """Draw ``count`` points with ``|a| <= rho``.

    Directions are uniform on ``S^3``; radii are uniform in volume by default and uniform
    in ``[0, rho]`` otherwise.
    """
    if not 0.0 <= rho < 1.0:
        raise ValueError("rho must lie in [0, 1)")
    directions = rng.standard_normal((count, 4))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    u = rng.random(count)
    radii = rho * (u**0.25 if uniform_volume else u)
    points: FloatArray = directions * radii[:, None]
    return [BallPoint.from_sequence(row) for row in points]


def random_series(
    rng: np.random.Generator,
    trunc_order: int,
    *,
    degree: int | None = None,
    decay: float = 1.0,
    min_constant: float | None = None,
) -> SliceSeries:
    """Gaussian coefficients ``a_n ~ decay**n N(0, 1)**4`` up to ``degree`` (default ``N``).

    ``min_constant`` rescales ``a_0`` so that ``|a_0|`` is at least that value.
    """
    top = trunc_order if degree is None else min(degree, trunc_order)
    coeffs = np.zeros((trunc_order + 1, 4))
    weights = decay ** np.arange(top + 1)
    coeffs[: top + 1] = rng.standard_normal((top + 1, 4)) * weights[:, None]
    if min_constant is not None:
        norm0 = float(np.linalg.norm(coeffs[0]))
        if norm0 == 0.0:
            coeffs[0] = [min_constant, 0.0, 0.0, 0.0]
        elif norm0 < min_constant:
            coeffs[0] *= min_constant / norm0
    return SliceSeries(coeffs)


def random_atomic_signal(
    rng: np.random.Generator, count: int, rho: float, coeff_scale: float = 1.0
) -> AtomicSignal:
    """Random ``sum_k e_{b_k} c_k`` with ``|b_k| <= rho``."""
    points = random_ball_points(rng, count, rho)
    return AtomicSignal(
        tuple(Atom(point, random_quaternion(rng, coeff_scale)) for point in points)
    )
