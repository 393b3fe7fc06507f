"""Comparison of the full-ball search against a search confined to one slice."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, replace
from typing import Any

import numpy as np

from src.algebra.quat import UnitImaginary
from src.algebra.sliceseries import SliceSeries

from .config import SearchConfig
from .decompose import afd_decompose

DOMINANCE_TOL = 1e-9


@dataclass(frozen=True)
class SliceComparison:
    """Captured energy ``sum_{k<=m} |c_k|**2`` after each step for both searches."""

    direction: tuple[float, float, float]
    full_captured: tuple[float, ...]
    slice_captured: tuple[float, ...]
    signal_energy: float

    @property
    def dominated(self) -> bool:
        """Whether the slice search never captures more than the full search."""
        steps = min(len(self.full_captured), len(self.slice_captured))
        scale = max(self.signal_energy, 1.0)
        return all(
            self.slice_captured[m] <= self.full_captured[m] + DOMINANCE_TOL * scale
            for m in range(steps)
        )

    @property
    def final_gap(self) -> float:
        if not self.full_captured or not self.slice_captured:
            return 0.0
        return self.full_captured[-1] - self.slice_captured[-1]

    def to_dict(self) -> dict[str, Any]:
        return {
            "direction": list(self.direction),
            "full_captured": list(self.full_captured),
            "slice_captured": list(self.slice_captured),
            "signal_energy": self.signal_energy,
            "dominated": self.dominated,
            "final_gap": self.final_gap,
        }


def _captured(energies: Sequence[float], steps: int) -> tuple[float, ...]:
    cumulative = np.cumsum(np.asarray(energies, dtype=float))
    if cumulative.size < steps and cumulative.size > 0:
        cumulative = np.concatenate((cumulative, np.full(steps - cumulative.size, cumulative[-1])))
    return tuple(float(v) for v in cumulative[:steps])


def single_slice_comparison(
    f: SliceSeries,
    steps: int,
    cfg: SearchConfig,
    direction: Sequence[float],
) -> SliceComparison:
    """Run both searches for ``steps`` greedy steps and compare captured energy.

    The full search maximises over a superset of the slice candidates, so its first step
    captures at least as much energy. Later steps are greedy on different remainders and
    are only compared, not guaranteed; ``dominated`` reports whether the order held.
    """
    if steps <= 0:
        raise ValueError("steps must be positive")
    unit = UnitImaginary.from_vector(direction)
    slice_cfg = cfg.restricted_to(unit.direction)
    full_cfg = replace(cfg, single_slice=None)
    full = afd_decompose(f, steps, 0.0, full_cfg)
    restricted = afd_decompose(f, steps, 0.0, slice_cfg)
    return SliceComparison(
        direction=unit.direction,
        full_captured=_captured(full.energies, steps),
        slice_captured=_captured(restricted.energies, steps),
        signal_energy=f.norm() ** 2,
    )


__all__ = ["SliceComparison", "single_slice_comparison"]
