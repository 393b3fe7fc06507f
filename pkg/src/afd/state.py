"""Greedy-loop state and the immutable result exported from it."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from src.algebra.quat import FloatArray, Quaternion
from src.algebra.sliceseries import SliceSeries, regular_conj
from src.hardy.blaschke import TMSystem
from src.hardy.space import BallPoint


@dataclass
class AFDState:
    """Remainders, Blaschke product and bookkeeping after ``steps`` greedy steps.

    ``std_remainder`` is ``r_n = f - sum_{k<n} T_k <f, T_k>`` and ``reduced_remainder`` is
    ``f_n = B_n**-* * r_n`` maintained through the backward shift. ``remainder_norms[0]``
    is ``||f||`` and ``remainder_norms[k]`` the norm after ``k`` steps.
    """

    original: SliceSeries
    std_remainder: SliceSeries
    reduced_remainder: SliceSeries
    blaschke_prod: SliceSeries
    tm: TMSystem
    coefficients: list[Quaternion] = field(default_factory=list)
    energies: list[float] = field(default_factory=list)
    remainder_norms: list[float] = field(default_factory=list)
    lemma_deviations: list[float] = field(default_factory=list)
    shell_hits: list[int] = field(default_factory=list)
    fallback_counts: list[int] = field(default_factory=list)
    termination_reason: str | None = None

    @classmethod
    def start(cls, signal: SliceSeries) -> AFDState:
        order = signal.trunc_order
        tm = TMSystem.empty(order)
        return cls(
            original=signal,
            std_remainder=signal,
            reduced_remainder=signal,
            blaschke_prod=tm.tail_product,
            tm=tm,
            remainder_norms=[signal.norm()],
        )

    @property
    def steps(self) -> int:
        return len(self.tm)

    @property
    def trunc_order(self) -> int:
        return self.original.trunc_order

    @property
    def signal_norm(self) -> float:
        return self.remainder_norms[0]

    @property
    def blaschke_conj(self) -> SliceSeries:
        return regular_conj(self.blaschke_prod)

    def params_array(self) -> FloatArray:
        if not self.tm.params:
            return np.zeros((0, 4))
        return np.stack([a.as_array() for a in self.tm.params])

    def snapshot(self, config: Mapping[str, Any] | None = None) -> AFDResult:
        """Freeze the current bookkeeping into an exportable :class:`AFDResult`."""
        return AFDResult(
            params=tuple(tuple(a.to_list()) for a in self.tm.params),
            coeffs=tuple(tuple(c.to_list()) for c in self.coefficients),
            energies=tuple(self.energies),
            remainder_norms=tuple(self.remainder_norms),
            lemma_deviations=tuple(self.lemma_deviations),
            shell_hits=tuple(self.shell_hits),
            termination_reason=self.termination_reason,
            trunc_order=self.trunc_order,
            config=dict(config or {}),
            signal=self.original,
        )


@dataclass(frozen=True, eq=False)
class AFDResult:
    """Immutable record of a decomposition run."""

    params: tuple[tuple[float, ...], ...]
    coeffs: tuple[tuple[float, ...], ...]
    energies: tuple[float, ...]
    remainder_norms: tuple[float, ...]
    lemma_deviations: tuple[float, ...]
    shell_hits: tuple[int, ...]
    termination_reason: str | None
    trunc_order: int
    config: dict[str, Any]
    signal: SliceSeries

    @property
    def steps(self) -> int:
        return len(self.params)

    @property
    def relative_remainder(self) -> float:
        """Final remainder norm divided by ``||f||`` (0 for the zero signal)."""
        if not self.remainder_norms or self.remainder_norms[0] == 0.0:
            return 0.0
        return self.remainder_norms[-1] / self.remainder_norms[0]

    def ball_points(self) -> list[BallPoint]:
        return [BallPoint.from_sequence(p) for p in self.params]

    def quaternion_coeffs(self) -> list[Quaternion]:
        return [Quaternion.from_array(c) for c in self.coeffs]

    def to_dict(self) -> dict[str, Any]:
        return {
            "params": [list(p) for p in self.params],
            "coeffs": [list(c) for c in self.coeffs],
            "energies": list(self.energies),
            "remainder_norms": list(self.remainder_norms),
            "lemma_deviations": list(self.lemma_deviations),
            "shell_hits": list(self.shell_hits),
            "termination_reason": self.termination_reason,
            "trunc_order": self.trunc_order,
            "config": dict(self.config),
            "signal": self.signal.to_dict(),
        }

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> AFDResult:
        return cls(
            params=tuple(tuple(float(v) for v in p) for p in payload["params"]),
            coeffs=tuple(tuple(float(v) for v in c) for c in payload["coeffs"]),
            energies=tuple(float(v) for v in payload["energies"]),
            remainder_norms=tuple(float(v) for v in payload["remainder_norms"]),
            lemma_deviations=tuple(float(v) for v in payload.get("lemma_deviations", ())),
            shell_hits=tuple(int(v) for v in payload.get("shell_hits", ())),
            termination_reason=payload.get("termination_reason"),
            trunc_order=int(payload["trunc_order"]),
            config=dict(payload.get("config", {})),
            signal=SliceSeries.from_dict(payload["signal"]),
        )


__all__ = ["AFDResult", "AFDState"]
