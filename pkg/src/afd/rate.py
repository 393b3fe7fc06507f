"""Convergence-rate diagnostics for signals with an atomic certificate.

A signal ``f = sum_k e_{b_k} c_k`` with ``M = sum_k |c_k|`` satisfies ``||f|| <= M`` and the
greedy remainders obey ``||r_m|| <= M / sqrt(m)``.  The bound follows from the recurrence
``d_{m+1} <= d_m (1 - d_m / A)`` for ``d_m = ||r_m||**2`` and ``A = M**2``, which forces
``d_m <= A / m``.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from src.algebra.quat import Quaternion
from src.algebra.sliceseries import DEFAULT_TRUNC_ORDER, SliceSeries, series_sum
from src.hardy.space import BallPoint, szego_kernel

from .config import SearchConfig
from .decompose import afd_decompose
from .state import AFDResult

BOUND_SLACK = 1e-12
RECURRENCE_SLACK = 1e-9


@dataclass(frozen=True)
class Atom:
    """One dictionary element ``e_b c``."""

    point: BallPoint
    coeff: Quaternion

    def to_dict(self) -> dict[str, list[float]]:
        return {"point": self.point.to_list(), "coeff": self.coeff.to_list()}


@dataclass(frozen=True)
class AtomicSignal:
    """A finite combination ``sum_k e_{b_k} c_k`` of normalised Szego kernels."""

    atoms: tuple[Atom, ...]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[BallPoint, Quaternion]]) -> AtomicSignal:
        return cls(tuple(Atom(point, coeff) for point, coeff in pairs))

    @property
    def certificate(self) -> float:
        """``M = sum_k |c_k|``."""
        return float(sum(atom.coeff.norm() for atom in self.atoms))

    def synthesize(self, trunc_order: int = DEFAULT_TRUNC_ORDER) -> SliceSeries:
        terms = (szego_kernel(atom.point, trunc_order).right_mul(atom.coeff) for atom in self.atoms)
        return series_sum(terms, trunc_order)

    def to_dict(self) -> dict[str, Any]:
        return {"atoms": [atom.to_dict() for atom in self.atoms]}

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> AtomicSignal:
        return cls(
            tuple(
                Atom(BallPoint.from_sequence(item["point"]), Quaternion.from_array(item["coeff"]))
                for item in payload["atoms"]
            )
        )


@dataclass(frozen=True)
class RateRow:
    """One line of the rate table; ``m`` counts from 1 with ``r_1 = f``."""

    m: int
    remainder_norm: float
    bound: float
    passed: bool
    recurrence_holds: bool | None


@dataclass(frozen=True)
class RateReport:
    rows: tuple[RateRow, ...]
    certificate: float
    signal_norm: float
    norm_within_certificate: bool
    result: AFDResult

    @property
    def all_passed(self) -> bool:
        return self.norm_within_certificate and all(row.passed for row in self.rows)

    @property
    def worst_ratio(self) -> float:
        """Largest ``||r_m|| / (M / sqrt(m))`` over the table."""
        ratios = [row.remainder_norm / row.bound for row in self.rows if row.bound > 0.0]
        return max(ratios, default=0.0)


@dataclass(frozen=True)
class RecurrenceCheck:
    hypothesis_holds: bool
    bound_holds: bool
    worst_ratio: float


def check_recurrence(d: Sequence[float], bound_constant: float) -> RecurrenceCheck:
    """Check ``d_m <= A / m`` and whether ``d`` satisfies the recurrence hypothesis.

    ``d[0]`` is ``d_1``.  The hypothesis is ``d_1 <= A`` and
    ``d_{m+1} <= d_m (1 - d_m / A)`` for every consecutive pair.
    """
    if bound_constant <= 0.0:
        raise ValueError("bound_constant must be positive")
    values = np.asarray(d, dtype=float)
    if values.size == 0:
        return RecurrenceCheck(hypothesis_holds=True, bound_holds=True, worst_ratio=0.0)
    if np.any(values < 0.0):
        raise ValueError("recurrence sequences must be non-negative")
    hypothesis = bool(values[0] <= bound_constant) and bool(
        np.all(values[1:] <= values[:-1] * (1.0 - values[:-1] / bound_constant))
    )
    m = np.arange(1, values.size + 1)
    limits = bound_constant / m
    return RecurrenceCheck(
        hypothesis_holds=hypothesis,
        bound_holds=bool(np.all(values <= limits)),
        worst_ratio=float(np.max(values / limits)),
    )


def recurrence_bound_holds(d: Sequence[float], bound_constant: float) -> bool:
    """Return whether ``d_m <= A / m`` for every ``m``."""
    return check_recurrence(d, bound_constant).bound_holds


def rate_rows(remainder_norms: Sequence[float], certificate: float) -> tuple[RateRow, ...]:
    """Tabulate ``||r_m||`` against ``M / sqrt(m)`` for ``m = 1 .. len(remainder_norms)``."""
    a_const = certificate**2
    rows: list[RateRow] = []
    for index, norm in enumerate(remainder_norms):
        m = index + 1
        bound = certificate / math.sqrt(m)
        recurrence: bool | None = None
        if index + 1 < len(remainder_norms) and a_const > 0.0:
            d_now = norm**2
            d_next = remainder_norms[index + 1] ** 2
            recurrence = d_next <= d_now * (1.0 - d_now / a_const) + RECURRENCE_SLACK * a_const
        rows.append(
            RateRow(
                m=m,
                remainder_norm=float(norm),
                bound=bound,
                passed=norm <= bound + BOUND_SLACK * max(certificate, 1.0),
                recurrence_holds=recurrence,
            )
        )
    return tuple(rows)


def rate_report(
    signal: AtomicSignal,
    max_iters: int,
    cfg: SearchConfig,
    *,
    trunc_order: int = DEFAULT_TRUNC_ORDER,
    energy_tol: float = 1e-24,
) -> RateReport:
    """Decompose the synthesised signal and check ``||r_m|| <= M / sqrt(m)`` row by row."""
    if not signal.atoms:
        raise ValueError("rate_report needs at least one atom")
    f = signal.synthesize(trunc_order)
    certificate = signal.certificate
    state = afd_decompose(f, max_iters, energy_tol, cfg)
    result = state.snapshot(
        {"search": cfg.snapshot(), "max_iters": max_iters, "energy_tol": energy_tol}
    )
    signal_norm = f.norm()
    return RateReport(
        rows=rate_rows(state.remainder_norms, certificate),
        certificate=certificate,
        signal_norm=signal_norm,
        norm_within_certificate=signal_norm <= certificate * (1.0 + BOUND_SLACK),
        result=result,
    )


__all__ = [
    "Atom",
    "AtomicSignal",
    "RateReport",
    "RateRow",
    "RecurrenceCheck",
    "check_recurrence",
    "rate_report",
    "rate_rows",
    "recurrence_bound_holds",
]
