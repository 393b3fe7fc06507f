from __future__ import annotations

import math

import numpy as np
import pytest

from src.afd.config import SearchConfig
from src.afd.rate import (
    Atom,
    AtomicSignal,
    check_recurrence,
    rate_report,
    rate_rows,
    recurrence_bound_holds,
)
from src.algebra.quat import ONE, Quaternion
from src.algebra.sliceseries import series_sum
from src.hardy.space import BallPoint, szego_kernel

pytestmark = pytest.mark.afd_unit


def _recurrence_sequence(first: float, bound_constant: float, length: int) -> list[float]:
    values = [first]
    for _ in range(length - 1):
        values.append(values[-1] * (1.0 - values[-1] / bound_constant))
    return values


def test_recurrence_with_equality_meets_the_bound() -> None:
    d = _recurrence_sequence(0.5, 1.0, 4)
    assert d == [0.5, 0.25, 0.1875, 0.15234375]
    check = check_recurrence(d, 1.0)
    assert check.hypothesis_holds
    assert check.bound_holds
    assert check.worst_ratio == pytest.approx(0.609375)


def test_recurrence_bound_for_long_sequences() -> None:
    for first in (1.0, 0.9, 0.3, 1e-3):
        d = _recurrence_sequence(first, 1.0, 500)
        assert recurrence_bound_holds(d, 1.0)


def test_bound_can_hold_without_the_hypothesis() -> None:
    check = check_recurrence([1.0, 0.5, 0.25], 1.0)
    assert not check.hypothesis_holds
    assert check.bound_holds
    assert check.worst_ratio == pytest.approx(1.0)
    assert not recurrence_bound_holds([1.0, 0.6], 1.0)


def test_recurrence_edge_cases() -> None:
    empty = check_recurrence([], 2.0)
    assert empty.hypothesis_holds and empty.bound_holds
    assert empty.worst_ratio == 0.0
    with pytest.raises(ValueError):
        check_recurrence([0.1], 0.0)
    with pytest.raises(ValueError):
        check_recurrence([0.1, -0.1], 1.0)


def test_rate_rows_tabulate_bound_and_recurrence() -> None:
    rows = rate_rows([2.0, 1.0, 0.5], 2.0)
    assert [row.m for row in rows] == [1, 2, 3]
    expected_bounds = [2.0, 2.0 / math.sqrt(2), 2.0 / math.sqrt(3)]
    assert [row.bound for row in rows] == pytest.approx(expected_bounds)
    assert all(row.passed for row in rows)
    assert [row.recurrence_holds for row in rows] == [False, True, None]

    failing = rate_rows([1.0, 1.0], 1.0)
    assert failing[0].passed
    assert not failing[1].passed


def test_atomic_signal_certificate_and_synthesis() -> None:
    a = BallPoint.from_sequence([0.2, 0.1, 0.0, -0.3])
    b = BallPoint.from_sequence([-0.4, 0.0, 0.3, 0.0])
    c = Quaternion(0.0, 3.0, 4.0, 0.0)
    signal = AtomicSignal.from_pairs([(a, c), (b, ONE)])
    assert signal.certificate == pytest.approx(6.0)
    expected = series_sum([szego_kernel(a, 64).right_mul(c), szego_kernel(b, 64)], 64)
    assert signal.synthesize(64).allclose(expected, 0.0)
    assert signal.synthesize(64).norm() <= signal.certificate

    payload = signal.to_dict()
    assert payload["atoms"][0] == {"point": [0.2, 0.1, 0.0, -0.3], "coeff": [0.0, 3.0, 4.0, 0.0]}
    assert AtomicSignal.from_dict(payload) == signal


def test_rate_report_rejects_empty_signal() -> None:
    with pytest.raises(ValueError):
        rate_report(AtomicSignal(()), 3, SearchConfig())


@pytest.mark.afd_search
def test_rate_report_on_two_atoms() -> None:
    signal = AtomicSignal(
        (
            Atom(BallPoint.from_sequence([0.1, 0.5, 0.0, 0.0]), ONE),
            Atom(BallPoint.from_sequence([-0.2, 0.0, 0.0, 0.45]), Quaternion(0.0, 0.0, 0.6, 0.0)),
        )
    )
    cfg = SearchConfig(radial_levels=12, sphere_points=256, rho_max=0.9)
    report = rate_report(signal, 4, cfg, trunc_order=128)
    assert report.certificate == pytest.approx(1.6)
    assert report.norm_within_certificate
    assert report.all_passed
    assert 0.0 < report.worst_ratio <= 1.0
    assert [row.m for row in report.rows] == list(range(1, len(report.rows) + 1))
    assert report.rows[0].remainder_norm == pytest.approx(report.signal_norm)
    assert report.result.steps == len(report.rows) - 1
    assert np.all(np.diff([row.remainder_norm for row in report.rows]) <= 1e-12)
