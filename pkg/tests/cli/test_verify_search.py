from __future__ import annotations

import pytest

from src.cli.verify import run_suite

pytestmark = pytest.mark.afd_search


def _failures(suite: str, *, quick: bool = False) -> list[str]:
    results = run_suite(suite, quick=quick)
    assert results
    assert all(result.suite == suite for result in results)
    return [result.line() for result in results if not result.passed]


def test_kernels_suite_passes() -> None:
    assert _failures("kernels") == []


def test_afd_suite_converges_on_every_signal() -> None:
    results = {result.name: result for result in run_suite("afd")}
    assert results["converges_within_max_iters"].passed
    assert [result.line() for result in results.values() if not result.passed] == []


def test_rate_suite_passes_on_the_quick_sizes() -> None:
    assert _failures("rate", quick=True) == []
