from __future__ import annotations

import json
from collections.abc import Iterator
from pathlib import Path

import pytest
import structlog

from scripts.experiments import run_rate_sweep, run_single_slice_comparison
from scripts.experiments.common import base_payload, build_context, write_payload

pytestmark = pytest.mark.afd_search


@pytest.fixture(autouse=True)
def _reset_logging() -> Iterator[None]:
    yield
    structlog.reset_defaults()


@pytest.fixture()
def tiny_config(tmp_path: Path) -> Path:
    path = tmp_path / "search.yaml"
    path.write_text("search:\n  radial_levels: 6\n  sphere_points: 64\n", encoding="utf-8")
    return path


def test_rate_sweep_bundle(tmp_path: Path, tiny_config: Path) -> None:
    path = run_rate_sweep.main(
        [
            "--output",
            str(tmp_path / "bundles"),
            "--signals",
            "2",
            "--max-atoms",
            "2",
            "--iters",
            "3",
            "--config",
            str(tiny_config),
        ]
    )
    assert path == tmp_path / "bundles" / "rate_sweep.json"
    bundle = json.loads(path.read_text(encoding="utf-8"))
    assert bundle["metadata"]["script"] == "rate_sweep"
    assert bundle["metadata"]["seed"] == 0
    assert len(bundle["signals"]) == 2
    assert bundle["search"]["sphere_points"] == 64
    assert bundle["summary"]["status"] in {"completed", "violated"}
    assert bundle["summary"]["notes"][0].startswith("worst")


def test_rate_sweep_rejects_empty_atom_count(tmp_path: Path) -> None:
    with pytest.raises(ValueError):
        run_rate_sweep.main(["--output", str(tmp_path), "--max-atoms", "0"])


def test_single_slice_comparison_bundle(tmp_path: Path, tiny_config: Path) -> None:
    path = run_single_slice_comparison.main(
        [
            "--output",
            str(tmp_path),
            "--seed",
            "3",
            "--signals",
            "1",
            "--atoms",
            "2",
            "--steps",
            "2",
            "--direction",
            "0,0,2",
            "--config",
            str(tiny_config),
        ]
    )
    bundle = json.loads(path.read_text(encoding="utf-8"))
    assert bundle["metadata"]["seed"] == 3
    (run,) = bundle["runs"]
    assert run["comparison"]["direction"] == [0.0, 0.0, 1.0]
    assert len(run["comparison"]["full_captured"]) == 2
    assert len(run["signal"]["atoms"]) == 2


def test_payload_helpers_write_metadata(tmp_path: Path) -> None:
    context = build_context("helper_check", str(tmp_path / "bundles"), 5)
    payload = base_payload()
    assert payload == {"summary": {"status": "pending", "notes": []}}
    assert base_payload() is not payload

    payload["summary"]["status"] = "completed"
    path = write_payload(context, payload)
    assert path == tmp_path.resolve() / "bundles" / "helper_check.json"
    bundle = json.loads(path.read_text(encoding="utf-8"))
    assert bundle["metadata"]["script"] == "helper_check"
    assert bundle["metadata"]["seed"] == 5
    assert bundle["summary"]["status"] == "completed"
