from __future__ import annotations

import json
from pathlib import Path

import pytest

from src.afd.config import RunConfig, SearchConfig, load_run_config, load_search_config
from src.afd.search import candidate_grid
from src.algebra.quat import DomainError

pytestmark = pytest.mark.afd_unit


def test_search_defaults_snapshot() -> None:
    snapshot = SearchConfig().snapshot()
    assert snapshot["radial_levels"] == 24
    assert snapshot["sphere_points"] == 512
    assert snapshot["rho_max"] == pytest.approx(0.95)
    assert snapshot["single_slice"] is None


@pytest.mark.parametrize(
    "overrides",
    [
        {"radial_levels": 1},
        {"sphere_points": 0},
        {"rho_max": 1.0},
        {"rho_max": 0.0},
        {"refine_iters": -1},
        {"refine_tol": 0.0},
        {"refine_restarts": -1},
        {"workers": 0},
        {"chunk_size": 0},
    ],
)
def test_search_rejects_invalid_values(overrides: dict[str, float]) -> None:
    with pytest.raises(ValueError):
        SearchConfig(**overrides)  # type: ignore[arg-type]


def test_single_slice_is_normalised() -> None:
    cfg = SearchConfig(single_slice=(0.0, 3.0, 4.0))
    assert cfg.single_slice == pytest.approx((0.0, 0.6, 0.8))
    assert cfg.slice_unit is not None
    restricted = SearchConfig().restricted_to([2.0, 0.0, 0.0])
    assert restricted.single_slice == (1.0, 0.0, 0.0)
    assert restricted.snapshot()["single_slice"] == [1.0, 0.0, 0.0]
    with pytest.raises(DomainError):
        SearchConfig(single_slice=(0.0, 0.0, 0.0))


def test_run_config_validation() -> None:
    with pytest.raises(ValueError):
        RunConfig(trunc_order=-1)
    with pytest.raises(ValueError):
        RunConfig(max_iters=-2)
    with pytest.raises(ValueError):
        RunConfig(energy_tol=float("nan"))
    with pytest.raises(ValueError):
        RunConfig(energy_tol=-1e-3)


def test_from_mapping_accepts_flat_search_keys() -> None:
    cfg = RunConfig.from_mapping(
        {"max_iters": 7, "rho_max": 0.8, "search": {"sphere_points": 64}}
    )
    assert cfg.max_iters == 7
    assert cfg.search.rho_max == pytest.approx(0.8)
    assert cfg.search.sphere_points == 64


def test_from_mapping_rejects_unknown_keys() -> None:
    with pytest.raises(ValueError, match="Unknown configuration key: colour"):
        RunConfig.from_mapping({"colour": "blue"})
    with pytest.raises(ValueError, match="Unknown search settings: beam"):
        SearchConfig.from_mapping({"beam": 3})
    with pytest.raises(ValueError, match="search must be a mapping"):
        RunConfig.from_mapping({"search": [1, 2]})


def test_with_overrides_skips_none_and_forwards_rho_max() -> None:
    base = RunConfig()
    updated = base.with_overrides(max_iters=3, energy_tol=None, rho_max=0.5, seed=9)
    assert updated.max_iters == 3
    assert updated.energy_tol == base.energy_tol
    assert updated.seed == 9
    assert updated.search.rho_max == pytest.approx(0.5)
    assert base.search.rho_max == pytest.approx(0.95)
    with pytest.raises(ValueError):
        base.with_overrides(rho_max=1.5)


def test_load_yaml_and_json(tmp_path: Path) -> None:
    yaml_path = tmp_path / "afd.yaml"
    yaml_path.write_text(
        "max_iters: 12\n"
        "energy_tol: 1.0e-8\n"
        "search:\n"
        "  radial_levels: 8\n"
        "  single_slice: [0, 0, 1]\n",
        encoding="utf-8",
    )
    cfg = load_run_config(yaml_path)
    assert cfg.max_iters == 12
    assert cfg.energy_tol == pytest.approx(1e-8)
    assert cfg.search.radial_levels == 8
    assert cfg.search.single_slice == (0.0, 0.0, 1.0)
    assert load_search_config(yaml_path) == cfg.search

    json_path = tmp_path / "afd.json"
    json_path.write_text(json.dumps(cfg.snapshot()), encoding="utf-8")
    assert load_run_config(json_path) == cfg


def test_load_errors(tmp_path: Path) -> None:
    with pytest.raises(FileNotFoundError):
        load_run_config(tmp_path / "missing.yaml")
    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ValueError, match="must contain a mapping"):
        load_run_config(listing)
    empty = tmp_path / "empty.yaml"
    empty.write_text("", encoding="utf-8")
    assert load_run_config(empty) == RunConfig()


def test_committed_template_loads() -> None:
    template = Path(__file__).resolve().parents[2] / "config" / "afd.yaml"
    cfg = load_run_config(template)
    assert cfg.search.rho_max < 1.0


def test_default_grid_is_scored_on_threads() -> None:
    cfg = SearchConfig()
    assert cfg.workers == 4
    assert candidate_grid(cfg).shape[0] > cfg.chunk_size
    template = load_search_config(Path(__file__).resolve().parents[2] / "config" / "afd.yaml")
    assert template.workers == cfg.workers
