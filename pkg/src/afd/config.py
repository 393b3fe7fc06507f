"""Configuration structures for the greedy decomposition and its parameter search."""

from __future__ import annotations

import json
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import yaml

from src.algebra.quat import UnitImaginary
from src.algebra.sliceseries import DEFAULT_TRUNC_ORDER


@dataclass(frozen=True)
class SearchConfig:
    """Grid and refinement parameters for the maximum selection step.

    ``single_slice`` restricts candidates to the complex slice ``C_I`` spanned by
    ``1`` and the given imaginary direction.
    """

    radial_levels: int = 24
    sphere_points: int = 512
    rho_max: float = 0.95
    refine_iters: int = 200
    refine_tol: float = 1e-10
    refine_restarts: int = 2
    workers: int = 4
    chunk_size: int = 2048
    single_slice: tuple[float, float, float] | None = None

    def __post_init__(self) -> None:
        if self.radial_levels < 2:
            raise ValueError("radial_levels must be at least 2")
        if self.sphere_points <= 0:
            raise ValueError("sphere_points must be positive")
        if not 0.0 < self.rho_max < 1.0:
            raise ValueError("rho_max must lie in (0, 1)")
        if self.refine_iters < 0:
            raise ValueError("refine_iters must be non-negative")
        if not self.refine_tol > 0.0:
            raise ValueError("refine_tol must be positive")
        if self.refine_restarts < 0:
            raise ValueError("refine_restarts must be non-negative")
        if self.workers <= 0:
            raise ValueError("workers must be positive")
        if self.chunk_size <= 0:
            raise ValueError("chunk_size must be positive")
        if self.single_slice is not None:
            unit = UnitImaginary.from_vector(self.single_slice)
            object.__setattr__(self, "single_slice", unit.direction)

    @property
    def slice_unit(self) -> UnitImaginary | None:
        if self.single_slice is None:
            return None
        return UnitImaginary(self.single_slice)

    def restricted_to(self, direction: Sequence[float]) -> SearchConfig:
        """Copy of this configuration searching only the slice of ``direction``."""
        x, y, z = (float(c) for c in direction)
        return replace(self, single_slice=(x, y, z))

    def snapshot(self) -> dict[str, Any]:
        """Return a serialisable copy of the configuration."""
        return {
            "radial_levels": self.radial_levels,
            "sphere_points": self.sphere_points,
            "rho_max": self.rho_max,
            "refine_iters": self.refine_iters,
            "refine_tol": self.refine_tol,
            "refine_restarts": self.refine_restarts,
            "workers": self.workers,
            "chunk_size": self.chunk_size,
            "single_slice": list(self.single_slice) if self.single_slice is not None else None,
        }

    @classmethod
    def from_mapping(cls, payload: Mapping[str, Any]) -> SearchConfig:
        known = {item.name for item in fields(cls)}
        unknown = set(payload) - known
        if unknown:
            raise ValueError(f"Unknown search settings: {', '.join(sorted(unknown))}")
        values = dict(payload)
        if values.get("single_slice") is not None:
            values["single_slice"] = tuple(float(c) for c in values["single_slice"])
        return cls(**values)


@dataclass(frozen=True)
class RunConfig:
    """Loop-level settings plus the search configuration."""

    trunc_order: int = DEFAULT_TRUNC_ORDER
    max_iters: int = 100
    energy_tol: float = 1e-10
    seed: int = 0
    search: SearchConfig = field(default_factory=SearchConfig)

    def __post_init__(self) -> None:
        if self.trunc_order < 0:
            raise ValueError("trunc_order must be non-negative")
        if self.max_iters < 0:
            raise ValueError("max_iters must be non-negative")
        if not (self.energy_tol >= 0.0 and math.isfinite(self.energy_tol)):
            raise ValueError("energy_tol must be a finite non-negative number")

    def with_overrides(self, **overrides: Any) -> RunConfig:
        """Apply non-``None`` overrides; ``rho_max`` is forwarded to the search settings."""
        values = {key: value for key, value in overrides.items() if value is not None}
        rho_max = values.pop("rho_max", None)
        search = self.search if rho_max is None else replace(self.search, rho_max=float(rho_max))
        return replace(self, search=search, **values)

    def snapshot(self) -> dict[str, Any]:
        return {
            "trunc_order": self.trunc_order,
            "max_iters": self.max_iters,
            "energy_tol": self.energy_tol,
            "seed": self.seed,
            "search": self.search.snapshot(),
        }

    @classmethod
    def from_mapping(cls, payload: Mapping[str, Any]) -> RunConfig:
        """Build from a nested mapping; search keys may also appear at the top level."""
        loop_keys = {"trunc_order", "max_iters", "energy_tol", "seed"}
        search_keys = {item.name for item in fields(SearchConfig)}
        nested = payload.get("search") or {}
        if not isinstance(nested, Mapping):
            raise ValueError("search must be a mapping")
        search_values = dict(nested)
        loop_values: dict[str, Any] = {}
        for key, value in payload.items():
            if key == "search":
                continue
            if key in loop_keys:
                loop_values[key] = value
            elif key in search_keys:
                search_values[key] = value
            else:
                raise ValueError(f"Unknown configuration key: {key}")
        return cls(search=SearchConfig.from_mapping(search_values), **loop_values)


def _load_mapping(path: Path) -> Mapping[str, Any]:
    with path.open("r", encoding="utf-8") as handle:
        if path.suffix.lower() in {".yaml", ".yml"}:
            payload = yaml.safe_load(handle)
        else:
            payload = json.load(handle)
    if payload is None:
        return {}
    if not isinstance(payload, Mapping):
        raise ValueError(f"Configuration file {path} must contain a mapping")
    return payload


def load_run_config(path: Path | str) -> RunConfig:
    """Read a YAML (``.yaml``/``.yml``) or JSON configuration file."""
    config_path = Path(path)
    if not config_path.exists():
        raise FileNotFoundError(f"Configuration not found at {config_path}")
    return RunConfig.from_mapping(_load_mapping(config_path))


def load_search_config(path: Path | str) -> SearchConfig:
    return load_run_config(path).search


__all__ = ["RunConfig", "SearchConfig", "load_run_config", "load_search_config"]
