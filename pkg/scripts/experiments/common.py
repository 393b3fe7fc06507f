"""Common helpers for the experiment runners.

Each runner writes one JSON bundle into the output directory.  Bundles carry a metadata
block (script name, generation time, seed) in front of the experiment payload; the CLI
result files never include timestamps, but these archival bundles do.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from src.cli.reports import OUTPUT_DIR_ENV, dumps_json
from src.services.diagnostics import get_logger

_LOGGER = get_logger("slice_afd.experiments", service="slice-afd", component="experiments")


@dataclass
class ExperimentContext:
    name: str
    output_dir: Path
    seed: int
    timestamp: float

    @property
    def output_path(self) -> Path:
        return self.output_dir / f"{self.name}.json"


def build_context(name: str, output: str | None, seed: int) -> ExperimentContext:
    target = output or os.environ.get(OUTPUT_DIR_ENV) or "artifacts/experiments"
    output_dir = Path(target).expanduser().resolve()
    output_dir.mkdir(parents=True, exist_ok=True)
    return ExperimentContext(name=name, output_dir=output_dir, seed=seed, timestamp=time.time())


def base_payload() -> dict[str, Any]:
    return {
        "summary": {
            "status": "pending",
            "notes": [],
        }
    }


def write_payload(context: ExperimentContext, payload: dict[str, Any]) -> Path:
    metadata = {
        "metadata": {
            "generated_at": context.timestamp,
            "script": context.name,
            "seed": context.seed,
        }
    }
    output = {**metadata, **payload}
    context.output_path.write_text(dumps_json(output), encoding="utf-8")
    _LOGGER.info(
        "experiment_written",
        script=context.name,
        path=str(context.output_path),
        status=payload["summary"]["status"],
    )
    return context.output_path
