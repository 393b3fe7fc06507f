"""Compare full-ball and single-slice parameter searches on quaternionic signals.

Run as ``python -m scripts.experiments.run_single_slice_comparison``.
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from src.afd.config import SearchConfig, load_search_config
from src.afd.experiments import single_slice_comparison
from src.services.diagnostics import configure_logging
from src.synthesis import random_atomic_signal

from .common import base_payload, build_context, write_payload

_DEFAULT_SEARCH = SearchConfig(radial_levels=12, sphere_points=256)


def _parse_direction(text: str) -> tuple[float, float, float]:
    parts = [float(part) for part in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"--direction expects x,y,z, got {text!r}")
    return parts[0], parts[1], parts[2]


def main(argv: list[str] | None = None) -> Path:
    parser = argparse.ArgumentParser(
        description="Captured energy of the full-ball search against a single-slice search"
    )
    parser.add_argument("--output", help="Directory for result bundles")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--signals", type=int, default=3, help="Number of random signals")
    parser.add_argument("--atoms", type=int, default=4, help="Atoms per signal")
    parser.add_argument("--steps", type=int, default=5, help="Greedy steps per run")
    parser.add_argument("--direction", default="1,0,0", help="Slice direction x,y,z")
    parser.add_argument("--config", type=Path, help="YAML or JSON search configuration")
    parser.add_argument("--verbose", action="store_true")
    args = parser.parse_args(argv)
    configure_logging(verbose=args.verbose)

    cfg = load_search_config(args.config) if args.config is not None else _DEFAULT_SEARCH
    direction = _parse_direction(args.direction)
    context = build_context("single_slice_comparison", args.output, args.seed)
    payload = base_payload()
    rng = np.random.default_rng(args.seed)

    runs = []
    for _ in range(args.signals):
        signal = random_atomic_signal(rng, args.atoms, 0.8)
        comparison = single_slice_comparison(signal.synthesize(), args.steps, cfg, direction)
        runs.append({"signal": signal.to_dict(), "comparison": comparison.to_dict()})
        if not comparison.dominated:
            payload["summary"]["notes"].append(
                f"slice search captured more energy on signal {len(runs) - 1}"
            )

    payload["search"] = cfg.snapshot()
    payload["runs"] = runs
    dominated = all(run["comparison"]["dominated"] for run in runs)
    payload["summary"]["status"] = "completed" if dominated else "violated"
    return write_payload(context, payload)


if __name__ == "__main__":
    main()
