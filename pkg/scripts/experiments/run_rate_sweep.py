"""Sweep random atomic signals and tabulate remainder decay against ``M / sqrt(m)``.

Run as ``python -m scripts.experiments.run_rate_sweep``.
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from src.afd.config import SearchConfig, load_search_config
from src.afd.rate import rate_report
from src.services.diagnostics import configure_logging
from src.synthesis import random_atomic_signal

from .common import base_payload, build_context, write_payload

_DEFAULT_SEARCH = SearchConfig(radial_levels=12, sphere_points=256)


def main(argv: list[str] | None = None) -> Path:
    parser = argparse.ArgumentParser(description="Check the M / sqrt(m) remainder bound")
    parser.add_argument("--output", help="Directory for result bundles")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--signals", type=int, default=5, help="Number of random signals")
    parser.add_argument("--max-atoms", type=int, default=10, dest="max_atoms")
    parser.add_argument("--iters", type=int, default=20, help="Greedy steps per signal")
    parser.add_argument("--rho", type=float, default=0.8, help="Largest atom modulus")
    parser.add_argument("--config", type=Path, help="YAML or JSON search configuration")
    parser.add_argument("--verbose", action="store_true")
    args = parser.parse_args(argv)
    configure_logging(verbose=args.verbose)

    if args.max_atoms <= 0:
        raise ValueError("max_atoms must be positive")
    cfg = load_search_config(args.config) if args.config is not None else _DEFAULT_SEARCH
    context = build_context("rate_sweep", args.output, args.seed)
    payload = base_payload()
    rng = np.random.default_rng(args.seed)

    signals = []
    for _ in range(args.signals):
        count = int(rng.integers(1, args.max_atoms + 1))
        signal = random_atomic_signal(rng, count, args.rho)
        report = rate_report(signal, args.iters, cfg)
        signals.append(
            {
                "atoms": count,
                "certificate": report.certificate,
                "signal_norm": report.signal_norm,
                "all_passed": report.all_passed,
                "worst_ratio": report.worst_ratio,
                "remainder_norms": [row.remainder_norm for row in report.rows],
            }
        )

    payload["search"] = cfg.snapshot()
    payload["signals"] = signals
    passed = all(entry["all_passed"] for entry in signals)
    payload["summary"]["status"] = "completed" if passed else "violated"
    if signals:
        worst = max(entry["worst_ratio"] for entry in signals)
        payload["summary"]["notes"].append(f"worst ||r_m|| / (M / sqrt(m)) = {worst:.6f}")
    return write_payload(context, payload)


if __name__ == "__main__":
    main()
