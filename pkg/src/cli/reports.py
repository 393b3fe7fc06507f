"""Machine-readable outputs: JSON result bundles and plot-ready CSV tables.

Relative output paths are placed under ``SLICE_AFD_OUTPUT_DIR`` when that variable is
set.  Files are UTF-8 with newline-terminated records and contain no timestamps, so
identical runs produce identical bytes.
"""

from __future__ import annotations

import csv
import json
import math
import os
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from src.afd.rate import RateReport

OUTPUT_DIR_ENV = "SLICE_AFD_OUTPUT_DIR"


def resolve_output_path(path: str | Path) -> Path:
    target = Path(path).expanduser()
    base = os.environ.get(OUTPUT_DIR_ENV, "").strip()
    if base and not target.is_absolute():
        target = Path(base).expanduser() / target
    target.parent.mkdir(parents=True, exist_ok=True)
    return target


def dumps_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path: str | Path, payload: Any) -> Path:
    target = resolve_output_path(path)
    target.write_text(dumps_json(payload), encoding="utf-8")
    return target


def decay_rows(
    remainder_norms: Sequence[float], certificate: float | None
) -> list[tuple[int, float, float | None]]:
    """Rows ``(m, ||r_m||, M / sqrt(m))`` with ``r_1 = f``; the bound is ``None`` without ``M``."""
    rows: list[tuple[int, float, float | None]] = []
    for index, norm in enumerate(remainder_norms):
        m = index + 1
        bound = certificate / math.sqrt(m) if certificate is not None else None
        rows.append((m, float(norm), bound))
    return rows


def write_decay_csv(
    path: str | Path, remainder_norms: Sequence[float], certificate: float | None
) -> Path:
    target = resolve_output_path(path)
    with target.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["m", "remainder_norm", "bound"])
        for m, norm, bound in decay_rows(remainder_norms, certificate):
            writer.writerow([m, repr(norm), "" if bound is None else repr(bound)])
    return target


def write_rate_csv(path: str | Path, report: RateReport) -> Path:
    target = resolve_output_path(path)
    with target.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["m", "remainder_norm", "bound", "passed"])
        for row in report.rows:
            writer.writerow(
                [row.m, repr(row.remainder_norm), repr(row.bound), "pass" if row.passed else "fail"]
            )
    return target


def rate_payload(report: RateReport) -> dict[str, Any]:
    return {
        "certificate": report.certificate,
        "signal_norm": report.signal_norm,
        "norm_within_certificate": report.norm_within_certificate,
        "all_passed": report.all_passed,
        "worst_ratio": report.worst_ratio,
        "rows": [
            {
                "m": row.m,
                "remainder_norm": row.remainder_norm,
                "bound": row.bound,
                "passed": row.passed,
                "recurrence_holds": row.recurrence_holds,
            }
            for row in report.rows
        ],
        "result": report.result.to_dict(),
    }


__all__ = [
    "OUTPUT_DIR_ENV",
    "decay_rows",
    "dumps_json",
    "rate_payload",
    "resolve_output_path",
    "write_decay_csv",
    "write_json",
    "write_rate_csv",
]
