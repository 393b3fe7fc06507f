"""Signal specification files: parsing, validation and synthesis.

Two input kinds are accepted::

    {"kind": "coeffs", "trunc_order": 64, "coeffs": [[w, x, y, z], ...]}
    {"kind": "atoms", "trunc_order": 256,
     "atoms": [{"point": [w, x, y, z], "coeff": [w, x, y, z]}, ...]}

Atom inputs carry the certificate ``M = sum |c_k|`` used by the rate bound.
"""

from __future__ import annotations

import json
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from src.afd.rate import Atom, AtomicSignal
from src.algebra.quat import Quaternion
from src.algebra.sliceseries import DEFAULT_TRUNC_ORDER, SliceSeries
from src.hardy.space import BallPoint

KINDS = ("coeffs", "atoms")


class SignalSpecError(ValueError):
    """Malformed signal input; the message names the line/column or field path."""


@dataclass(frozen=True)
class SignalSpec:
    """A parsed signal description."""

    kind: str
    trunc_order: int
    coeffs: tuple[tuple[float, float, float, float], ...] = ()
    atoms: AtomicSignal | None = None

    @property
    def certificate(self) -> float | None:
        """``M = sum |c_k|`` for atom inputs, ``None`` otherwise."""
        return self.atoms.certificate if self.atoms is not None else None

    def with_trunc_order(self, trunc_order: int) -> SignalSpec:
        if trunc_order < 0:
            raise SignalSpecError("trunc_order: must be non-negative")
        if self.kind == "coeffs" and len(self.coeffs) > trunc_order + 1:
            raise SignalSpecError(
                f"coeffs: {len(self.coeffs)} entries exceed trunc_order={trunc_order}"
            )
        return SignalSpec(
            kind=self.kind, trunc_order=trunc_order, coeffs=self.coeffs, atoms=self.atoms
        )

    def to_series(self) -> SliceSeries:
        if self.atoms is not None:
            return self.atoms.synthesize(self.trunc_order)
        if not self.coeffs:
            return SliceSeries.zeros(self.trunc_order)
        return SliceSeries.from_quaternions(np.asarray(self.coeffs), self.trunc_order)


def _quad(value: Any, path: str) -> tuple[float, float, float, float]:
    if not isinstance(value, Sequence) or isinstance(value, str) or len(value) != 4:
        raise SignalSpecError(f"{path}: expected a list of 4 numbers [w, x, y, z]")
    out: list[float] = []
    for index, item in enumerate(value):
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise SignalSpecError(f"{path}[{index}]: expected a number")
        if not math.isfinite(float(item)):
            raise SignalSpecError(f"{path}[{index}]: must be finite")
        out.append(float(item))
    return (out[0], out[1], out[2], out[3])


def _trunc_order(payload: Mapping[str, Any]) -> int:
    value = payload.get("trunc_order", DEFAULT_TRUNC_ORDER)
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise SignalSpecError("trunc_order: expected a non-negative integer")
    return value


def _parse_atoms(payload: Mapping[str, Any]) -> AtomicSignal:
    items = payload.get("atoms")
    if not isinstance(items, list):
        raise SignalSpecError("atoms: expected a list")
    atoms: list[Atom] = []
    for index, item in enumerate(items):
        path = f"atoms[{index}]"
        if not isinstance(item, Mapping):
            raise SignalSpecError(f"{path}: expected an object with point and coeff")
        for key in ("point", "coeff"):
            if key not in item:
                raise SignalSpecError(f"{path}.{key}: missing")
        point = _quad(item["point"], f"{path}.point")
        coeff = _quad(item["coeff"], f"{path}.coeff")
        if not math.sqrt(sum(c * c for c in point)) < 1.0:
            raise SignalSpecError(f"{path}.point: |b| must be < 1")
        atoms.append(Atom(BallPoint.from_sequence(point), Quaternion.from_array(coeff)))
    return AtomicSignal(tuple(atoms))


def spec_from_mapping(payload: Any) -> SignalSpec:
    """Validate a decoded JSON document."""
    if not isinstance(payload, Mapping):
        raise SignalSpecError("<root>: expected a JSON object")
    kind = payload.get("kind")
    if kind not in KINDS:
        raise SignalSpecError(f"kind: expected one of {', '.join(KINDS)}, got {kind!r}")
    order = _trunc_order(payload)
    if kind == "atoms":
        return SignalSpec(kind="atoms", trunc_order=order, atoms=_parse_atoms(payload))

    items = payload.get("coeffs")
    if not isinstance(items, list):
        raise SignalSpecError("coeffs: expected a list")
    coeffs = tuple(_quad(item, f"coeffs[{index}]") for index, item in enumerate(items))
    if len(coeffs) > order + 1:
        raise SignalSpecError(f"coeffs: {len(coeffs)} entries exceed trunc_order={order}")
    return SignalSpec(kind="coeffs", trunc_order=order, coeffs=coeffs)


def parse_signal_text(text: str, source: str = "<input>") -> SignalSpec:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SignalSpecError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    try:
        return spec_from_mapping(payload)
    except SignalSpecError as exc:
        raise SignalSpecError(f"{source}: {exc}") from exc


def load_signal(path: Path | str) -> SignalSpec:
    signal_path = Path(path)
    try:
        text = signal_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SignalSpecError(f"{signal_path}: cannot read input ({exc.strerror})") from exc
    return parse_signal_text(text, str(signal_path))


def parse_point(text: str) -> Quaternion:
    """Parse ``"w,x,y,z"`` into a quaternion."""
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != 4:
        raise SignalSpecError(f"--point: expected 4 comma-separated numbers, got {text!r}")
    try:
        values = [float(part) for part in parts]
    except ValueError as exc:
        raise SignalSpecError(f"--point: {exc}") from exc
    return Quaternion.from_array(values)


__all__ = [
    "KINDS",
    "SignalSpec",
    "SignalSpecError",
    "load_signal",
    "parse_point",
    "parse_signal_text",
    "spec_from_mapping",
]
