from __future__ import annotations

import json
import math
from pathlib import Path

import pytest

from src.cli.reports import (
    OUTPUT_DIR_ENV,
    decay_rows,
    dumps_json,
    resolve_output_path,
    write_decay_csv,
    write_json,
)

pytestmark = pytest.mark.afd_unit


def test_relative_paths_follow_output_dir(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "out"))
    target = resolve_output_path("nested/result.json")
    assert target == tmp_path / "out" / "nested" / "result.json"
    assert target.parent.is_dir()

    absolute = tmp_path / "elsewhere" / "x.csv"
    assert resolve_output_path(absolute) == absolute


def test_json_is_sorted_and_rejects_nan(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)
    path = write_json(tmp_path / "r.json", {"b": 1, "a": [0.5]})
    text = path.read_text(encoding="utf-8")
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": [0.5], "b": 1}
    with pytest.raises(ValueError):
        dumps_json({"x": math.nan})


def test_decay_rows_with_and_without_certificate() -> None:
    assert decay_rows([2.0, 1.0], None) == [(1, 2.0, None), (2, 1.0, None)]
    rows = decay_rows([2.0, 1.0, 0.5, 0.25], 4.0)
    expected = [4.0, 4.0 / math.sqrt(2), 4.0 / math.sqrt(3), 2.0]
    assert [row[2] for row in rows] == pytest.approx(expected)


def test_decay_csv_layout(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)
    path = write_decay_csv(tmp_path / "decay.csv", [1.0, 0.25], 1.0)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "m,remainder_norm,bound"
    assert lines[1] == "1,1.0,1.0"
    assert lines[2].startswith("2,0.25,0.7071")

    bare = write_decay_csv(tmp_path / "bare.csv", [3.0], None)
    assert bare.read_text(encoding="utf-8").splitlines()[1] == "1,3.0,"
