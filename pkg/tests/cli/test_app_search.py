from __future__ import annotations

import csv
import json
from collections.abc import Iterator
from pathlib import Path

import numpy as np
import pytest
import structlog

import src.cli.app as app_module
from src.afd.decompose import reconstruct_from_result
from src.afd.state import AFDResult
from src.algebra.quat import DomainError
from src.cli.app import EXIT_FAILED, EXIT_OK, EXIT_USAGE, build_parser, main
from src.cli.reports import OUTPUT_DIR_ENV
from src.cli.signals import load_signal
from src.synthesis import load_scenario

pytestmark = pytest.mark.afd_search


@pytest.fixture(autouse=True)
def _reset_logging(monkeypatch: pytest.MonkeyPatch) -> Iterator[None]:
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)
    yield
    structlog.reset_defaults()


@pytest.fixture()
def small_config(tmp_path: Path) -> Path:
    path = tmp_path / "afd.yaml"
    path.write_text("search:\n  radial_levels: 12\n  sphere_points: 256\n", encoding="utf-8")
    return path


def _write_signal(tmp_path: Path, payload: dict[str, object], name: str = "signal.json") -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def test_parser_requires_a_command() -> None:
    with pytest.raises(SystemExit) as excinfo:
        build_parser().parse_args([])
    assert excinfo.value.code == EXIT_USAGE


def test_decompose_writes_json_and_csv(
    tmp_path: Path,
    small_config: Path,
    capsys: pytest.CaptureFixture[str],
    monkeypatch: pytest.MonkeyPatch,
) -> None:
    signal = _write_signal(tmp_path, load_scenario("single_atom").to_spec())
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "out"))
    code = main(
        [
            "decompose",
            "--input",
            str(signal),
            "--config",
            str(small_config),
            "--iters",
            "3",
            "--out",
            "run.json",
        ]
    )
    assert code == EXIT_OK
    stdout = capsys.readouterr().out
    assert "steps=1" in stdout
    assert "termination=energy_tol" in stdout

    payload = json.loads((tmp_path / "out" / "run.json").read_text(encoding="utf-8"))
    assert payload["certificate"] == pytest.approx(1.0)
    assert payload["termination_reason"] == "energy_tol"
    assert payload["trunc_order"] == 256
    assert payload["config"]["max_iters"] == 3
    assert payload["config"]["search"]["sphere_points"] == 256
    assert len(payload["params"]) == 1

    with (tmp_path / "out" / "run.csv").open(encoding="utf-8") as handle:
        rows = list(csv.DictReader(handle))
    assert [row["m"] for row in rows] == ["1", "2"]
    assert float(rows[0]["bound"]) == pytest.approx(1.0)


def test_decompose_respects_trunc_order_flag(
    tmp_path: Path, small_config: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    signal = _write_signal(tmp_path, load_scenario("fourier_polynomial").to_spec())
    out = tmp_path / "poly.json"
    code = main(
        [
            "decompose",
            "--input",
            str(signal),
            "--config",
            str(small_config),
            "--iters",
            "2",
            "--trunc-order",
            "16",
            "--out",
            str(out),
            "--csv",
            str(tmp_path / "poly_decay.csv"),
        ]
    )
    assert code == EXIT_OK
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["trunc_order"] == 16
    assert payload["certificate"] is None
    assert (tmp_path / "poly_decay.csv").read_text(encoding="utf-8").startswith("m,")
    assert "steps=2" in capsys.readouterr().out


def test_eval_prints_quaternion(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    signal = _write_signal(
        tmp_path, {"kind": "coeffs", "trunc_order": 4, "coeffs": [[1, 0, 0, 0], [0, 1, 0, 0]]}
    )
    code = main(["eval", "--input", str(signal), "--point", "0.5,0,0,0"])
    assert code == EXIT_OK
    assert json.loads(capsys.readouterr().out) == [1.0, 0.5, 0.0, 0.0]


def test_usage_errors_exit_with_two(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    signal = _write_signal(tmp_path, {"kind": "coeffs", "coeffs": [[1, 0, 0, 0]]})
    assert main(["eval", "--input", str(signal), "--point", "1,2"]) == EXIT_USAGE
    assert "--point" in capsys.readouterr().err

    missing = tmp_path / "missing.json"
    assert main(["decompose", "--input", str(missing)]) == EXIT_USAGE
    assert "cannot read input" in capsys.readouterr().err

    broken = tmp_path / "broken.json"
    broken.write_text('{"kind": "coeffs",\n "coeffs": [1, 2', encoding="utf-8")
    assert main(["eval", "--input", str(broken), "--point", "0,0,0,0"]) == EXIT_USAGE
    assert f"{broken}:2:" in capsys.readouterr().err

    bad_config = tmp_path / "bad.yaml"
    bad_config.write_text("colour: blue\n", encoding="utf-8")
    assert main(["decompose", "--input", str(signal), "--config", str(bad_config)]) == EXIT_USAGE
    assert "Unknown configuration key" in capsys.readouterr().err


def test_overflow_exits_with_one(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    signal = _write_signal(
        tmp_path, {"kind": "coeffs", "trunc_order": 1, "coeffs": [[0, 0, 0, 0], [1e200, 0, 0, 0]]}
    )
    assert main(["eval", "--input", str(signal), "--point", "1e200,0,0,0"]) == EXIT_FAILED
    assert "numeric overflow" in capsys.readouterr().err


def test_rate_checks_the_bound(
    tmp_path: Path, small_config: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    spec = load_scenario("cross_slice_pair").to_spec()
    signal = _write_signal(tmp_path, spec)
    table = tmp_path / "rate.csv"
    report = tmp_path / "rate.json"
    code = main(
        [
            "rate",
            "--input",
            str(signal),
            "--config",
            str(small_config),
            "--iters",
            "3",
            "--trunc-order",
            "128",
            "--csv",
            str(table),
            "--out",
            str(report),
        ]
    )
    assert code == EXIT_OK
    assert "all_passed=true" in capsys.readouterr().out
    with table.open(encoding="utf-8") as handle:
        rows = list(csv.DictReader(handle))
    assert rows
    assert {row["passed"] for row in rows} == {"pass"}
    payload = json.loads(report.read_text(encoding="utf-8"))
    assert payload["certificate"] == pytest.approx(1.6)
    assert payload["norm_within_certificate"] is True


def test_rate_needs_atoms(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    coeffs = _write_signal(tmp_path, {"kind": "coeffs", "coeffs": [[1, 0, 0, 0]]})
    assert main(["rate", "--input", str(coeffs), "--csv", str(tmp_path / "r.csv")]) == EXIT_USAGE
    assert "atoms input" in capsys.readouterr().err

    empty = _write_signal(tmp_path, {"kind": "atoms", "atoms": []}, "empty.json")
    assert main(["rate", "--input", str(empty), "--csv", str(tmp_path / "r.csv")]) == EXIT_USAGE
    assert "at least one atom" in capsys.readouterr().err


def test_verify_reports_and_exit_code(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["verify", "tm"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[-1] == "3/3 properties passed"
    assert all(line.startswith("PASS tm.") for line in lines[:-1])

    with pytest.raises(SystemExit) as excinfo:
        main(["verify", "everything"])
    assert excinfo.value.code == EXIT_USAGE


def test_domain_error_during_a_run_exits_with_one(
    tmp_path: Path, capsys: pytest.CaptureFixture[str], monkeypatch: pytest.MonkeyPatch
) -> None:
    def failing(*args: object, **kwargs: object) -> None:
        raise DomainError("step 1: <f, T_n> differs from <f_n, e_a>")

    monkeypatch.setattr(app_module, "afd_decompose", failing)
    signal = _write_signal(tmp_path, load_scenario("single_atom").to_spec())
    code = main(["decompose", "--input", str(signal), "--out", str(tmp_path / "run.json")])
    assert code == EXIT_FAILED
    assert "differs" in capsys.readouterr().err
    assert not (tmp_path / "run.json").exists()


def test_decompose_is_byte_identical_and_reloads(tmp_path: Path, small_config: Path) -> None:
    signal = _write_signal(tmp_path, load_scenario("five_atoms").to_spec())
    outputs = []
    for name in ("first", "second"):
        out = tmp_path / f"{name}.json"
        args = ["decompose", "--input", str(signal), "--config", str(small_config)]
        args += ["--iters", "3", "--trunc-order", "128", "--out", str(out)]
        assert main(args) == EXIT_OK
        outputs.append((out.read_bytes(), out.with_suffix(".csv").read_bytes()))
    assert outputs[0] == outputs[1]

    payload = json.loads(outputs[0][0].decode("utf-8"))
    result = AFDResult.from_dict(payload)
    rebuilt = load_signal(signal).with_trunc_order(128).to_series()
    assert np.array_equal(rebuilt.coeffs, result.signal.coeffs)
    for n in range(result.steps + 1):
        remainder = (rebuilt - reconstruct_from_result(result, n)).norm()
        assert abs(remainder - result.remainder_norms[n]) <= 1e-12


def test_verify_all_quick_is_repeatable(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["verify", "all", "--quick"]) == EXIT_OK
    first = capsys.readouterr().out
    assert main(["verify", "all", "--quick"]) == EXIT_OK
    second = capsys.readouterr().out
    assert first == second
    lines = first.strip().splitlines()
    assert all(line.startswith("PASS ") for line in lines[:-1])
    assert lines[-1] == f"{len(lines) - 1}/{len(lines) - 1} properties passed"
