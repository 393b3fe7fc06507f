"""Command-line front door: ``decompose``, ``verify``, ``rate`` and ``eval``.

Exit codes are 0 on success, 1 for a failed verification, a numeric domain error or an
overflow, and 2 for usage or input errors.  Command output goes to stdout; structured logs
go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Callable, Sequence
from dataclasses import replace
from pathlib import Path

import numpy as np
import yaml

from src.afd.config import RunConfig, load_run_config
from src.afd.decompose import afd_decompose
from src.afd.rate import rate_report
from src.algebra.quat import DomainError
from src.algebra.sliceseries import evaluate
from src.services.diagnostics import DecompositionDiagnostics, configure_logging, get_logger

from .reports import rate_payload, write_decay_csv, write_json, write_rate_csv
from .signals import SignalSpec, SignalSpecError, load_signal, parse_point
from .verify import ALL_SUITES, SUITE_NAMES, run_suite

PROG = "slice-afd"
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

# Without an explicit --energy-tol the rate check runs every requested step.
RATE_ENERGY_TOL = 1e-24

_LOGGER = get_logger("slice_afd.cli", service="slice-afd", component="cli")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--verbose", action="store_true", help="Emit INFO logs on stderr")


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="YAML or JSON run configuration")
    parser.add_argument("--iters", type=int, help="Maximum number of greedy steps")
    parser.add_argument("--energy-tol", type=float, dest="energy_tol", help="Relative energy stop")
    parser.add_argument("--rho-max", type=float, dest="rho_max", help="Search radius bound")
    parser.add_argument(
        "--trunc-order", type=int, dest="trunc_order", help="Override the input truncation order"
    )
    parser.add_argument("--seed", type=int, help="Recorded with the run configuration")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG, description="Adaptive decomposition of slice-regular signals on the unit ball"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    decompose = commands.add_parser("decompose", help="Run the greedy decomposition")
    _add_common(decompose)
    _add_run_options(decompose)
    decompose.add_argument("--input", type=Path, required=True, help="Signal specification")
    decompose.add_argument("--out", type=Path, default=Path("afd_result.json"))
    decompose.add_argument("--csv", type=Path, help="Decay table (defaults next to --out)")
    decompose.set_defaults(handler=cmd_decompose)

    verify = commands.add_parser("verify", help="Run a seeded invariant suite")
    _add_common(verify)
    verify.add_argument("suite", choices=[*SUITE_NAMES, ALL_SUITES])
    verify.add_argument("--seed", type=int, default=0, help="Offset added to the suite seeds")
    verify.add_argument(
        "--quick", action="store_true", help="Smoke run with far fewer cases than the release gate"
    )
    verify.set_defaults(handler=cmd_verify)

    rate = commands.add_parser("rate", help="Check remainder decay against M / sqrt(m)")
    _add_common(rate)
    _add_run_options(rate)
    rate.add_argument("--input", type=Path, required=True, help="Atom signal specification")
    rate.add_argument("--csv", type=Path, default=Path("rate.csv"))
    rate.add_argument("--out", type=Path, help="Optional JSON report")
    rate.set_defaults(handler=cmd_rate)

    evaluate_cmd = commands.add_parser("eval", help="Evaluate a signal at a point")
    _add_common(evaluate_cmd)
    evaluate_cmd.add_argument("--input", type=Path, required=True)
    evaluate_cmd.add_argument(
        "--trunc-order", type=int, dest="trunc_order", help="Override the input truncation order"
    )
    evaluate_cmd.add_argument("--point", required=True, help="Quaternion as w,x,y,z")
    evaluate_cmd.set_defaults(handler=cmd_eval)
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    base = load_run_config(args.config) if args.config is not None else RunConfig()
    return base.with_overrides(
        max_iters=args.iters,
        energy_tol=args.energy_tol,
        rho_max=args.rho_max,
        trunc_order=args.trunc_order,
        seed=args.seed,
    )


def _load_input(args: argparse.Namespace) -> SignalSpec:
    spec = load_signal(args.input)
    if args.trunc_order is not None:
        spec = spec.with_trunc_order(args.trunc_order)
    return spec


def cmd_decompose(args: argparse.Namespace) -> int:
    spec = _load_input(args)
    run = replace(_run_config(args), trunc_order=spec.trunc_order)
    signal = spec.to_series()
    diagnostics = DecompositionDiagnostics()
    state = afd_decompose(
        signal, run.max_iters, run.energy_tol, run.search, diagnostics=diagnostics
    )
    result = state.snapshot(run.snapshot())

    payload = result.to_dict()
    payload["certificate"] = spec.certificate
    out_path = write_json(args.out, payload)
    csv_path = write_decay_csv(
        args.csv if args.csv is not None else args.out.with_suffix(".csv"),
        result.remainder_norms,
        spec.certificate,
    )
    _LOGGER.info(
        "decompose_written",
        json=str(out_path),
        csv=str(csv_path),
        health=diagnostics.health_report(),
    )
    print(
        f"steps={result.steps} relative_remainder={result.relative_remainder:.6e} "
        f"termination={result.termination_reason}"
    )
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_suite(args.suite, seed=args.seed, quick=args.quick)
    for result in results:
        print(result.line())
    failures = [result for result in results if not result.passed]
    print(f"{len(results) - len(failures)}/{len(results)} properties passed")
    return EXIT_OK if not failures else EXIT_FAILED


def cmd_rate(args: argparse.Namespace) -> int:
    spec = _load_input(args)
    if spec.atoms is None:
        raise SignalSpecError(f"{args.input}: rate needs an atoms input carrying M")
    if not spec.atoms.atoms:
        raise SignalSpecError(f"{args.input}: atoms: at least one atom is required")
    run = replace(_run_config(args), trunc_order=spec.trunc_order)
    energy_tol = args.energy_tol if args.energy_tol is not None else RATE_ENERGY_TOL
    report = rate_report(
        spec.atoms,
        run.max_iters,
        run.search,
        trunc_order=spec.trunc_order,
        energy_tol=energy_tol,
    )
    write_rate_csv(args.csv, report)
    if args.out is not None:
        write_json(args.out, rate_payload(report))
    print(
        f"rows={len(report.rows)} all_passed={str(report.all_passed).lower()} "
        f"worst_ratio={report.worst_ratio:.6e} certificate={report.certificate:.6e}"
    )
    return EXIT_OK if report.all_passed else EXIT_FAILED


def cmd_eval(args: argparse.Namespace) -> int:
    spec = _load_input(args)
    point = parse_point(args.point)
    value = evaluate(spec.to_series(), point)
    print(json.dumps(value.to_list()))
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(verbose=args.verbose)
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        with np.errstate(over="raise"):
            return handler(args)
    except (FloatingPointError, OverflowError) as exc:
        _LOGGER.error("numeric_overflow", command=args.command, error=str(exc))
        print(f"{PROG}: error: numeric overflow: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except SignalSpecError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        _LOGGER.error("domain_error", command=args.command, error=str(exc))
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (ValueError, FileNotFoundError, yaml.YAMLError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
