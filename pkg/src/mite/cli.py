"""Command-line entry point: ``mite run | sweep | verify``.

Precedence for run/sweep settings: built-in defaults, then the ``--config``
JSON file, then explicit flags. Exit codes: 0 success, 1 verification
failure, 2 configuration error, 3 degenerate model.
"""
from __future__ import annotations

import argparse
import sys

from .config import (
    DEFAULT_THRESHOLD,
    SWEEP_TRAJECTORIES,
    RunConfig,
    SweepConfig,
    load_config_file,
    merge_config,
)
from .checks import run_checks
from .errors import ConfigError, DegenerateFixedPointError
from .experiments import cmd_run, cmd_sweep

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_DEGENERATE = 3


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", choices=("single_qubit", "tfim", "search"))
    parser.add_argument("--qubits", "-L", type=int, dest="qubits")
    parser.add_argument("--lambda", type=float, dest="lam")
    parser.add_argument("--omega", type=float)
    parser.add_argument("--dim", type=int)
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--steps", type=int)
    parser.add_argument("--trajectories", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--correction", choices=("on", "off"))
    parser.add_argument("--backend", choices=("kraus", "pointer"))
    parser.add_argument("--out", help="output directory for artifacts")
    parser.add_argument("--config", help="flat JSON config file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mite",
        description=(
            "Measurement-driven imaginary-time evolution: weak-measurement "
            "trajectories with outcome-conditioned corrections."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute one configured ensemble run")
    _add_run_flags(run)

    sweep = sub.add_parser("sweep", help="scan epsilon or dimension")
    _add_run_flags(sweep)
    sweep.add_argument("--sweep-var", choices=("epsilon", "dimension"))
    sweep.add_argument("--values", help="comma-separated sweep values")
    sweep.add_argument("--threshold", type=float)

    sub.add_parser("verify", help="run the built-in invariant suite")
    return parser


def _flag_dict(args: argparse.Namespace) -> dict:
    return {
        "model": args.model,
        "qubits": args.qubits,
        "lambda": args.lam,
        "omega": args.omega,
        "dimension": args.dim,
        "epsilon": args.epsilon,
        "steps": args.steps,
        "trajectories": args.trajectories,
        "seed": args.seed,
        "correction": args.correction,
        "backend": args.backend,
        "out": args.out,
    }


def _load_file(args: argparse.Namespace) -> dict | None:
    return load_config_file(args.config) if args.config else None


def _do_run(args: argparse.Namespace) -> int:
    file_values = _load_file(args)
    cfg = merge_config(file_values, _flag_dict(args))
    out_dir = cfg.out or "mite_run"
    payload = cmd_run(cfg, out_dir)
    print(f"run complete: {payload['trajectories']} trajectories x "
          f"{payload['steps']} steps -> {out_dir}")
    print(f"mean final fidelity {payload['mean_final_fidelity']:.6f}")
    return EXIT_OK


def _parse_values(raw: str, variable: str) -> tuple:
    items = [v.strip() for v in raw.split(",") if v.strip()]
    if variable == "dimension":
        return tuple(int(v) for v in items)
    return tuple(float(v) for v in items)


def _do_sweep(args: argparse.Namespace) -> int:
    file_values = dict(_load_file(args) or {})
    sweep_var = args.sweep_var or file_values.get("sweep_var")
    raw_values = args.values or file_values.get("values")
    threshold = args.threshold
    if threshold is None:
        threshold = file_values.get("threshold", DEFAULT_THRESHOLD)
    if not sweep_var or not raw_values:
        raise ConfigError("sweep needs --sweep-var and --values")
    if isinstance(raw_values, str):
        values = _parse_values(raw_values, sweep_var)
    else:
        values = tuple(raw_values)

    flag_values = _flag_dict(args)
    merged_has_traj = ("trajectories" in file_values) or (
        flag_values["trajectories"] is not None
    )
    if not merged_has_traj:
        file_values["trajectories"] = SWEEP_TRAJECTORIES
    template = merge_config(file_values, flag_values)
    if template.model == RunConfig().model and "model" not in file_values and (
        flag_values["model"] is None
    ):
        template = merge_config({**file_values, "model": "search"}, flag_values)
    sweep = SweepConfig(
        variable=sweep_var, values=values, threshold=float(threshold), template=template
    )
    out_dir = template.out or "mite_sweep"
    result = cmd_sweep(sweep, out_dir)
    print(f"sweep complete: {len(result['rows'])} points -> {out_dir}")
    if "t90_loglog" in result:
        print(f"log-log T90 slope {result['t90_loglog']['slope']:.4f}")
    return EXIT_OK


def _do_verify() -> int:
    results = run_checks()
    width = max(len(r.name) for r in results)
    failures = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name:<{width}}  {r.detail}")
        failures += 0 if r.passed else 1
    if failures:
        print(f"{failures} check(s) failed")
        return EXIT_VERIFY_FAILED
    print("all checks passed")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _do_run(args)
        if args.command == "sweep":
            return _do_sweep(args)
        return _do_verify()
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except DegenerateFixedPointError as exc:
        print(f"degenerate model: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
