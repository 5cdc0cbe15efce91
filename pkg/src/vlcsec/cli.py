"""Command-line entry point for running the Monte-Carlo experiments.

Usage examples:

    vlcsec --experiment power_sweep --seed 7 --instances 500 --out results/
    vlcsec --experiment convergence --instances 20 --solvers tabu_search,global_search --out runs/conv
    vlcsec --experiment layout_dump --out fixtures/

A JSON config file can override any scenario field or experiment setting;
command-line flags override the file.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .errors import VlcsecError
from .experiment import (
    DEFAULT_SWEEPS,
    EXPERIMENT_IDS,
    ExperimentSpec,
    run_experiment,
    write_results,
)
from .scenario import ScenarioConfig
from .strategies import StrategyKind


def _parse_solvers(text: str) -> tuple[StrategyKind, ...]:
    names = [part.strip() for part in text.split(",") if part.strip()]
    try:
        return tuple(StrategyKind(name) for name in names)
    except ValueError:
        valid = ", ".join(kind.value for kind in StrategyKind)
        raise argparse.ArgumentTypeError(f"solvers must be among: {valid}")


def _parse_sweep(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError("sweep must be a comma-separated number list")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vlcsec",
        description="Seeded Monte-Carlo experiments for secure LED selection",
    )
    parser.add_argument(
        "--experiment", required=True, choices=EXPERIMENT_IDS, help="experiment to run"
    )
    parser.add_argument("--config", help="JSON file with scenario/experiment settings")
    parser.add_argument("--seed", type=int, help="master seed (default 0)")
    parser.add_argument("--instances", type=int, help="Monte-Carlo instances per sweep value")
    parser.add_argument("--out", default="results", help="output directory")
    parser.add_argument(
        "--solvers",
        type=_parse_solvers,
        help="comma-separated solver list, e.g. tabu_search,channel_gain",
    )
    parser.add_argument(
        "--sweep", type=_parse_sweep, help="comma-separated sweep values override"
    )
    parser.add_argument(
        "--force-oracle",
        action="store_true",
        help="allow global search even on large instances",
    )
    parser.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    return parser


def spec_from_args(args: argparse.Namespace) -> ExperimentSpec:
    file_config: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            file_config = json.load(fh)

    scenario_fields = {f.name for f in dataclasses.fields(ScenarioConfig)}
    scenario_kwargs = {k: v for k, v in file_config.items() if k in scenario_fields}
    base_config = ScenarioConfig(**scenario_kwargs)

    solvers = args.solvers
    if solvers is None and "solvers" in file_config:
        solvers = tuple(StrategyKind(name) for name in file_config["solvers"])
    if solvers is None:
        solvers = (
            (StrategyKind.TABU_SEARCH, StrategyKind.GLOBAL_SEARCH)
            if args.experiment == "convergence"
            else None
        )

    sweep = args.sweep
    if sweep is None and "sweep_values" in file_config:
        sweep = tuple(file_config["sweep_values"])

    kwargs = dict(
        experiment_id=args.experiment,
        base_config=base_config,
        master_seed=args.seed if args.seed is not None else file_config.get("seed", 0),
        num_instances=(
            args.instances
            if args.instances is not None
            else file_config.get("instances", 500)
        ),
        force_oracle=args.force_oracle or file_config.get("force_oracle", False),
        workers=args.workers,
        ts_max_iterations=file_config.get("ts_max_iterations"),
        ts_repetition_threshold=file_config.get("ts_repetition_threshold"),
    )
    if solvers is not None:
        kwargs["solvers"] = tuple(solvers)
    if sweep is not None:
        kwargs["sweep_values"] = tuple(sweep)
    if "enumeration_budget" in file_config:
        kwargs["enumeration_budget"] = int(file_config["enumeration_budget"])
    return ExperimentSpec(**kwargs)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = spec_from_args(args)
        result = run_experiment(spec)
        written = write_results(result, args.out)
    except VlcsecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for row in result.rows:
        print(
            f"{row.experiment_id} sweep={row.sweep_value:g} {row.solver}: "
            f"mean={row.mean:.4f} stderr={row.stderr:.4f} (n={row.n})"
        )
    if result.resamples:
        print(f"resampled {result.resamples} infeasible instance draw(s)")
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
