"""Monte-Carlo experiment harness with seeded, order-independent sweeps.

Each experiment sweeps one scenario parameter; every (sweep value,
instance) cell gets its own generator derived from the master seed, so
results are identical whether instances run sequentially or on a worker
pool. Selection algorithms operate on the channel table built from the
eavesdropper's estimated position; the reported objective re-evaluates
the chosen assignment against the true position.

Sweeps that leave the sampled geometry distribution untouched (receiver
FoV and localization-error sweeps) reuse the same instance seeds across
sweep values, so consecutive grid points are paired comparisons: the
eavesdropper-agnostic strategy is exactly invariant along the error
sweep, and plateau regions of the FoV sweeps do not flicker from
resampling noise. Sweeps that change what is sampled (power grid resamples
by convention, user count changes the instance shape) draw fresh
instances per value.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .channel import build_channel_table
from .errors import InvalidParameterError
from .rates import Assignment, sum_secrecy_rate
from .scenario import Scenario, ScenarioConfig, reference_layout, sample_instance, save_scenario
from .strategies import (
    StrategyKind,
    channel_gain_strategy,
    eve_aware_strategy,
    global_search,
    random_strategy,
)
from .tabu import TsConfig, run_tabu_search
from .version import __version__

EXPERIMENT_IDS = (
    "convergence",
    "power_sweep",
    "ue_count_sweep",
    "eve_fov_sweep",
    "ue_fov_sweep",
    "localization_error_sweep",
    "layout_dump",
)

DEFAULT_SWEEPS: dict[str, tuple] = {
    "convergence": (0,),
    "power_sweep": tuple(range(10, 31, 2)),
    "ue_count_sweep": tuple(range(1, 9)),
    "eve_fov_sweep": tuple(range(30, 91, 10)),
    "ue_fov_sweep": tuple(range(30, 91, 10)),
    "localization_error_sweep": (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0),
    "layout_dump": (0,),
}

DEFAULT_SOLVERS = (
    StrategyKind.TABU_SEARCH,
    StrategyKind.RANDOM,
    StrategyKind.CHANNEL_GAIN,
    StrategyKind.EVE_AWARE_CHANNEL_GAIN,
)

RESULT_HEADER = ("experiment_id", "sweep_value", "solver", "mean", "stderr", "n", "seed")
TRACE_HEADER = ("instance", "iteration", "current_value", "best_value", "evaluations")
LAYOUT_HEADER = ("kind", "index", "x", "y", "z", "fov_deg", "coverage_radius_m")

# Salts separating the random streams drawn for one instance cell.
_SCENARIO_STREAM = 0
_TABU_STREAM = 1
_RANDOM_STRATEGY_STREAM = 2


@dataclass(frozen=True)
class ExperimentSpec:
    experiment_id: str
    base_config: ScenarioConfig = field(default_factory=ScenarioConfig)
    sweep_values: tuple = ()
    num_instances: int = 500
    solvers: tuple[StrategyKind, ...] = DEFAULT_SOLVERS
    master_seed: int = 0
    ts_max_iterations: int | None = None
    ts_repetition_threshold: int | None = None
    enumeration_budget: int = 10_000_000
    force_oracle: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.experiment_id not in EXPERIMENT_IDS:
            raise InvalidParameterError(
                f"unknown experiment {self.experiment_id!r}; "
                f"choose from {', '.join(EXPERIMENT_IDS)}"
            )
        if not self.sweep_values:
            object.__setattr__(
                self, "sweep_values", DEFAULT_SWEEPS[self.experiment_id]
            )
        self.validate()

    def validate(self) -> None:
        if self.num_instances < 1:
            raise InvalidParameterError("num_instances must be >= 1")
        if self.experiment_id != "layout_dump" and not self.solvers:
            raise InvalidParameterError("solver list must not be empty")
        if StrategyKind.GLOBAL_SEARCH in self.solvers and not self.force_oracle:
            worst_m = self.base_config.num_ues
            if self.experiment_id == "ue_count_sweep":
                worst_m = max(int(v) for v in self.sweep_values)
            if worst_m > 4:
                raise InvalidParameterError(
                    f"global search over {worst_m} UEs would enumerate too many "
                    "assignments; pass force_oracle/--force-oracle to insist"
                )

    def config_for(self, sweep_value) -> ScenarioConfig:
        cfg = self.base_config
        eid = self.experiment_id
        if eid == "power_sweep":
            return replace(cfg, led_power_dbm=float(sweep_value))
        if eid == "ue_count_sweep":
            return replace(cfg, num_ues=int(sweep_value))
        if eid == "eve_fov_sweep":
            return replace(cfg, eve_fov_deg=float(sweep_value))
        if eid == "ue_fov_sweep":
            return replace(cfg, ue_fov_deg=float(sweep_value))
        if eid == "localization_error_sweep":
            return replace(cfg, eve_localization_error_m=float(sweep_value))
        return cfg

    PAIRED_SWEEPS = ("localization_error_sweep", "ue_fov_sweep", "eve_fov_sweep")

    def instance_key(self, sweep_idx: int, instance_idx: int) -> tuple[int, ...]:
        # Shared instance seeds across geometry-preserving sweeps; fresh
        # draws where the sweep changes what gets sampled.
        if self.experiment_id in self.PAIRED_SWEEPS:
            return (self.master_seed, instance_idx)
        return (self.master_seed, sweep_idx, instance_idx)


@dataclass(frozen=True)
class ResultRow:
    experiment_id: str
    sweep_value: float
    solver: str
    mean: float
    stderr: float
    n: int
    seed: int


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    rows: list[ResultRow]
    values: dict[tuple[int, str], np.ndarray]  # (sweep_idx, solver) -> per-instance
    traces: list[tuple[int, int, float, float, int]]
    resamples: int
    elapsed_s: float
    layout_scenario: Scenario | None = None


def _rng(key: tuple[int, ...], stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(key + (stream,)))


def _seed(key: tuple[int, ...], stream: int) -> int:
    return int(np.random.SeedSequence(key + (stream,)).generate_state(1)[0])


def _true_eve_table(table, scenario: Scenario):
    from .channel import channel_gain

    eve_gains = np.array(
        [channel_gain(led, scenario.eve_true) for led in scenario.leds]
    )
    reachable = tuple(int(k) for k in np.nonzero(eve_gains > 0.0)[0])
    return replace(table, eve_gains=eve_gains, eve_reachable_set=reachable)


def _run_instance(spec: ExperimentSpec, sweep_idx: int, instance_idx: int) -> dict:
    """One Monte-Carlo cell: sample, solve with every solver, report."""
    key = spec.instance_key(sweep_idx, instance_idx)
    config = spec.config_for(spec.sweep_values[sweep_idx])
    stats: dict = {}
    scenario = sample_instance(config, _rng(key, _SCENARIO_STREAM), stats)
    table = build_channel_table(scenario, eve_position="estimated")
    table_true = _true_eve_table(table, scenario)
    noise = scenario.noise

    out: dict = {
        "values": {},
        "resamples": stats.get("resamples", 0),
        "trace": None,
        "oracle_evaluations": None,
    }
    for solver in spec.solvers:
        if solver is StrategyKind.RANDOM:
            assignment = random_strategy(table, _rng(key, _RANDOM_STRATEGY_STREAM))
        elif solver is StrategyKind.CHANNEL_GAIN:
            assignment = channel_gain_strategy(table)
        elif solver is StrategyKind.EVE_AWARE_CHANNEL_GAIN:
            assignment = eve_aware_strategy(table)
        elif solver is StrategyKind.GLOBAL_SEARCH:
            assignment, _, count = global_search(table, noise, spec.enumeration_budget)
            out["oracle_evaluations"] = count
        elif solver is StrategyKind.TABU_SEARCH:
            ts_config = TsConfig(
                rng_seed=_seed(key, _TABU_STREAM),
                max_iterations=spec.ts_max_iterations,
                repetition_threshold=spec.ts_repetition_threshold,
            )
            assignment, _, trace = run_tabu_search(table, noise, ts_config)
            if spec.experiment_id == "convergence":
                out["trace"] = [tuple(rec) for rec in trace]
        else:
            raise InvalidParameterError(f"unhandled solver {solver}")
        out["values"][solver.value] = sum_secrecy_rate(table_true, assignment, noise)
    return out


def _instance_task(args) -> tuple[int, int, dict]:
    spec, sweep_idx, instance_idx = args
    return sweep_idx, instance_idx, _run_instance(spec, sweep_idx, instance_idx)


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Execute all cells of the sweep and aggregate means and errors."""
    started = time.perf_counter()
    if spec.experiment_id == "layout_dump":
        return ExperimentResult(
            spec=spec,
            rows=[],
            values={},
            traces=[],
            resamples=0,
            elapsed_s=time.perf_counter() - started,
            layout_scenario=reference_layout(spec.base_config),
        )

    tasks = [
        (spec, sweep_idx, instance_idx)
        for sweep_idx in range(len(spec.sweep_values))
        for instance_idx in range(spec.num_instances)
    ]
    cells: dict[tuple[int, int], dict] = {}
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            for sweep_idx, instance_idx, cell in pool.map(
                _instance_task, tasks, chunksize=8
            ):
                cells[(sweep_idx, instance_idx)] = cell
    else:
        for args in tasks:
            sweep_idx, instance_idx, cell = _instance_task(args)
            cells[(sweep_idx, instance_idx)] = cell

    rows: list[ResultRow] = []
    values: dict[tuple[int, str], np.ndarray] = {}
    traces: list[tuple[int, int, float, float, int]] = []
    resamples = 0
    for sweep_idx, sweep_value in enumerate(spec.sweep_values):
        for solver in spec.solvers:
            per_instance = np.array(
                [
                    cells[(sweep_idx, i)]["values"][solver.value]
                    for i in range(spec.num_instances)
                ]
            )
            values[(sweep_idx, solver.value)] = per_instance
            n = per_instance.size
            stderr = (
                float(per_instance.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
            )
            rows.append(
                ResultRow(
                    experiment_id=spec.experiment_id,
                    sweep_value=float(sweep_value),
                    solver=solver.value,
                    mean=float(per_instance.mean()),
                    stderr=stderr,
                    n=n,
                    seed=spec.master_seed,
                )
            )
    for (sweep_idx, instance_idx), cell in sorted(cells.items()):
        resamples += cell["resamples"]
        if cell["trace"] is not None:
            for iteration, current_value, best_value, evaluations in cell["trace"]:
                traces.append(
                    (instance_idx, iteration, current_value, best_value, evaluations)
                )

    return ExperimentResult(
        spec=spec,
        rows=rows,
        values=values,
        traces=traces,
        resamples=resamples,
        elapsed_s=time.perf_counter() - started,
    )


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def write_results(result: ExperimentResult, out_dir) -> list[Path]:
    """Write the results CSV, run manifest, and any auxiliary files.

    The CSV layout (fixed header, 17 significant digits) is byte-stable
    for identical (spec, seed) reruns; timestamps live only in the
    manifest.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    spec = result.spec

    if result.rows:
        results_path = out / f"{spec.experiment_id}_results.csv"
        with open(results_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(RESULT_HEADER)
            for row in result.rows:
                writer.writerow(
                    (
                        row.experiment_id,
                        _fmt(row.sweep_value),
                        row.solver,
                        _fmt(row.mean),
                        _fmt(row.stderr),
                        row.n,
                        row.seed,
                    )
                )
        written.append(results_path)

    if result.traces:
        trace_path = out / f"{spec.experiment_id}_trace.csv"
        with open(trace_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(TRACE_HEADER)
            for instance, iteration, current_value, best_value, evaluations in result.traces:
                writer.writerow(
                    (
                        instance,
                        iteration,
                        _fmt(current_value),
                        _fmt(best_value),
                        evaluations,
                    )
                )
        written.append(trace_path)

    if result.layout_scenario is not None:
        written.extend(_write_layout(result.layout_scenario, out))

    manifest = {
        "experiment_id": spec.experiment_id,
        "package_version": __version__,
        "generated_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "master_seed": spec.master_seed,
        "num_instances": spec.num_instances,
        "sweep_values": list(spec.sweep_values),
        "solvers": [s.value for s in spec.solvers],
        "scenario_config": asdict(spec.base_config),
        "ts_max_iterations": spec.ts_max_iterations,
        "ts_repetition_threshold": spec.ts_repetition_threshold,
        "resampled_instances": result.resamples,
        "elapsed_s": result.elapsed_s,
        "outputs": [p.name for p in written],
    }
    manifest_path = out / f"{spec.experiment_id}_manifest.json"
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append(manifest_path)
    return written


def _write_layout(scenario: Scenario, out: Path) -> list[Path]:
    """Positions CSV plus a JSON fixture for one scenario layout."""
    room_height = scenario.room[2]

    def radius(receiver) -> float:
        drop = room_height - receiver.position.z
        return drop * np.tan(receiver.fov)

    layout_path = out / "layout.csv"
    with open(layout_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(LAYOUT_HEADER)
        for k, led in enumerate(scenario.leds):
            pos = led.position
            writer.writerow(("led", k, _fmt(pos.x), _fmt(pos.y), _fmt(pos.z), "", ""))
        for m, ue in enumerate(scenario.ues):
            pos = ue.position
            writer.writerow(
                (
                    "ue",
                    m,
                    _fmt(pos.x),
                    _fmt(pos.y),
                    _fmt(pos.z),
                    _fmt(np.degrees(ue.fov)),
                    _fmt(radius(ue)),
                )
            )
        eve = scenario.eve_true
        writer.writerow(
            (
                "eve",
                0,
                _fmt(eve.position.x),
                _fmt(eve.position.y),
                _fmt(eve.position.z),
                _fmt(np.degrees(eve.fov)),
                _fmt(radius(eve)),
            )
        )
    fixture_path = out / "layout_scenario.json"
    save_scenario(scenario, fixture_path)
    return [layout_path, fixture_path]
