"""Experiment harness: determinism, aggregation, file contracts."""

import csv
import json

import numpy as np
import pytest

from vlcsec import (
    ExperimentSpec,
    InvalidParameterError,
    ScenarioConfig,
    StrategyKind,
    run_experiment,
    write_results,
)
from vlcsec.experiment import RESULT_HEADER, TRACE_HEADER

SMALL = ScenarioConfig(led_rows=3, led_cols=3, num_ues=2)
FAST_SOLVERS = (StrategyKind.TABU_SEARCH, StrategyKind.CHANNEL_GAIN)


def small_spec(**overrides):
    kwargs = dict(
        experiment_id="power_sweep",
        base_config=SMALL,
        sweep_values=(10.0, 20.0, 30.0),
        num_instances=6,
        solvers=FAST_SOLVERS,
        master_seed=5,
    )
    kwargs.update(overrides)
    return ExperimentSpec(**kwargs)


class TestValidation:
    def test_unknown_experiment(self):
        with pytest.raises(InvalidParameterError):
            small_spec(experiment_id="decoherence_sweep")

    def test_empty_solver_list_refused(self):
        with pytest.raises(InvalidParameterError):
            small_spec(solvers=())

    def test_zero_instances_refused(self):
        with pytest.raises(InvalidParameterError):
            small_spec(num_instances=0)

    def test_oracle_refused_above_four_ues(self):
        with pytest.raises(InvalidParameterError) as err:
            ExperimentSpec(
                experiment_id="power_sweep",
                base_config=ScenarioConfig(num_ues=5),
                solvers=(StrategyKind.GLOBAL_SEARCH,),
                num_instances=1,
            )
        assert "force_oracle" in str(err.value)

    def test_oracle_allowed_with_force(self):
        spec = ExperimentSpec(
            experiment_id="power_sweep",
            base_config=ScenarioConfig(num_ues=5),
            solvers=(StrategyKind.GLOBAL_SEARCH,),
            num_instances=1,
            force_oracle=True,
        )
        assert spec.force_oracle

    def test_default_sweep_filled_in(self):
        spec = ExperimentSpec(
            experiment_id="eve_fov_sweep", base_config=SMALL, num_instances=1,
            solvers=FAST_SOLVERS,
        )
        assert spec.sweep_values == tuple(range(30, 91, 10))


class TestDeterminism:
    def test_rerun_identical(self):
        a = run_experiment(small_spec())
        b = run_experiment(small_spec())
        assert a.rows == b.rows

    def test_parallel_matches_sequential(self):
        seq = run_experiment(small_spec(workers=1))
        par = run_experiment(small_spec(workers=2))
        assert seq.rows == par.rows
        for key in seq.values:
            np.testing.assert_array_equal(seq.values[key], par.values[key])

    def test_results_csv_byte_stable(self, tmp_path):
        result = run_experiment(small_spec())
        first = write_results(result, tmp_path / "a")
        second = write_results(run_experiment(small_spec()), tmp_path / "b")
        csv_a = next(p for p in first if p.suffix == ".csv")
        csv_b = next(p for p in second if p.suffix == ".csv")
        assert csv_a.read_bytes() == csv_b.read_bytes()


class TestAggregation:
    def test_row_schema_and_order(self):
        result = run_experiment(small_spec())
        assert len(result.rows) == 3 * len(FAST_SOLVERS)
        for row in result.rows:
            assert row.experiment_id == "power_sweep"
            assert row.n == 6
            assert row.seed == 5
            assert row.stderr >= 0.0
        sweep_order = [row.sweep_value for row in result.rows][:: len(FAST_SOLVERS)]
        assert sweep_order == [10.0, 20.0, 30.0]

    def test_mean_matches_per_instance_values(self):
        result = run_experiment(small_spec())
        for row_idx, row in enumerate(result.rows):
            sweep_idx = row_idx // len(FAST_SOLVERS)
            values = result.values[(sweep_idx, row.solver)]
            assert row.mean == pytest.approx(float(values.mean()), rel=1e-15)

    def test_per_solver_objectives_nonnegative(self):
        result = run_experiment(small_spec())
        for values in result.values.values():
            assert (values >= 0.0).all()


class TestEstimatedVersusTrueEve:
    def test_channel_gain_strategy_error_invariant(self):
        spec = ExperimentSpec(
            experiment_id="localization_error_sweep",
            base_config=ScenarioConfig(led_rows=3, led_cols=3, num_ues=2),
            sweep_values=(0.0, 1.0, 2.0),
            num_instances=8,
            solvers=(StrategyKind.CHANNEL_GAIN, StrategyKind.EVE_AWARE_CHANNEL_GAIN),
            master_seed=3,
        )
        result = run_experiment(spec)
        base = result.values[(0, "channel_gain")]
        for sweep_idx in (1, 2):
            np.testing.assert_array_equal(
                result.values[(sweep_idx, "channel_gain")], base
            )


class TestConvergenceExperiment:
    def test_traces_recorded_and_monotone(self):
        spec = ExperimentSpec(
            experiment_id="convergence",
            base_config=ScenarioConfig(led_rows=3, led_cols=3, num_ues=2),
            num_instances=3,
            solvers=(StrategyKind.TABU_SEARCH, StrategyKind.GLOBAL_SEARCH),
            master_seed=7,
        )
        result = run_experiment(spec)
        assert result.traces
        by_instance = {}
        for instance, iteration, current, best, evals in result.traces:
            by_instance.setdefault(instance, []).append((iteration, best))
        assert set(by_instance) == {0, 1, 2}
        for rows in by_instance.values():
            bests = [b for _, b in rows]
            assert all(b2 >= b1 for b1, b2 in zip(bests, bests[1:]))
        # oracle never below the tabu result on the same instance
        gs = result.values[(0, "global_search")]
        ts = result.values[(0, "tabu_search")]
        assert (gs >= ts - 1e-12).all()


class TestWrittenFiles:
    def test_results_csv_contract(self, tmp_path):
        result = run_experiment(small_spec())
        written = write_results(result, tmp_path)
        results_csv = next(p for p in written if p.name.endswith("_results.csv"))
        with open(results_csv, newline="") as fh:
            rows = list(csv.reader(fh))
        assert tuple(rows[0]) == RESULT_HEADER
        assert len(rows) == 1 + len(result.rows)
        # floats round-trip exactly at 17 significant digits
        for raw, row in zip(rows[1:], result.rows):
            assert float(raw[3]) == row.mean
            assert float(raw[4]) == row.stderr

    def test_manifest_contents(self, tmp_path):
        result = run_experiment(small_spec())
        written = write_results(result, tmp_path)
        manifest = json.loads((tmp_path / "power_sweep_manifest.json").read_text())
        assert manifest["experiment_id"] == "power_sweep"
        assert manifest["master_seed"] == 5
        assert manifest["num_instances"] == 6
        assert manifest["scenario_config"]["led_rows"] == 3
        assert "generated_at" in manifest

    def test_trace_csv_written_for_convergence(self, tmp_path):
        spec = ExperimentSpec(
            experiment_id="convergence",
            base_config=ScenarioConfig(led_rows=3, led_cols=3, num_ues=2),
            num_instances=2,
            solvers=(StrategyKind.TABU_SEARCH,),
            master_seed=2,
        )
        written = write_results(run_experiment(spec), tmp_path)
        trace_csv = next(p for p in written if p.name.endswith("_trace.csv"))
        with open(trace_csv, newline="") as fh:
            rows = list(csv.reader(fh))
        assert tuple(rows[0]) == TRACE_HEADER
        assert len(rows) > 2

    def test_layout_dump(self, tmp_path):
        spec = ExperimentSpec(
            experiment_id="layout_dump", num_instances=1, master_seed=0
        )
        result = run_experiment(spec)
        written = write_results(result, tmp_path)
        layout_csv = next(p for p in written if p.name == "layout.csv")
        with open(layout_csv, newline="") as fh:
            rows = list(csv.reader(fh))
        kinds = [row[0] for row in rows[1:]]
        assert kinds.count("led") == 25
        assert kinds.count("ue") == 5
        assert kinds.count("eve") == 1
        ue_rows = [row for row in rows[1:] if row[0] == "ue"]
        assert float(ue_rows[0][2]) == 1.34 and float(ue_rows[0][3]) == 1.59
        eve_row = next(row for row in rows[1:] if row[0] == "eve")
        assert float(eve_row[2]) == 2.13 and float(eve_row[3]) == 4.25
        assert (tmp_path / "layout_scenario.json").exists()
