import json

import pytest

from stopcontagion.experiments import (
    child_seed,
    columns,
    expand_cells,
    format_rows,
    run_experiment,
    run_oracle_suite,
    spec_string,
    summarize,
    summary_path,
    write_rows,
    write_summary,
)
from stopcontagion.schemas import ExperimentConfig, InstanceDump


def localtw_config(**overrides):
    values = dict(experiment="localtw", model="tree", n=[60], delta=[3], k=[2, 5], trials=4, seed=3)
    values.update(overrides)
    return ExperimentConfig(**values)


def test_child_seeds_are_stable_and_distinct():
    cell = {"model": "gnp", "n": 100, "d": 2.0, "k": 8}
    assert child_seed("localtw", cell, 0, 1) == child_seed("localtw", dict(reversed(list(cell.items()))), 0, 1)
    seeds = {child_seed("localtw", cell, trial, 1) for trial in range(50)}
    assert len(seeds) == 50
    assert child_seed("localtw", cell, 0, 1) != child_seed("localtw", cell, 0, 2)
    assert all(0 <= s < 2**63 for s in seeds)


def test_columns_are_fixed():
    assert columns("spread") == [
        "experiment", "model", "n", "d", "delta", "eps", "side", "k", "r", "trial", "seed",
        "seeds", "spread", "ratio", "rounds", "flagged", "perimeter_ok",
    ]
    assert columns("edgespan", timing=True)[-1] == "wall_time"


def test_cells_follow_sweep_order():
    config = ExperimentConfig(experiment="localtw", model="gnp", n=[50], d=[1.0, 2.0], k=[2, 4])
    cells = expand_cells(config)
    assert [(c["d"], c["k"]) for c in cells] == [(1.0, 2), (1.0, 4), (2.0, 2), (2.0, 4)]
    assert spec_string(cells[0]) == "gnp:n=50,d=1.0"


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="localtw", model="hypercube")
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="spread", n=[])
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="spread", k=[-1])
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="spread", trials=0)


def test_localtw_on_trees():
    config = localtw_config()
    rows = run_experiment(config)
    assert len(rows) == 8
    assert [row.trial for row in rows] == [0, 1, 2, 3] * 2
    assert all(row.metrics["width"] == 1 for row in rows)
    summary = summarize(config, rows)
    assert summary.cells == 2
    assert summary.checks == {"linear_in_k": True, "width_within_excess": True}
    assert summary.constants["max_estimate_per_k"] == 0.5


def test_localtw_k2_with_edges():
    config = ExperimentConfig(experiment="localtw", model="gnp", n=[60], d=[4.0], k=[2], trials=3)
    assert {row.metrics["width"] for row in run_experiment(config)} == {1}


def test_localtw_skips_impossible_cells():
    config = localtw_config(k=[100], trials=2)
    rows = run_experiment(config)
    assert all(row.metrics["skipped"] for row in rows)
    assert summarize(config, rows).cells == 0


def test_runs_are_reproducible():
    config = localtw_config(model="noisytree", eps=[1.0], k=[4])
    first = run_experiment(config)
    assert format_rows("localtw", first) == format_rows("localtw", run_experiment(config))


def test_process_pool_gives_the_same_rows():
    config = ExperimentConfig(experiment="edgespan", model="noisytree", n=[300], delta=[3], eps=[0.0, 1.0], k=[4], trials=3)
    assert format_rows("edgespan", run_experiment(config, threads=2)) == format_rows("edgespan", run_experiment(config))


def test_spread_without_seeds():
    config = ExperimentConfig(experiment="spread", model="noisytree", n=[200], k=[0], trials=3)
    rows = run_experiment(config)
    assert all(row.metrics["spread"] == 0 for row in rows)


def test_spread_ceiling_flags_trials():
    config = ExperimentConfig(experiment="spread", model="complete", n=[10], k=[2], r=[2], trials=2, ceiling=1.0)
    rows = run_experiment(config)
    assert all(row.metrics["spread"] == 8 and row.metrics["flagged"] for row in rows)
    summary = summarize(config, rows)
    assert not summary.checks["ceiling_respected"]
    assert summary.constants["c_linear"] == 4.0


def test_spread_on_grids_keeps_perimeter():
    config = ExperimentConfig(experiment="spread", model="grid", side=[12], k=[4, 16], r=[2], trials=10)
    rows = run_experiment(config)
    assert all(row.metrics["perimeter_ok"] for row in rows)
    summary = summarize(config, rows)
    assert summary.checks["perimeter_nonincreasing"]
    assert summary.constants["c_quadratic"] is not None


def test_edgespan_on_trees_has_no_excess():
    config = ExperimentConfig(experiment="edgespan", model="noisytree", n=[500], delta=[3], eps=[0.0], k=[2, 8], trials=5)
    rows = run_experiment(config)
    assert all(row.metrics["excess"] == 0 for row in rows)
    assert summarize(config, rows).checks["trees_have_no_excess"]


def test_row_files(tmp_path):
    config = localtw_config(trials=2)
    rows = run_experiment(config)
    out = tmp_path / "rows.csv"
    write_rows(out, "localtw", rows)
    text = out.read_text()
    assert text.splitlines()[0] == ",".join(columns("localtw"))
    assert len(text.splitlines()) == 5
    path = write_summary(out, summarize(config, rows))
    assert path == summary_path(out) == tmp_path / "rows.csv.summary.json"
    assert json.loads(path.read_text())["experiment"] == "localtw"
    records = json.loads(format_rows("localtw", rows, "json"))
    assert records[0]["model"] == "tree"
    assert "wall_time" in format_rows("localtw", rows, timing=True).splitlines()[0]


@pytest.mark.parametrize("suite, count", [("gidm", 30), ("min", 10), ("stop", 10)])
def test_oracle_suites_pass(suite, count):
    report = run_oracle_suite(suite, count, seed=0)
    assert report.passed, report.failures
    assert report.count == count


def test_empty_oracle_run_passes():
    assert run_oracle_suite("gidm", 0, seed=0).passed


def test_mutant_solver_is_caught(tmp_path):
    report = run_oracle_suite("min", 3, seed=1, dump_dir=tmp_path, solver=lambda instance: -1)
    assert not report.passed
    assert [f.index for f in report.failures] == [0, 1, 2]
    dump = InstanceDump.model_validate_json((tmp_path / "min-0000.json").read_text())
    assert dump.actual == -1
    assert dump.slack is not None
