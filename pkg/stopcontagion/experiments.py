"""Seeded experiment campaigns and oracle suites.

Every cell and trial draws from its own child seed, derived by hashing the
experiment id, the cell parameters, the trial index and the root seed, so a
single row can be regenerated without rerunning its neighbours.
"""
import hashlib
import itertools
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from . import crud
from .contagion import (
    DeletionSolution,
    MinContagionInstance,
    StopContagionInstance,
    bruteforce_edge_deletion,
    reduce_min_contagion,
    restrict_to_closure,
    solve_min_contagion_tw,
    solve_randomized_fpt,
    solve_stop_contagion_tw,
)
from .database import bind, get_db
from .decomposition import (
    best_heuristic_decomposition,
    local_treewidth_sample,
    make_nice,
    sample_connected_subset,
)
from .errors import ContagionError, GraphError, NoSolutionFound
from .fileio import write_text
from .gidm import GidmInstance, GidmSolver, gidm_bruteforce
from .graph_core import Graph, connected_components
from .init_db import init_models
from .percolation import IMMUNIZED, Threshold, ThresholdMap, percolate
from .random_models import gnp, grid_perimeter, random_seed_set, substream
from .schemas import ExperimentConfig, FitSummary, InstanceDump, OracleFailure, OracleReport, ResultRow
from .specs import MODELS, build_graph

logger = logging.getLogger(__name__)

SEED_MASK = (1 << 63) - 1
CELL_TRIAL = -1

PARAM_COLUMNS = ("n", "d", "delta", "eps", "side")

METRIC_COLUMNS = {
    "localtw": ("width", "exact", "excess", "skipped"),
    "spread": ("seeds", "spread", "ratio", "rounds", "flagged", "perimeter_ok"),
    "edgespan": ("edges", "excess", "bound_term", "skipped"),
}

EXTRA_KEYS = {
    "localtw": ("k",),
    "spread": ("k", "r"),
    "edgespan": ("k",),
}

Cell = Dict[str, Union[int, float, str]]


def child_seed(experiment: str, cell: Cell, trial: int, root: int) -> int:
    payload = json.dumps([experiment, cell, trial, root], sort_keys=True)
    digest = hashlib.sha256(payload.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") & SEED_MASK


def columns(experiment: str, timing: bool = False) -> List[str]:
    header = ["experiment", "model", *PARAM_COLUMNS, *EXTRA_KEYS[experiment], "trial", "seed"]
    header.extend(METRIC_COLUMNS[experiment])
    if timing:
        header.append("wall_time")
    return header


def cell_keys(config: ExperimentConfig) -> Tuple[str, ...]:
    required, optional = MODELS[config.model]
    return ("model", *required, *optional, *EXTRA_KEYS[config.experiment])


def expand_cells(config: ExperimentConfig) -> List[Cell]:
    """Cartesian product of the sweeps the model and experiment use, in sweep order."""
    required, optional = MODELS[config.model]
    keys = [*required, *optional, *EXTRA_KEYS[config.experiment]]
    sweeps = [getattr(config, key) for key in keys]
    cells = []
    for values in itertools.product(*sweeps):
        cell: Cell = {"model": config.model}
        for key, value in zip(keys, values):
            cell[key] = float(value) if key in ("d", "eps") else int(value)
        cells.append(cell)
    return cells


def spec_string(cell: Cell) -> str:
    required, optional = MODELS[str(cell["model"])]
    body = ",".join(f"{key}={cell[key]}" for key in (*required, *optional))
    return f"{cell['model']}:{body}"


def cell_graph(experiment: str, cell: Cell, root: int) -> Graph:
    return build_graph(spec_string(cell), child_seed(experiment, cell, CELL_TRIAL, root))


def _row(config: ExperimentConfig, cell: Cell, trial: int, seed: int, metrics: dict) -> ResultRow:
    return ResultRow(experiment=config.experiment, cell=cell, trial=trial, seed=seed, metrics=metrics)


def _localtw_cell(config: ExperimentConfig, cell: Cell) -> List[ResultRow]:
    graph = cell_graph(config.experiment, cell, config.seed)
    k = int(cell["k"])
    rows = []
    for trial in range(config.trials):
        seed = child_seed(config.experiment, cell, trial, config.seed)
        started = time.perf_counter()
        try:
            estimate = local_treewidth_sample(graph, k, 1, seed, config.exact_limit)
        except GraphError as e:
            logger.warning(f"localtw cell {cell}: {e.detail}")
            rows.append(_row(config, cell, trial, seed, {"width": None, "exact": None, "excess": None, "skipped": True}))
            continue
        metrics = {"width": estimate.lower, "exact": estimate.exact, "excess": estimate.upper_excess, "skipped": False}
        metrics["wall_time"] = time.perf_counter() - started
        rows.append(_row(config, cell, trial, seed, metrics))
    return rows


def _spread_cell(config: ExperimentConfig, cell: Cell) -> List[ResultRow]:
    graph = cell_graph(config.experiment, cell, config.seed)
    k, r = int(cell["k"]), int(cell["r"])
    on_grid = cell["model"] == "grid"
    rows = []
    for trial in range(config.trials):
        seed = child_seed(config.experiment, cell, trial, config.seed)
        started = time.perf_counter()
        seeds = random_seed_set(graph.n, k, substream(seed, "seeds"))
        trace = percolate(graph, ThresholdMap.uniform(graph.n, r), seeds)
        spread = len(trace.closure) - len(trace.seeds)
        ratio = spread / len(seeds) if seeds else 0.0
        perimeter_ok = None
        if on_grid:
            side = int(cell["side"])
            active, previous, perimeter_ok = set(), None, True
            for fresh in trace.rounds:
                active |= fresh
                perimeter = grid_perimeter(side, active)
                if previous is not None and perimeter > previous:
                    perimeter_ok = False
                previous = perimeter
        metrics = {
            "seeds": len(seeds),
            "spread": spread,
            "ratio": ratio,
            "rounds": len(trace.rounds) - 1,
            "flagged": config.ceiling is not None and ratio > config.ceiling,
            "perimeter_ok": perimeter_ok,
            "wall_time": time.perf_counter() - started,
        }
        if metrics["flagged"]:
            logger.warning(f"spread cell {cell} trial {trial}: spread/|A| = {ratio:.2f} exceeds {config.ceiling}")
        rows.append(_row(config, cell, trial, seed, metrics))
    return rows


def _edgespan_cell(config: ExperimentConfig, cell: Cell) -> List[ResultRow]:
    graph = cell_graph(config.experiment, cell, config.seed)
    k = int(cell["k"])
    starts = [v for component in connected_components(graph) if len(component) >= k for v in sorted(component)]
    starts.sort()
    delta = int(cell.get("delta", max(graph.max_degree(), 1)))
    bound_term = k * (math.log(max(k, 1)) + math.log(max(delta, 1))) / math.log(graph.n) if graph.n > 1 else 0.0
    rows = []
    for trial in range(config.trials):
        seed = child_seed(config.experiment, cell, trial, config.seed)
        started = time.perf_counter()
        if not starts or k < 1:
            rows.append(_row(config, cell, trial, seed, {"edges": None, "excess": None, "bound_term": bound_term, "skipped": True}))
            continue
        subset = sample_connected_subset(graph, k, substream(seed, "sample"), starts)
        edges = sum(1 for v in subset for w in graph.neighbors(v) if w in subset) // 2
        metrics = {
            "edges": edges,
            "excess": edges - (k - 1),
            "bound_term": bound_term,
            "skipped": False,
            "wall_time": time.perf_counter() - started,
        }
        rows.append(_row(config, cell, trial, seed, metrics))
    return rows


RUNNERS: Dict[str, Callable[[ExperimentConfig, Cell], List[ResultRow]]] = {
    "localtw": _localtw_cell,
    "spread": _spread_cell,
    "edgespan": _edgespan_cell,
}


def _run_cell(payload: Tuple[dict, int, Cell]) -> Tuple[int, List[dict]]:
    config_data, index, cell = payload
    config = ExperimentConfig(**config_data)
    rows = RUNNERS[config.experiment](config, cell)
    logger.info(f"{config.experiment}: cell {index} {cell} done ({len(rows)} rows)")
    return index, [row.model_dump() for row in rows]


def run_experiment(config: ExperimentConfig, threads: int = 1) -> List[ResultRow]:
    """All rows of a sweep, ordered by cell then trial regardless of ``threads``."""
    payloads = [(config.model_dump(), i, cell) for i, cell in enumerate(expand_cells(config))]
    if threads > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_cell, payloads))
    else:
        results = [_run_cell(payload) for payload in payloads]
    results.sort(key=lambda item: item[0])
    return [ResultRow(**row) for _, cell_rows in results for row in cell_rows]


def rows_frame(experiment: str, rows: Sequence[ResultRow], timing: bool = False) -> pd.DataFrame:
    header = columns(experiment, timing)
    return pd.DataFrame([row.flat() for row in rows], columns=header)


def _records(frame: pd.DataFrame) -> List[dict]:
    return json.loads(frame.to_json(orient="records"))


def _fit_localtw(config: ExperimentConfig, frame: pd.DataFrame) -> FitSummary:
    keys = list(cell_keys(config))
    usable = frame[~frame["skipped"].astype(bool)]
    per_cell = (
        usable.groupby(keys, sort=False)
        .agg(estimate=("width", "max"), mean_width=("width", "mean"), max_excess=("excess", "max"))
        .reset_index()
    )
    n = per_cell["n"].astype(float) if "n" in per_cell else pd.Series(np.nan, index=per_cell.index)
    d = per_cell["d"].astype(float) if "d" in per_cell else pd.Series(np.nan, index=per_cell.index)
    per_cell["x"] = per_cell["k"] * np.log(d.clip(lower=1.0)) / np.log(n.clip(lower=2.0))
    slope = intercept = None
    if per_cell["x"].nunique() >= 2:
        slope, intercept = (float(v) for v in np.polyfit(per_cell["x"], per_cell["estimate"], 1))
    linear_in_k = True
    group_keys = [key for key in keys if key != "k"]
    for _, group in per_cell.groupby(group_keys, sort=False):
        ordered = group.sort_values("k")
        ks, estimates = ordered["k"].tolist(), ordered["estimate"].tolist()
        for (k1, e1), (k2, e2) in zip(zip(ks, estimates), zip(ks[1:], estimates[1:])):
            if e2 > math.ceil(e1 * k2 / k1) + 1:
                linear_in_k = False
    within_excess = bool((usable["width"] <= usable["excess"]).all()) if len(usable) else True
    ratios = (per_cell["estimate"] / per_cell["k"]).replace([np.inf], np.nan)
    return FitSummary(
        experiment=config.experiment,
        root_seed=config.seed,
        cells=len(per_cell),
        rows=len(frame),
        constants={"slope": slope, "intercept": intercept, "max_estimate_per_k": _maybe(ratios.max())},
        checks={"linear_in_k": linear_in_k, "width_within_excess": within_excess},
        per_cell=_records(per_cell),
    )


def _maybe(value) -> Optional[float]:
    return None if value is None or pd.isna(value) else float(value)


def _fit_spread(config: ExperimentConfig, frame: pd.DataFrame) -> FitSummary:
    keys = list(cell_keys(config))
    per_cell = (
        frame.groupby(keys, sort=False)
        .agg(max_spread=("spread", "max"), mean_spread=("spread", "mean"), max_ratio=("ratio", "max"))
        .reset_index()
    )
    k = per_cell["k"].astype(float)
    per_cell["max_over_k2"] = (per_cell["max_spread"] / (k * k)).where(k > 0, 0.0)
    on_grid = config.model == "grid"
    perimeter = frame["perimeter_ok"].dropna()
    return FitSummary(
        experiment=config.experiment,
        root_seed=config.seed,
        cells=len(per_cell),
        rows=len(frame),
        constants={
            "c_linear": _maybe(per_cell["max_ratio"].max()),
            "c_quadratic": _maybe(per_cell["max_over_k2"].max()) if on_grid else None,
        },
        checks={
            "ceiling_respected": not bool(frame["flagged"].astype(bool).any()),
            "perimeter_nonincreasing": bool(perimeter.astype(bool).all()) if len(perimeter) else True,
        },
        per_cell=_records(per_cell),
    )


def _fit_edgespan(config: ExperimentConfig, frame: pd.DataFrame) -> FitSummary:
    keys = list(cell_keys(config))
    usable = frame[~frame["skipped"].astype(bool)]
    per_cell = (
        usable.groupby(keys, sort=False)
        .agg(max_excess=("excess", "max"), mean_excess=("excess", "mean"), bound_term=("bound_term", "first"))
        .reset_index()
    )
    positive = per_cell[per_cell["bound_term"] > 0]
    constant = _maybe(((positive["max_excess"] - 1).clip(lower=0) / positive["bound_term"]).max()) if len(positive) else None
    trees = per_cell[per_cell["eps"] == 0] if "eps" in per_cell else per_cell.iloc[0:0]
    return FitSummary(
        experiment=config.experiment,
        root_seed=config.seed,
        cells=len(per_cell),
        rows=len(frame),
        constants={"C": constant, "max_excess": _maybe(per_cell["max_excess"].max())},
        checks={"trees_have_no_excess": bool((trees["max_excess"] == 0).all()) if len(trees) else True},
        per_cell=_records(per_cell),
    )


FITS = {"localtw": _fit_localtw, "spread": _fit_spread, "edgespan": _fit_edgespan}


def summarize(config: ExperimentConfig, rows: Sequence[ResultRow]) -> FitSummary:
    frame = rows_frame(config.experiment, rows)
    usable = frame if "skipped" not in frame else frame[~frame["skipped"].astype(bool)]
    if usable.empty:
        return FitSummary(
            experiment=config.experiment, root_seed=config.seed, cells=0, rows=len(frame), constants={}, checks={}
        )
    return FITS[config.experiment](config, frame)


def format_rows(experiment: str, rows: Sequence[ResultRow], fmt: str = "csv", timing: bool = False) -> str:
    frame = rows_frame(experiment, rows, timing)
    if fmt == "json":
        return frame.to_json(orient="records", indent=2) + "\n"
    return frame.to_csv(index=False, lineterminator="\n")


def write_rows(path: Union[str, Path], experiment: str, rows: Sequence[ResultRow], fmt: str = "csv", timing: bool = False) -> None:
    write_text(path, format_rows(experiment, rows, fmt, timing))


def summary_path(out: Union[str, Path]) -> Path:
    out = Path(out)
    return out.with_name(out.name + ".summary.json")


def write_summary(out: Union[str, Path], summary: FitSummary) -> Path:
    path = summary_path(out)
    write_text(path, summary.model_dump_json(indent=2) + "\n")
    return path


def store_rows(config: ExperimentConfig, rows: Sequence[ResultRow], url: Optional[str] = None) -> int:
    """Persist a finished sweep and return its run id."""
    if url:
        bind(url)
    init_models()
    with get_db() as db:
        run = crud.create_run(db, config)
        crud.add_rows(db, run, rows)
        return run.id


# oracle suites


def _random_graph(rng: np.random.Generator, low: int, high: int) -> Graph:
    n = int(rng.integers(low, high + 1))
    return gnp(n, float(rng.uniform(0.3, 0.8)), int(rng.integers(SEED_MASK)))


def random_gidm_instance(rng: np.random.Generator) -> GidmInstance:
    """Half direct random instances, half subdivided edge-deletion instances."""
    budget = int(rng.integers(0, 4))
    if rng.random() < 0.5:
        return reduce_min_contagion(random_min_instance(rng, max_n=5, max_edges=8)).to_gidm(budget)
    graph = _random_graph(rng, 3, 8)
    values: List[Threshold] = []
    for _ in range(graph.n):
        roll = rng.random()
        if roll < 0.2:
            values.append(0)
        elif roll < 0.3:
            values.append(IMMUNIZED)
        else:
            values.append(int(rng.integers(1, 4)))
    immunizable = frozenset(v for v in range(graph.n) if rng.random() < 0.5)
    counted = frozenset(v for v in range(graph.n) if rng.random() < 0.6)
    return GidmInstance(graph, ThresholdMap(tuple(values)), immunizable, counted, budget)


def _random_seeds(rng: np.random.Generator, n: int) -> frozenset:
    return random_seed_set(n, int(rng.integers(1, min(3, n) + 1)), rng)


def _closure_edges(graph: Graph, seeds, thresholds: ThresholdMap) -> int:
    return restrict_to_closure(graph, seeds, thresholds).graph.m


def random_min_instance(rng: np.random.Generator, max_n: int = 7, max_edges: int = 12) -> MinContagionInstance:
    while True:
        graph = _random_graph(rng, 3, max_n)
        seeds = _random_seeds(rng, graph.n)
        instance = MinContagionInstance.uniform(graph, seeds, int(rng.choice([2, 3])), int(rng.integers(0, 3)))
        if _closure_edges(graph, seeds, instance.effective_thresholds) <= max_edges:
            return instance


def random_stop_instance(rng: np.random.Generator, max_n: int = 7, max_edges: int = 12) -> StopContagionInstance:
    while True:
        graph = _random_graph(rng, 3, max_n)
        seeds = _random_seeds(rng, graph.n)
        others = [v for v in range(graph.n) if v not in seeds]
        if not others:
            continue
        size = int(rng.integers(1, min(2, len(others)) + 1))
        protected = frozenset(int(v) for v in rng.choice(others, size=size, replace=False))
        instance = StopContagionInstance.uniform(graph, seeds, protected, int(rng.choice([2, 3])))
        if _closure_edges(graph, seeds, instance.effective_thresholds) <= max_edges:
            return instance


def _thresholds_out(thresholds: ThresholdMap) -> List[Union[int, str]]:
    return ["inf" if t is IMMUNIZED else t for t in thresholds.values]


def dump_instance(suite: str, index: int, seed: int, instance, expected, actual) -> InstanceDump:
    data = dict(
        suite=suite,
        index=index,
        seed=seed,
        n=instance.graph.n,
        edges=instance.graph.edges(),
        thresholds=_thresholds_out(instance.thresholds),
        expected=expected,
        actual=actual,
    )
    if isinstance(instance, GidmInstance):
        data.update(immunizable=sorted(instance.immunizable), counted=sorted(instance.counted), budget=instance.budget)
    else:
        data["seeds"] = sorted(instance.seeds)
        if isinstance(instance, StopContagionInstance):
            data["protected"] = sorted(instance.protected)
        else:
            data["slack"] = instance.slack
    return InstanceDump(**data)


def default_gidm_solver(instance: GidmInstance) -> int:
    nice = make_nice(best_heuristic_decomposition(instance.graph))
    return GidmSolver(instance, nice).solve().optimum


SUITES = {
    "gidm": (random_gidm_instance, lambda instance: gidm_bruteforce(instance).optimum, default_gidm_solver),
    "min": (random_min_instance, lambda instance: bruteforce_edge_deletion(instance).size, lambda instance: solve_min_contagion_tw(instance).size),
    "stop": (random_stop_instance, lambda instance: bruteforce_edge_deletion(instance).size, lambda instance: solve_stop_contagion_tw(instance).size),
}


def run_oracle_suite(
    suite: str,
    count: int,
    seed: int,
    dump_dir: Optional[Union[str, Path]] = None,
    solver: Optional[Callable] = None,
) -> OracleReport:
    """Compare the exact solver with its brute-force oracle on ``count`` seeded instances.

    ``solver`` replaces the solver under test and returns an optimum value.
    """
    generate, oracle, default = SUITES[suite]
    solver = solver or default
    failures = []
    for index in range(count):
        instance_seed = child_seed(f"oracle-{suite}", {"suite": suite}, index, seed)
        instance = generate(substream(instance_seed, "instance"))
        expected = oracle(instance)
        actual, error = None, None
        try:
            actual = solver(instance)
        except ContagionError as e:
            error = e.detail
        if error is None and actual == expected:
            continue
        logger.warning(f"oracle {suite} #{index}: expected {expected}, got {actual} {error or ''}".rstrip())
        failure = OracleFailure(index=index, seed=instance_seed, expected=expected, actual=actual, error=error)
        if dump_dir is not None:
            path = Path(dump_dir) / f"{suite}-{index:04d}.json"
            path.parent.mkdir(parents=True, exist_ok=True)
            write_text(path, dump_instance(suite, index, instance_seed, instance, expected, actual).model_dump_json(indent=2) + "\n")
            failure.dump = str(path)
        failures.append(failure)
    return OracleReport(suite=suite, count=count, seed=seed, passed=not failures, failures=failures)


def fpt_success_frequency(
    instance: MinContagionInstance,
    optimum: int,
    batches: int,
    seed: int,
    budget_hint: int,
    r_max: Optional[int] = None,
    extra_exponent: int = 10,
) -> float:
    """Fraction of independent single batches that return a solution of size ``optimum``."""
    hits = 0
    for batch in range(batches):
        batch_seed = child_seed("fpt", {"optimum": optimum}, batch, seed)
        try:
            solution: DeletionSolution = solve_randomized_fpt(
                instance, r_max=r_max, budget_hint=budget_hint, batches=1, seed=batch_seed, extra_exponent=extra_exponent
            )
        except NoSolutionFound:
            continue
        hits += solution.size == optimum
    return hits / batches if batches else 1.0

