import json
import logging
import sys
from typing import Optional, Sequence

import click

from . import contagion
from .config import get_settings
from .decomposition import (
    STRATEGIES,
    exact_treewidth_small,
    heuristic_decomposition,
    make_nice,
    validate,
)
from .errors import ContagionError, InvalidInstance, VerificationError
from .experiments import (
    format_rows,
    run_experiment,
    run_oracle_suite,
    store_rows,
    summarize,
    write_rows,
    write_summary,
)
from .fileio import (
    format_decomposition,
    format_edge_list,
    parse_thresholds,
    read_graph,
    read_text,
    read_vertex_list,
    write_text,
)
from .percolation import ThresholdMap
from .schemas import MAX_SEED, ExperimentConfig, SolutionReport
from .specs import build_graph

logger = logging.getLogger(__name__)

USAGE_EXIT = 1


class ContagionGroup(click.Group):
    """Maps usage errors to exit 1 and library errors to their own exit codes."""

    def main(self, *args, **kwargs):
        kwargs["standalone_mode"] = False
        try:
            return super().main(*args, **kwargs)
        except click.UsageError as e:
            e.show()
            sys.exit(USAGE_EXIT)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(USAGE_EXIT)
        except click.ClickException as e:
            e.show()
            sys.exit(e.exit_code)
        except ContagionError as e:
            logger.error(e.detail)
            click.echo(f"Error: {e.detail}", err=True)
            sys.exit(e.exit_code)


def _emit(ctx: click.Context, text: str) -> None:
    out = ctx.obj["out"]
    if out:
        write_text(out, text)
        logger.info(f"wrote {out}")
    else:
        click.echo(text, nl=False)


@click.group(cls=ContagionGroup)
@click.option("--seed", type=click.IntRange(0, MAX_SEED), default=0, show_default=True, help="Root seed.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file (stdout if omitted).")
@click.option("--threads", type=click.IntRange(1), default=None, help="Worker processes for sweeps.")
@click.option("--log-level", default=None, help="Overrides STOPCONTAGION_LOG_LEVEL.")
@click.pass_context
def cli(ctx: click.Context, seed: int, fmt: str, out: Optional[str], threads: Optional[int], log_level: Optional[str]):
    """Edge-deletion interdiction for bootstrap percolation."""
    settings = get_settings()
    logging.basicConfig(level=(log_level or settings.log_level).upper())
    ctx.obj = {
        "seed": seed,
        "format": fmt,
        "out": out,
        "threads": threads or settings.threads,
        "exact_limit": settings.exact_limit,
    }


@cli.command()
@click.argument("spec")
@click.pass_context
def generate(ctx: click.Context, spec: str):
    """Draw a graph from a model spec such as gnp:n=100,d=3 and write it as an edge list."""
    graph = build_graph(spec, ctx.obj["seed"])
    logger.info(f"generated {spec}: n={graph.n}, m={graph.m}")
    _emit(ctx, format_edge_list(graph))


@cli.command()
@click.argument("problem", type=click.Choice(["min", "stop"]))
@click.argument("graph_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("seeds_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--r", "r", type=click.IntRange(2), default=2, show_default=True, help="Uniform threshold outside the seeds.")
@click.option("--slack", type=click.IntRange(0), default=0, show_default=True)
@click.option("--protected", "protected_file", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--thresholds", "thresholds_file", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--method", type=click.Choice(["tw", "random", "brute"]), default="tw", show_default=True)
@click.option("--budget-hint", type=click.IntRange(0), default=0, show_default=True)
@click.option("--r-max", type=click.IntRange(0), default=None, help="Spread limit for --method random (default: slack).")
@click.option("--batches", type=click.IntRange(1), default=1, show_default=True)
@click.pass_context
def solve(
    ctx: click.Context,
    problem: str,
    graph_file: str,
    seeds_file: str,
    r: int,
    slack: int,
    protected_file: Optional[str],
    thresholds_file: Optional[str],
    method: str,
    budget_hint: int,
    r_max: Optional[int],
    batches: int,
):
    """Fewest edge deletions for minimizing (min) or stopping (stop) contagion."""
    graph = read_graph(graph_file)
    seeds = read_vertex_list(seeds_file, graph.n)
    if thresholds_file:
        thresholds = parse_thresholds(read_text(thresholds_file), graph.n, r, seeds)
    else:
        thresholds = ThresholdMap.uniform(graph.n, r, seeds)
    if problem == "stop":
        if not protected_file:
            raise click.UsageError("stop needs --protected")
        protected = read_vertex_list(protected_file, graph.n)
        instance = contagion.StopContagionInstance(graph, seeds, protected, thresholds)
    else:
        if protected_file:
            raise click.UsageError("--protected only applies to stop")
        instance = contagion.MinContagionInstance(graph, seeds, thresholds, slack)
    options = {}
    if method == "random":
        if problem == "stop":
            raise InvalidInstance("--method random only solves min")
        options = dict(r_max=r_max, budget_hint=budget_hint, batches=batches, seed=ctx.obj["seed"])
    solution = contagion.solve(instance, method, **options)
    report = SolutionReport(
        problem=problem,
        method=solution.method,
        n=graph.n,
        m=graph.m,
        deleted_edges=list(solution.deleted_edges),
        additional_infected=solution.additional_infected,
        protected_infected=solution.protected_infected,
        budget=solution.size,
        optimal=solution.optimal,
    )
    _emit(ctx, report.model_dump_json(indent=2) + "\n")


@cli.command()
@click.argument("graph_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--write-td", type=click.Path(dir_okay=False), default=None, help="Write the narrowest decomposition here.")
@click.pass_context
def treewidth(ctx: click.Context, graph_file: str, write_td: Optional[str]):
    """Build, validate and compare tree decompositions of an edge-list file."""
    graph = read_graph(graph_file)
    results = {}
    best = None
    for strategy in STRATEGIES:
        td = heuristic_decomposition(graph, strategy)
        report = validate(graph, td)
        results[strategy] = {"width": td.width, "valid": report.ok, "bags": len(td.bags)}
        if best is None or td.width < best.width:
            best = td
    exact = None
    if graph.n <= ctx.obj["exact_limit"]:
        width, td = exact_treewidth_small(graph, ctx.obj["exact_limit"])
        exact = width
        results["exact"] = {"width": width, "valid": validate(graph, td).ok, "bags": len(td.bags)}
        if td.width < best.width:
            best = td
    nice = make_nice(best, graph)
    summary = {
        "n": graph.n,
        "m": graph.m,
        "decompositions": results,
        "treewidth": exact,
        "upper_bound": best.width,
        "nice_nodes": len(nice.nodes),
    }
    if write_td:
        write_text(write_td, format_decomposition(best))
    _emit(ctx, json.dumps(summary, indent=2, sort_keys=True) + "\n")


def _sweep_options(func):
    options = [
        click.option("--model", default=None, help="Model name, e.g. gnp, regular, noisytree, tree, grid."),
        click.option("--n", "n", type=int, multiple=True),
        click.option("--d", "d", type=float, multiple=True),
        click.option("--delta", type=int, multiple=True),
        click.option("--eps", type=float, multiple=True),
        click.option("--side", type=int, multiple=True),
        click.option("--k", "k", type=int, multiple=True),
        click.option("--trials", type=click.IntRange(1), default=None),
        click.option("--store", is_flag=True, help="Also persist rows to the result store."),
        click.option("--db", default=None, help="Result store URL (overrides RESULTS_DATABASE_URL)."),
        click.option("--timing", is_flag=True, help="Add a wall_time column (output is then not reproducible)."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


DEFAULTS = {
    "localtw": dict(model="gnp", n=[1024], d=[2.0, 4.0, 8.0], k=[8, 16, 32], trials=50),
    "spread": dict(model="noisytree", n=[2000], delta=[3], eps=[1.0], k=[1, 2, 4, 8], r=[2], trials=200),
    "edgespan": dict(model="noisytree", n=[10000], delta=[3], eps=[0.0, 1.0], k=[16, 32, 64], trials=200),
}


def _run_sweep(ctx: click.Context, experiment: str, given: dict, store: bool, db: Optional[str], timing: bool):
    values = dict(DEFAULTS[experiment])
    for key, value in given.items():
        if value not in (None, ()):
            values[key] = list(value) if isinstance(value, Sequence) and not isinstance(value, str) else value
    try:
        config = ExperimentConfig(experiment=experiment, seed=ctx.obj["seed"], exact_limit=ctx.obj["exact_limit"], **values)
    except ValueError as e:
        raise click.UsageError(str(e))
    logger.info(f"{experiment}: {config.model_dump(exclude_defaults=True)}")
    rows = run_experiment(config, ctx.obj["threads"])
    summary = summarize(config, rows)
    out = ctx.obj["out"]
    if out:
        write_rows(out, experiment, rows, ctx.obj["format"], timing)
        write_summary(out, summary)
    else:
        click.echo(format_rows(experiment, rows, ctx.obj["format"], timing), nl=False)
        logger.info(f"summary: {summary.constants} {summary.checks}")
    if store:
        run_id = store_rows(config, rows, db)
        logger.info(f"stored {len(rows)} rows as run {run_id}")


@cli.command("experiment-localtw")
@_sweep_options
@click.pass_context
def experiment_localtw(ctx, model, n, d, delta, eps, side, k, trials, store, db, timing):
    """Sampled local treewidth of random graphs against k log d / log n."""
    given = dict(model=model, n=n, d=d, delta=delta, eps=eps, side=side, k=k, trials=trials)
    _run_sweep(ctx, "localtw", given, store, db, timing)


@cli.command("experiment-spread")
@_sweep_options
@click.option("--r", "r", type=int, multiple=True, help="Uniform thresholds to sweep.")
@click.option("--ceiling", type=float, default=None, help="Flag trials whose spread/|A| exceeds this.")
@click.pass_context
def experiment_spread(ctx, model, n, d, delta, eps, side, k, trials, store, db, timing, r, ceiling):
    """Spread of random seed sets under uniform thresholds."""
    given = dict(model=model, n=n, d=d, delta=delta, eps=eps, side=side, k=k, trials=trials, r=r, ceiling=ceiling)
    _run_sweep(ctx, "spread", given, store, db, timing)


@cli.command("experiment-edgespan")
@_sweep_options
@click.pass_context
def experiment_edgespan(ctx, model, n, d, delta, eps, side, k, trials, store, db, timing):
    """Edge excess of sampled connected k-subgraphs."""
    given = dict(model=model, n=n, d=d, delta=delta, eps=eps, side=side, k=k, trials=trials)
    _run_sweep(ctx, "edgespan", given, store, db, timing)


@cli.command("oracle-compare")
@click.argument("suite", type=click.Choice(["gidm", "min", "stop"]))
@click.option("--count", type=click.IntRange(0), default=100, show_default=True)
@click.option("--dump-dir", type=click.Path(file_okay=False), default="oracle-failures", show_default=True)
@click.pass_context
def oracle_compare(ctx: click.Context, suite: str, count: int, dump_dir: str):
    """Check the exact solvers against brute force on seeded random instances."""
    report = run_oracle_suite(suite, count, ctx.obj["seed"], dump_dir)
    _emit(ctx, report.model_dump_json(indent=2) + "\n")
    if not report.passed:
        raise VerificationError(f"{len(report.failures)} of {count} {suite} instances disagree with the oracle")
    logger.info(f"oracle {suite}: {count} instances agree")
