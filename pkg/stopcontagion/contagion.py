"""Edge-deletion interdiction: Minimizing Contagion and Stopping Contagion.

Both problems are first restricted to the closure of the seeds (no vertex
outside it is ever infected, so no edge outside it matters). The exact
solvers subdivide every edge and hand the result to the GIDM table:
immunizing the threshold-1 vertex on an edge is the same as deleting it.
"""
import enum
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .decomposition import best_heuristic_decomposition, make_nice
from .errors import IllegalState, InvalidInstance, NoSolutionFound, TooLarge, VerificationError
from .gidm import GidmInstance, GidmSolver
from .graph_core import (
    Edge,
    Graph,
    SubgraphMap,
    VertexSet,
    induced_subgraph,
    normalize_edge,
    subdivide_all_edges,
    without_edges,
)
from .percolation import IMMUNIZED, Threshold, ThresholdMap, percolate
from .random_models import substream

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 2
BRUTEFORCE_EDGE_LIMIT = 22


class Problem(str, enum.Enum):
    MIN = "min"
    STOP = "stop"


def _check_common(graph: Graph, seeds: VertexSet, thresholds: ThresholdMap) -> None:
    if len(thresholds) != graph.n:
        raise InvalidInstance(f"threshold map covers {len(thresholds)} vertices, graph has {graph.n}")
    for v in seeds:
        if not 0 <= v < graph.n:
            raise InvalidInstance(f"seed {v} outside 0..{graph.n - 1}")
        if thresholds.is_immunized(v):
            raise InvalidInstance(f"seed {v} is immunized")
    for v in range(graph.n):
        t = thresholds[v]
        if v not in seeds and t is not IMMUNIZED and t < 2:
            raise InvalidInstance(f"non-seed vertex {v} has threshold {t}; thresholds outside the seeds must be at least 2")


@dataclass(frozen=True)
class MinContagionInstance:
    graph: Graph
    seeds: VertexSet
    thresholds: ThresholdMap
    slack: int

    def __post_init__(self):
        if not self.seeds:
            raise InvalidInstance("minimizing contagion needs at least one seed")
        if self.slack < 0:
            raise InvalidInstance(f"slack must be non-negative, got {self.slack}")
        _check_common(self.graph, self.seeds, self.thresholds)

    @classmethod
    def uniform(cls, graph: Graph, seeds: Iterable[int], r: int = DEFAULT_THRESHOLD, slack: int = 0) -> "MinContagionInstance":
        seeds = frozenset(seeds)
        return cls(graph, seeds, ThresholdMap.uniform(graph.n, r, seeds), slack)

    @property
    def effective_thresholds(self) -> ThresholdMap:
        return self.thresholds.with_seeds(self.seeds)


@dataclass(frozen=True)
class StopContagionInstance:
    graph: Graph
    seeds: VertexSet
    protected: VertexSet
    thresholds: ThresholdMap

    def __post_init__(self):
        if self.seeds & self.protected:
            raise InvalidInstance(f"seeds and protected vertices overlap: {sorted(self.seeds & self.protected)}")
        for v in self.protected:
            if not 0 <= v < self.graph.n:
                raise InvalidInstance(f"protected vertex {v} outside 0..{self.graph.n - 1}")
        _check_common(self.graph, self.seeds, self.thresholds)

    @classmethod
    def uniform(cls, graph: Graph, seeds: Iterable[int], protected: Iterable[int], r: int = DEFAULT_THRESHOLD) -> "StopContagionInstance":
        seeds = frozenset(seeds)
        return cls(graph, seeds, frozenset(protected), ThresholdMap.uniform(graph.n, r, seeds))

    @property
    def effective_thresholds(self) -> ThresholdMap:
        return self.thresholds.with_seeds(self.seeds)


Instance = Union[MinContagionInstance, StopContagionInstance]


@dataclass(frozen=True)
class ClosureRestriction:
    graph: Graph
    seeds: VertexSet
    thresholds: ThresholdMap
    mapping: SubgraphMap


def restrict_to_closure(graph: Graph, seeds: Iterable[int], thresholds: ThresholdMap) -> ClosureRestriction:
    """The instance on G[<A>], relabelled densely."""
    seeds = frozenset(seeds)
    closure = percolate(graph, thresholds, seeds).closure
    sub, mapping = induced_subgraph(graph, closure)
    sub_thresholds = ThresholdMap(tuple(thresholds[v] for v in mapping.inverse))
    return ClosureRestriction(sub, mapping.to_new(seeds), sub_thresholds, mapping)


@dataclass(frozen=True)
class ReductionOutput:
    graph: Graph
    thresholds: ThresholdMap
    immunizable: VertexSet
    counted: VertexSet
    subdivision: Dict[Edge, int]

    @property
    def edge_of(self) -> Dict[int, Edge]:
        return {w: edge for edge, w in self.subdivision.items()}

    def to_gidm(self, budget: int) -> GidmInstance:
        return GidmInstance(self.graph, self.thresholds, self.immunizable, self.counted, budget)


def _subdivide(graph: Graph, seeds: VertexSet, thresholds: ThresholdMap, counted: Iterable[int]) -> ReductionOutput:
    subdivided, subdivision = subdivide_all_edges(graph)
    values: List[Threshold] = [0 if v in seeds else thresholds[v] for v in range(graph.n)]
    values.extend([1] * graph.m)
    return ReductionOutput(
        subdivided,
        ThresholdMap(tuple(values)),
        frozenset(subdivision.values()),
        frozenset(counted),
        subdivision,
    )


def reduce_min_contagion(instance: MinContagionInstance) -> ReductionOutput:
    """Subdivide every edge; seeds get threshold 0, edge vertices 1, and B' = V - A."""
    counted = set(range(instance.graph.n)) - instance.seeds
    return _subdivide(instance.graph, instance.seeds, instance.thresholds, counted)


def reduce_stop_contagion(instance: StopContagionInstance) -> ReductionOutput:
    return _subdivide(instance.graph, instance.seeds, instance.thresholds, instance.protected)


@dataclass(frozen=True)
class DeletionSolution:
    problem: Problem
    deleted_edges: Tuple[Edge, ...]
    additional_infected: int
    protected_infected: int
    optimal: bool
    method: str

    @property
    def size(self) -> int:
        return len(self.deleted_edges)


def verify_deletion(graph: Graph, seeds: Iterable[int], thresholds: ThresholdMap, deleted: Iterable[Edge]) -> VertexSet:
    """Closure of the seeds once ``deleted`` is removed from ``graph``."""
    return percolate(without_edges(graph, deleted), thresholds, seeds).closure


def _problem_of(instance: Instance) -> Problem:
    return Problem.STOP if isinstance(instance, StopContagionInstance) else Problem.MIN


def _finish(instance: Instance, deleted: Sequence[Edge], method: str, optimal: bool) -> DeletionSolution:
    problem = _problem_of(instance)
    deleted = tuple(sorted(normalize_edge(u, v) for u, v in deleted))
    closure = verify_deletion(instance.graph, instance.seeds, instance.effective_thresholds, deleted)
    additional = len(closure - instance.seeds)
    protected = len(closure & instance.protected) if problem is Problem.STOP else 0
    if problem is Problem.MIN and additional > instance.slack:
        raise VerificationError(f"{method}: {additional} additional infections exceed slack {instance.slack}")
    if problem is Problem.STOP and protected:
        raise VerificationError(f"{method}: {protected} protected vertices still infected")
    return DeletionSolution(problem, deleted, additional, protected, optimal, method)


def _counted_and_target(instance: Instance, restriction: ClosureRestriction) -> Tuple[VertexSet, int]:
    if isinstance(instance, StopContagionInstance):
        return restriction.mapping.to_new(instance.protected), 0
    everyone = frozenset(range(restriction.graph.n))
    return everyone - restriction.seeds, instance.slack


def _solve_tw(instance: Instance) -> List[Edge]:
    restriction = restrict_to_closure(instance.graph, instance.seeds, instance.effective_thresholds)
    counted, target = _counted_and_target(instance, restriction)
    reduction = _subdivide(restriction.graph, restriction.seeds, restriction.thresholds, counted)
    nice = make_nice(best_heuristic_decomposition(reduction.graph))
    edge_of = reduction.edge_of
    available = restriction.graph.m
    budget = min(1, available)
    check = True
    while True:
        solver = GidmSolver(reduction.to_gidm(budget), nice, check=check)
        check = False
        profile = solver.profile()
        logger.debug(f"budget {budget}: optimum profile {profile}")
        for ell, value in enumerate(profile):
            if value <= target:
                immunized = solver.solve(ell).immunized
                return [restriction.mapping.edge_to_old(edge_of[w]) for w in immunized]
        if budget >= available:
            raise IllegalState(f"deleting all {available} edges of the closure did not reach target {target}")
        budget = min(2 * budget, available)


def solve_min_contagion_tw(instance: MinContagionInstance) -> DeletionSolution:
    """Fewest deletions leaving at most ``slack`` additional infections."""
    return _finish(instance, _solve_tw(instance), "tw", True)


def solve_stop_contagion_tw(instance: StopContagionInstance) -> DeletionSolution:
    """Fewest deletions keeping every protected vertex uninfected."""
    return _finish(instance, _solve_tw(instance), "tw", True)


def _feasible(instance: Instance, closure: VertexSet, seeds: VertexSet, protected: VertexSet) -> bool:
    if isinstance(instance, StopContagionInstance):
        return not (closure & protected)
    return len(closure) - len(seeds) <= instance.slack


def bruteforce_edge_deletion(instance: Instance, problem: Optional[Problem] = None, max_edges: int = BRUTEFORCE_EDGE_LIMIT) -> DeletionSolution:
    """Enumerate deletion sets of G[<A>] by size, lexicographically within a size."""
    if problem is not None and Problem(problem) is not _problem_of(instance):
        raise InvalidInstance(f"instance type does not match problem {problem!r}")
    restriction = restrict_to_closure(instance.graph, instance.seeds, instance.effective_thresholds)
    edges = restriction.graph.edges()
    if len(edges) > max_edges:
        raise TooLarge(f"{len(edges)} edges in the closure exceed the brute-force limit {max_edges}")
    protected = restriction.mapping.to_new(instance.protected) if isinstance(instance, StopContagionInstance) else frozenset()
    for size in range(len(edges) + 1):
        for chosen in itertools.combinations(edges, size):
            closure = verify_deletion(restriction.graph, restriction.seeds, restriction.thresholds, chosen)
            if _feasible(instance, closure, restriction.seeds, protected):
                deleted = [restriction.mapping.edge_to_old(e) for e in chosen]
                return _finish(instance, deleted, "brute", True)
    raise IllegalState("deleting every closure edge must be feasible")


def separating_deletions(graph: Graph, thresholds: ThresholdMap, target: VertexSet) -> List[Edge]:
    """Fewest edges whose removal stops every outside vertex from activating off ``target``.

    A vertex with ``d >= t(v)`` neighbours in the target loses ``d - t(v) + 1``
    of those edges, lowest neighbour ids first.
    """
    deleted: List[Edge] = []
    for v in range(graph.n):
        t = thresholds[v]
        if v in target or t is IMMUNIZED:
            continue
        inside = [w for w in graph.neighbors(v) if w in target]
        if len(inside) >= t:
            deleted.extend(normalize_edge(v, w) for w in inside[: len(inside) - t + 1])
    return deleted


def solve_randomized_fpt(
    instance: MinContagionInstance,
    r_max: Optional[int] = None,
    budget_hint: int = 0,
    batches: int = 1,
    seed: int = 0,
    extra_exponent: int = 10,
) -> DeletionSolution:
    """Colour-coding Monte Carlo search for a small deletion set.

    Each trial colours the non-seeds red or blue, percolates through red
    vertices only, and if the spread is at most ``r_max`` cuts the closure off
    from the rest of the graph. A batch runs ``2 ** (r_max + budget_hint +
    extra_exponent)`` trials; the best verified solution over all batches is
    returned.
    """
    limit = instance.slack if r_max is None else min(r_max, instance.slack)
    restriction = restrict_to_closure(instance.graph, instance.seeds, instance.effective_thresholds)
    graph, seeds, thresholds = restriction.graph, restriction.seeds, restriction.thresholds
    non_seeds = [v for v in range(graph.n) if v not in seeds]
    if len(non_seeds) <= instance.slack:
        logger.debug(f"spread {len(non_seeds)} already within slack {instance.slack}")
        return _finish(instance, [], "random", True)
    trials = 2 ** (limit + budget_hint + extra_exponent)
    rng = substream(seed, "colors")
    best: Optional[List[Edge]] = None
    for batch in range(batches):
        for _ in range(trials):
            red = rng.random(len(non_seeds)) < 0.5
            blue = [v for v, is_red in zip(non_seeds, red.tolist()) if not is_red]
            target = percolate(graph, thresholds.immunize(blue), seeds).closure
            if len(target) - len(seeds) > limit:
                continue
            deleted = separating_deletions(graph, thresholds, target)
            if best is not None and len(deleted) >= len(best):
                continue
            if verify_deletion(graph, seeds, thresholds, deleted) != target:
                logger.debug("discarding trial: target set is not closed after deletions")
                continue
            best = deleted
            if not best:
                break
        logger.debug(f"batch {batch}: best so far {None if best is None else len(best)} deletions")
        if best is not None and not best:
            break
    if best is None:
        raise NoSolutionFound(f"no trial in {batches} batch(es) of {trials} met spread limit {limit}")
    return _finish(instance, [restriction.mapping.edge_to_old(e) for e in best], "random", False)


def solve(instance: Instance, method: str = "tw", **options) -> DeletionSolution:
    """Dispatch on problem type and method (``tw``, ``brute`` or ``random``)."""
    if method == "brute":
        return bruteforce_edge_deletion(instance)
    if method == "random":
        if isinstance(instance, StopContagionInstance):
            raise InvalidInstance("the randomized algorithm only solves minimizing contagion")
        return solve_randomized_fpt(instance, **options)
    if method != "tw":
        raise InvalidInstance(f"unknown method {method!r}")
    if isinstance(instance, StopContagionInstance):
        return solve_stop_contagion_tw(instance)
    return solve_min_contagion_tw(instance)
