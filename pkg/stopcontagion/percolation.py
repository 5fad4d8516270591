"""Synchronous bootstrap percolation with per-vertex thresholds.

A vertex outside the active set joins in round ``i`` once at least ``t(v)``
of its neighbours were active after round ``i - 1``. Threshold 0 marks a
seed and :data:`IMMUNIZED` marks a vertex that never activates.
"""
import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, List, Tuple, Union

from .errors import InvalidInstance, SeedImmunized, TooLarge
from .graph_core import Graph, VertexSet


class Marker(enum.Enum):
    IMMUNIZED = "inf"

    def __repr__(self) -> str:
        return "IMMUNIZED"


IMMUNIZED = Marker.IMMUNIZED

Threshold = Union[int, Marker]


@dataclass(frozen=True)
class ThresholdMap:
    values: Tuple[Threshold, ...]

    def __post_init__(self):
        for v, t in enumerate(self.values):
            if t is not IMMUNIZED and (not isinstance(t, int) or t < 0):
                raise InvalidInstance(f"threshold of vertex {v} must be a non-negative int or IMMUNIZED, got {t!r}")

    @classmethod
    def uniform(
        cls,
        n: int,
        r: int,
        seeds: Iterable[int] = (),
        immunized: Iterable[int] = (),
    ) -> "ThresholdMap":
        values: List[Threshold] = [r] * n
        for v in seeds:
            values[v] = 0
        for v in immunized:
            values[v] = IMMUNIZED
        return cls(tuple(values))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, v: int) -> Threshold:
        return self.values[v]

    def is_immunized(self, v: int) -> bool:
        return self.values[v] is IMMUNIZED

    def seeds(self) -> VertexSet:
        return frozenset(v for v, t in enumerate(self.values) if t == 0)

    def with_seeds(self, seeds: Iterable[int]) -> "ThresholdMap":
        values = list(self.values)
        for v in seeds:
            values[v] = 0
        return ThresholdMap(tuple(values))

    def immunize(self, vertices: Iterable[int]) -> "ThresholdMap":
        values = list(self.values)
        for v in vertices:
            values[v] = IMMUNIZED
        return ThresholdMap(tuple(values))

    def max_finite(self) -> int:
        return max((t for t in self.values if t is not IMMUNIZED), default=0)


@dataclass(frozen=True)
class PercolationTrace:
    rounds: Tuple[VertexSet, ...]
    closure: VertexSet

    @property
    def seeds(self) -> VertexSet:
        return self.rounds[0]


def _check_thresholds(graph: Graph, thresholds: ThresholdMap) -> None:
    if len(thresholds) != graph.n:
        raise InvalidInstance(f"threshold map covers {len(thresholds)} vertices, graph has {graph.n}")


def percolate(graph: Graph, thresholds: ThresholdMap, seeds: Iterable[int] = ()) -> PercolationTrace:
    """Run the synchronous process to its fixed point.

    Round 0 holds ``seeds`` together with every non-immunized threshold-0
    vertex; later rounds hold the vertices activated in that step.
    """
    _check_thresholds(graph, thresholds)
    initial = set(seeds)
    for v in initial:
        if thresholds.is_immunized(v):
            raise SeedImmunized(v)
    initial |= thresholds.seeds()

    active = [False] * graph.n
    for v in initial:
        active[v] = True
    count = [0] * graph.n
    rounds = [frozenset(initial)]
    frontier = sorted(initial)
    while frontier:
        candidates = set()
        for v in frontier:
            for w in graph.neighbors(v):
                if not active[w]:
                    count[w] += 1
                    candidates.add(w)
        fresh = []
        for w in candidates:
            t = thresholds[w]
            if t is not IMMUNIZED and count[w] >= t:
                fresh.append(w)
        if not fresh:
            break
        for w in fresh:
            active[w] = True
        fresh.sort()
        rounds.append(frozenset(fresh))
        frontier = fresh
    closure = frozenset(v for v in range(graph.n) if active[v])
    return PercolationTrace(tuple(rounds), closure)


def closure(graph: Graph, thresholds: ThresholdMap, seeds: Iterable[int] = ()) -> VertexSet:
    return percolate(graph, thresholds, seeds).closure


def spread(graph: Graph, thresholds: ThresholdMap, seeds: Iterable[int]) -> int:
    """Number of vertices activated beyond the seeds."""
    trace = percolate(graph, thresholds, seeds)
    return len(trace.closure) - len(trace.seeds)


def is_closed(graph: Graph, thresholds: ThresholdMap, subset: Iterable[int]) -> bool:
    """True iff no vertex outside ``subset`` would activate from it."""
    _check_thresholds(graph, thresholds)
    members = frozenset(subset)
    for v in range(graph.n):
        if v in members:
            continue
        t = thresholds[v]
        if t is IMMUNIZED:
            continue
        if sum(1 for w in graph.neighbors(v) if w in members) >= t:
            return False
    return True


def min_contagious_set_bruteforce(graph: Graph, r: int, size_limit: int = 12) -> int:
    """Smallest seed set activating every vertex under uniform threshold ``r``."""
    if graph.n > size_limit:
        raise TooLarge(f"contagious set enumeration over {graph.n} vertices exceeds limit {size_limit}")
    if graph.n == 0:
        return 0
    thresholds = ThresholdMap.uniform(graph.n, r)
    forced = [v for v in range(graph.n) if graph.degree(v) < r]
    optional = [v for v in range(graph.n) if graph.degree(v) >= r]
    for extra in range(len(optional) + 1):
        for chosen in itertools.combinations(optional, extra):
            seeds = forced + list(chosen)
            if len(percolate(graph, thresholds, seeds).closure) == graph.n:
                return len(seeds)
    return graph.n

