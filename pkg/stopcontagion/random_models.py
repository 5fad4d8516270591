"""Seeded generators for the graph families used in the experiments."""
import logging
from dataclasses import dataclass
from typing import Iterable, List, Tuple

import networkx as nx
import numpy as np

from .errors import BadProbability, DegreeTooLarge, InfeasibleDegree, NotATree, ParityViolation
from .graph_core import Edge, Graph, VertexSet, empty_graph, from_edge_list, from_networkx, is_tree, relabel_dense

logger = logging.getLogger(__name__)

# spawn keys; a generator call only ever draws from its own purpose
PURPOSES = {
    "graph": 0,
    "base": 1,
    "noise": 2,
    "seeds": 3,
    "colors": 4,
    "sample": 5,
    "instance": 6,
}

_MAX_PAIRING_RESTARTS = 100_000


def substream(seed: int, purpose: str) -> np.random.Generator:
    """Independent generator for one purpose of one seed."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(PURPOSES[purpose],)))


@dataclass(frozen=True)
class NoisyTreeParams:
    base: Graph
    epsilon: float = 1.0

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def probability(self) -> float:
        return self.epsilon / self.base.n if self.base.n else 0.0


def gnp(n: int, p: float, seed: int) -> Graph:
    """Binomial random graph: every pair is an edge independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise BadProbability(f"edge probability {p} outside [0, 1]")
    # geometric skipping over the pair sequence
    return from_networkx(nx.fast_gnp_random_graph(n, p, seed=substream(seed, "graph")))


def random_regular(n: int, d: int, seed: int) -> Graph:
    """Uniform simple d-regular graph: configuration-model pairings, restarted on loops or repeats."""
    if d >= n:
        raise DegreeTooLarge(f"degree {d} must be below vertex count {n}")
    if d < 0:
        raise DegreeTooLarge(f"degree {d} must be non-negative")
    if (n * d) % 2:
        raise ParityViolation(f"n * d = {n * d} is odd")
    if d == 0:
        return empty_graph(n)
    rng = substream(seed, "graph")
    for attempt in range(_MAX_PAIRING_RESTARTS):
        pairing = nx.configuration_model([d] * n, seed=rng)
        if nx.number_of_selfloops(pairing) or nx.Graph(pairing).number_of_edges() != pairing.number_of_edges():
            continue
        logger.debug(f"random_regular(n={n}, d={d}) accepted after {attempt} restarts")
        return from_networkx(nx.Graph(pairing))
    raise DegreeTooLarge(f"no simple pairing found for n={n}, d={d} after {_MAX_PAIRING_RESTARTS} restarts")


def random_tree(n: int, max_degree: int, seed: int, purpose: str = "graph") -> Graph:
    """Attach each new vertex to a uniform vertex that still has spare degree."""
    if n < 1:
        raise InfeasibleDegree(f"tree needs at least one vertex, got {n}")
    if (max_degree < 2 and n > 2) or (max_degree < 1 and n > 1):
        raise InfeasibleDegree(f"no tree on {n} vertices has maximum degree {max_degree}")
    rng = substream(seed, purpose)
    capacity = [max_degree] * n
    available = [0]
    edges: List[Edge] = []
    for v in range(1, n):
        i = int(rng.integers(len(available)))
        u = available[i]
        edges.append((u, v))
        capacity[u] -= 1
        capacity[v] -= 1
        if capacity[u] == 0:
            available[i] = available[-1]
            available.pop()
        if capacity[v] > 0:
            available.append(v)
    return from_edge_list(n, edges)


def noisy_tree(params: NoisyTreeParams, seed: int) -> Graph:
    """The base tree plus every non-tree pair independently with probability eps/n."""
    base = params.base
    if not is_tree(base):
        raise NotATree(f"noisy_tree base with n={base.n}, m={base.m} is not a tree")
    if params.epsilon < 0 or params.probability > 1:
        raise BadProbability(f"perturbation probability {params.probability} outside [0, 1]")
    noise = nx.fast_gnp_random_graph(base.n, params.probability, seed=substream(seed, "noise"))
    added = [e for e in noise.edges() if not base.has_edge(*e)]
    return from_edge_list(base.n, base.edges() + added)


def complete_graph(n: int) -> Graph:
    return from_networkx(nx.complete_graph(n))


def cycle(n: int) -> Graph:
    # networkx closes C1 and C2 with a loop or a repeated edge
    return from_networkx(nx.cycle_graph(n)) if n >= 3 else path(n)


def path(n: int) -> Graph:
    return from_networkx(nx.path_graph(n))


def star(n: int) -> Graph:
    """Centre 0 joined to leaves 1..n-1."""
    return from_networkx(nx.star_graph(n - 1)) if n >= 1 else empty_graph(0)


def grid(side: int) -> Graph:
    """side x side grid; cell (row, col) has id ``row * side + col``."""
    graph, _ = relabel_dense(nx.grid_2d_graph(side, side))
    return graph


def grid_perimeter(side: int, cells: Iterable[int]) -> int:
    """Boundary edges of ``cells``: grid-adjacent pairs with one cell inside.

    The grid is embedded in a ``(side + 2) x (side + 2)`` frame so cells on
    the border still have four neighbours.
    """
    members = {divmod(v, side) for v in cells}
    boundary = 0
    for row, col in members:
        for neighbour in ((row - 1, col), (row + 1, col), (row, col - 1), (row, col + 1)):
            if neighbour not in members:
                boundary += 1
    return boundary


def random_seed_set(n: int, k: int, rng: np.random.Generator) -> VertexSet:
    if k <= 0:
        return frozenset()
    return frozenset(int(v) for v in rng.choice(n, size=min(k, n), replace=False))


def edge_count_moments(n: int, p: float) -> Tuple[float, float]:
    """Mean and standard deviation of the edge count of G(n, p)."""
    pairs = n * (n - 1) / 2
    return pairs * p, float(np.sqrt(pairs * p * (1 - p)))
