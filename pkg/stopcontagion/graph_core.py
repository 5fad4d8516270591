"""Immutable undirected simple graphs on dense vertex ids ``0..n-1``.

Every other module builds on :class:`Graph`. Graphs never change after
construction; deleting edges means building a new graph with
:func:`without_edges`.
"""
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import networkx as nx

from .errors import DuplicateEdge, SelfLoop, VertexOutOfRange

VertexSet = FrozenSet[int]
Edge = Tuple[int, int]


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Undirected simple graph with sorted adjacency tuples."""

    __slots__ = ("_n", "_adjacency", "_neighbor_sets", "_m", "_nx")

    def __init__(self, n: int, adjacency: Sequence[Sequence[int]]):
        self._n = n
        self._adjacency: Tuple[Tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adjacency)
        self._neighbor_sets: Tuple[FrozenSet[int], ...] = tuple(frozenset(a) for a in self._adjacency)
        self._m = sum(len(a) for a in self._adjacency) // 2
        self._nx = None

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return self._m

    @property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        return self._adjacency

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._adjacency[v]

    def neighbor_set(self, v: int) -> FrozenSet[int]:
        return self._neighbor_sets[v]

    def degree(self, v: int) -> int:
        return len(self._adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._neighbor_sets[u]

    def vertices(self) -> range:
        return range(self._n)

    def edges(self) -> List[Edge]:
        """All edges as ``(u, v)`` with ``u < v`` in lexicographic order."""
        return [(u, v) for u in range(self._n) for v in self._adjacency[u] if u < v]

    def max_degree(self) -> int:
        return max((len(a) for a in self._adjacency), default=0)

    def to_networkx(self) -> nx.Graph:
        """Frozen networkx view with nodes ``0..n-1``; built once per graph."""
        if self._nx is None:
            view = nx.Graph()
            view.add_nodes_from(range(self._n))
            view.add_edges_from(self.edges())
            self._nx = nx.freeze(view)
        return self._nx

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._adjacency == other._adjacency

    def __hash__(self) -> int:
        return hash((self._n, self._adjacency))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self._m})"


@dataclass(frozen=True)
class SubgraphMap:
    """Relabelling between a parent graph and a dense induced subgraph."""

    forward: Dict[int, int]
    inverse: Tuple[int, ...]

    def to_new(self, vertices: Iterable[int]) -> VertexSet:
        return frozenset(self.forward[v] for v in vertices if v in self.forward)

    def to_old(self, vertices: Iterable[int]) -> VertexSet:
        return frozenset(self.inverse[v] for v in vertices)

    def edge_to_old(self, edge: Edge) -> Edge:
        return normalize_edge(self.inverse[edge[0]], self.inverse[edge[1]])


def _check_vertex(u: int, n: int) -> None:
    if not 0 <= u < n:
        raise VertexOutOfRange(u, n)


def from_edge_list(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Build a graph, rejecting self-loops, repeated edges and bad endpoints."""
    adjacency: List[set] = [set() for _ in range(n)]
    for u, v in edges:
        _check_vertex(u, n)
        _check_vertex(v, n)
        if u == v:
            raise SelfLoop(u)
        if v in adjacency[u]:
            raise DuplicateEdge(u, v)
        adjacency[u].add(v)
        adjacency[v].add(u)
    return Graph(n, adjacency)


def from_networkx(view: nx.Graph) -> Graph:
    """Graph from a networkx graph whose nodes are already ``0..n-1``."""
    return from_edge_list(view.number_of_nodes(), view.edges())


def relabel_dense(view: nx.Graph) -> Tuple[Graph, SubgraphMap]:
    """Graph on ``0..n-1`` from arbitrary sortable networkx nodes, in sorted node order."""
    selected = sorted(view.nodes)
    forward = {v: i for i, v in enumerate(selected)}
    relabelled = nx.relabel_nodes(view, forward, copy=True)
    return from_edge_list(len(selected), relabelled.edges()), SubgraphMap(forward, tuple(selected))


def empty_graph(n: int) -> Graph:
    return Graph(n, [()] * n)


def induced_subgraph(graph: Graph, vertices: Iterable[int]) -> Tuple[Graph, SubgraphMap]:
    """Subgraph spanned by ``vertices``, relabelled densely in increasing id order."""
    selected = set(vertices)
    for v in selected:
        _check_vertex(v, graph.n)
    return relabel_dense(nx.subgraph(graph.to_networkx(), selected))


def connected_components(graph: Graph) -> List[VertexSet]:
    """Components ordered by their smallest vertex."""
    return sorted((frozenset(c) for c in nx.connected_components(graph.to_networkx())), key=min)


def is_forest(graph: Graph) -> bool:
    # networkx treats the null graph as pointless; it has no cycle
    return graph.n == 0 or nx.is_forest(graph.to_networkx())


def is_tree(graph: Graph) -> bool:
    return graph.n >= 1 and nx.is_tree(graph.to_networkx())


def subdivide_all_edges(graph: Graph) -> Tuple[Graph, Dict[Edge, int]]:
    """Replace every edge ``(u, v)`` by a path ``u - w_uv - v``.

    Subdivision vertices get ids ``n .. n+m-1`` in lexicographic edge order.
    """
    edges = graph.edges()
    subdivision = {edge: graph.n + i for i, edge in enumerate(edges)}
    new_edges = []
    for (u, v), w in subdivision.items():
        new_edges.append((u, w))
        new_edges.append((v, w))
    return from_edge_list(graph.n + graph.m, new_edges), subdivision


def without_edges(graph: Graph, removed: Iterable[Sequence[int]]) -> Graph:
    drop = {normalize_edge(u, v) for u, v in removed}
    return from_edge_list(graph.n, [e for e in graph.edges() if e not in drop])


def with_edges(graph: Graph, added: Iterable[Sequence[int]]) -> Graph:
    return from_edge_list(graph.n, graph.edges() + [normalize_edge(u, v) for u, v in added])


def degeneracy(graph: Graph) -> Tuple[int, List[int]]:
    """Largest core number, and the order in which repeated min-degree deletion removes vertices."""
    if graph.n == 0:
        return 0, []
    view = graph.to_networkx()
    value = max(nx.core_number(view).values())
    # smallest-last lists the last removed vertex first
    order = list(reversed(nx.coloring.strategy_smallest_last(view, None)))
    return value, order
