"""Tree decompositions: validation, construction, nice form and local treewidth.

Decompositions come from elimination orders. The heuristics pick the order
greedily (min-degree or min-fill); :func:`exact_treewidth_small` finds an
optimal order by dynamic programming over vertex subsets and is only meant
as an oracle for graphs with a dozen vertices.
"""
import enum
import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np
from networkx.algorithms import approximation

from .errors import InvalidDecomposition, KOutOfRange, NoConnectedSubgraph, TooLarge
from .graph_core import Graph, VertexSet, connected_components, induced_subgraph
from .random_models import substream

logger = logging.getLogger(__name__)

DEFAULT_EXACT_LIMIT = 12
STRATEGIES = ("min-degree", "min-fill")


@dataclass(frozen=True)
class TreeDecomposition:
    bags: Tuple[VertexSet, ...]
    edges: Tuple[Tuple[int, int], ...]

    @property
    def width(self) -> int:
        return max(max((len(b) for b in self.bags), default=0) - 1, 0)

    def adjacency(self) -> List[List[int]]:
        adjacency: List[List[int]] = [[] for _ in self.bags]
        for i, j in self.edges:
            adjacency[i].append(j)
            adjacency[j].append(i)
        for neighbours in adjacency:
            neighbours.sort()
        return adjacency


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    kind: Optional[str] = None
    witness: Tuple[int, ...] = ()
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


OK = ValidationReport(True)


def _violation(kind: str, witness: Sequence[int], detail: str) -> ValidationReport:
    return ValidationReport(False, kind, tuple(witness), detail)


def _structural_violation(td: TreeDecomposition) -> Optional[ValidationReport]:
    """Tree shape and running intersection; needs no graph."""
    count = len(td.bags)
    if count == 0:
        return _violation("shape", (), "decomposition has no bags")
    for i, j in td.edges:
        if not (0 <= i < count and 0 <= j < count) or i == j:
            return _violation("shape", (i, j), f"tree edge ({i}, {j}) is not between two distinct bags")
    if len(td.edges) != count - 1:
        return _violation("shape", (), f"{count} bags need {count - 1} tree edges, found {len(td.edges)}")
    adjacency = td.adjacency()
    seen = {0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in adjacency[i]:
            if j not in seen:
                seen.add(j)
                queue.append(j)
    if len(seen) != count:
        missing = min(set(range(count)) - seen)
        return _violation("shape", (missing,), f"bag {missing} is not connected to bag 0")

    holders: Dict[int, List[int]] = {}
    for i, bag in enumerate(td.bags):
        for v in bag:
            holders.setdefault(v, []).append(i)
    for v in sorted(holders):
        members = set(holders[v])
        start = holders[v][0]
        reached = {start}
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in adjacency[i]:
                if j in members and j not in reached:
                    reached.add(j)
                    queue.append(j)
        if reached != members:
            return _violation("connectivity", (v,), f"bags holding vertex {v} are not connected")
    return None


def validate(graph: Graph, td: TreeDecomposition) -> ValidationReport:
    """Check coverage, edge containment and connectivity; report the first failure."""
    structural = _structural_violation(td)
    if structural is not None and structural.kind == "shape":
        return structural
    covered: Set[int] = set()
    for bag in td.bags:
        covered |= bag
    for v in sorted(covered):
        if not 0 <= v < graph.n:
            return _violation("coverage", (v,), f"bag vertex {v} is not a graph vertex")
    for v in range(graph.n):
        if v not in covered:
            return _violation("coverage", (v,), f"vertex {v} is in no bag")
    for u, v in graph.edges():
        if not any(u in bag and v in bag for bag in td.bags):
            return _violation("edge", (u, v), f"edge ({u}, {v}) is in no bag")
    return structural or OK


def decomposition_from_order(graph: Graph, order: Sequence[int]) -> TreeDecomposition:
    """Decomposition whose bag ``i`` is ``order[i]`` plus its neighbours at elimination time."""
    if graph.n == 0:
        return TreeDecomposition((frozenset(),), ())
    position = {v: i for i, v in enumerate(order)}
    adjacency = [set(graph.neighbors(v)) for v in range(graph.n)]
    bags: List[VertexSet] = []
    edges: List[Tuple[int, int]] = []
    roots: List[int] = []
    for i, v in enumerate(order):
        later = adjacency[v]
        bags.append(frozenset(later | {v}))
        if later:
            edges.append((i, min(position[w] for w in later)))
        else:
            roots.append(i)
        for a in later:
            adjacency[a] |= later
            adjacency[a].discard(a)
            adjacency[a].discard(v)
        adjacency[v] = set()
    # one component root per connected component; chain them into a single tree
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    return TreeDecomposition(tuple(bags), tuple(sorted(edges)))


HEURISTICS = {
    "min-degree": approximation.treewidth_min_degree,
    "min-fill": approximation.treewidth_min_fill_in,
}


def from_networkx_decomposition(tree: nx.Graph) -> TreeDecomposition:
    """Bags are the frozenset nodes of ``tree``, in insertion order."""
    bags = tuple(frozenset(bag) for bag in tree.nodes)
    index = {bag: i for i, bag in enumerate(tree.nodes)}
    edges = sorted(tuple(sorted((index[a], index[b]))) for a, b in tree.edges)
    return TreeDecomposition(bags, tuple(edges))


def heuristic_decomposition(graph: Graph, strategy: str = "min-fill") -> TreeDecomposition:
    """Greedy elimination decomposition (min-degree or min-fill)."""
    if strategy not in HEURISTICS:
        raise ValueError(f"unknown strategy {strategy!r}, expected one of {STRATEGIES}")
    width, tree = HEURISTICS[strategy](graph.to_networkx())
    logger.debug(f"{strategy} decomposition of n={graph.n}: width {width}, {tree.number_of_nodes()} bags")
    return from_networkx_decomposition(tree)


def best_heuristic_decomposition(graph: Graph) -> TreeDecomposition:
    """Narrowest of the min-fill and min-degree decompositions."""
    candidates = [heuristic_decomposition(graph, strategy) for strategy in ("min-fill", "min-degree")]
    return min(candidates, key=lambda td: td.width)


def exact_treewidth_small(graph: Graph, hard_limit: int = DEFAULT_EXACT_LIMIT) -> Tuple[int, TreeDecomposition]:
    """Exact treewidth by memoised search over elimination orders (vertex subsets)."""
    n = graph.n
    if n > hard_limit:
        raise TooLarge(f"exact treewidth on {n} vertices exceeds limit {hard_limit}")
    if n == 0:
        td = decomposition_from_order(graph, [])
        return td.width, td
    masks = [sum(1 << w for w in graph.neighbors(v)) for v in range(n)]

    def outside_reach(eliminated: int, v: int) -> int:
        # vertices outside eliminated+{v} reachable from v through eliminated vertices
        seen = 1 << v
        frontier = 1 << v
        result = 0
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            u = low.bit_length() - 1
            fresh = masks[u] & ~seen
            seen |= fresh
            result |= fresh & ~eliminated
            frontier |= fresh & eliminated
        return result

    best: Dict[int, int] = {0: -1}
    choice: Dict[int, int] = {}
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            subset = 0
            for v in combo:
                subset |= 1 << v
            value = n
            pick = combo[0]
            for v in combo:
                rest = subset & ~(1 << v)
                cost = max(best[rest], bin(outside_reach(rest, v)).count("1"))
                if cost < value:
                    value, pick = cost, v
            best[subset] = value
            choice[subset] = pick
    order: List[int] = []
    subset = (1 << n) - 1
    while subset:
        v = choice[subset]
        order.append(v)
        subset &= ~(1 << v)
    order.reverse()
    td = decomposition_from_order(graph, order)
    width = max(best[(1 << n) - 1], 0)
    if td.width != width:
        raise InvalidDecomposition(f"exact order gives width {td.width}, expected {width}")
    return width, td


class NodeKind(str, enum.Enum):
    LEAF = "leaf"
    INTRODUCE = "introduce"
    FORGET = "forget"
    JOIN = "join"


@dataclass(frozen=True)
class NiceNode:
    kind: NodeKind
    bag: VertexSet
    vertex: Optional[int] = None
    children: Tuple[int, ...] = ()


@dataclass(frozen=True)
class NiceDecomposition:
    """Nodes in post-order: every child index is smaller than its parent's."""

    nodes: Tuple[NiceNode, ...]
    root: int

    @property
    def width(self) -> int:
        return max(max((len(node.bag) for node in self.nodes), default=0) - 1, 0)

    def to_tree_decomposition(self) -> TreeDecomposition:
        edges = tuple((c, i) for i, node in enumerate(self.nodes) for c in node.children)
        return TreeDecomposition(tuple(node.bag for node in self.nodes), edges)


class _NiceBuilder:
    def __init__(self):
        self.nodes: List[NiceNode] = []

    def add(self, kind: NodeKind, bag: FrozenSet[int], vertex: Optional[int] = None, children: Tuple[int, ...] = ()) -> int:
        self.nodes.append(NiceNode(kind, bag, vertex, children))
        return len(self.nodes) - 1

    def leaf(self) -> int:
        return self.add(NodeKind.LEAF, frozenset())

    def morph(self, index: int, target: FrozenSet[int]) -> int:
        """Forget then introduce single vertices until the bag equals ``target``."""
        bag = self.nodes[index].bag
        for v in sorted(bag - target):
            bag = bag - {v}
            index = self.add(NodeKind.FORGET, bag, v, (index,))
        for v in sorted(target - bag):
            bag = bag | {v}
            index = self.add(NodeKind.INTRODUCE, bag, v, (index,))
        return index


def make_nice(td: TreeDecomposition, graph: Optional[Graph] = None) -> NiceDecomposition:
    """Convert to a nice decomposition rooted above bag 0, keeping the width."""
    report = validate(graph, td) if graph is not None else _structural_violation(td)
    if report is not None and not report.ok:
        raise InvalidDecomposition(f"cannot make nice: {report.detail}")
    adjacency = td.adjacency()
    children: List[List[int]] = [[] for _ in td.bags]
    order = [0]
    seen = {0}
    for i in order:
        for j in adjacency[i]:
            if j not in seen:
                seen.add(j)
                children[i].append(j)
                order.append(j)

    builder = _NiceBuilder()
    top: Dict[int, int] = {}
    for i in reversed(order):
        bag = td.bags[i]
        if not children[i]:
            top[i] = builder.morph(builder.leaf(), bag)
            continue
        branches = [builder.morph(top[c], bag) for c in children[i]]
        current = branches[0]
        for other in branches[1:]:
            current = builder.add(NodeKind.JOIN, bag, None, (current, other))
        top[i] = current
    root = builder.morph(top[0], frozenset())
    nice = NiceDecomposition(tuple(builder.nodes), root)
    logger.debug(f"nice decomposition: {len(nice.nodes)} nodes from {len(td.bags)} bags, width {nice.width}")
    return nice


def check_nice(graph: Graph, nice: NiceDecomposition) -> ValidationReport:
    """Validate node kinds, empty root and leaves, and the underlying decomposition."""
    if nice.root != len(nice.nodes) - 1:
        return _violation("nice", (nice.root,), "root must be the last node in post-order")
    if nice.nodes[nice.root].bag:
        return _violation("nice", (nice.root,), "root bag must be empty")
    for i, node in enumerate(nice.nodes):
        if any(c >= i for c in node.children):
            return _violation("nice", (i,), f"node {i} has a child that is not earlier in post-order")
        kids = [nice.nodes[c].bag for c in node.children]
        if node.kind is NodeKind.LEAF:
            good = not kids and not node.bag
        elif node.kind is NodeKind.INTRODUCE:
            good = len(kids) == 1 and node.vertex not in kids[0] and node.bag == kids[0] | {node.vertex}
        elif node.kind is NodeKind.FORGET:
            good = len(kids) == 1 and node.vertex in kids[0] and node.bag == kids[0] - {node.vertex}
        else:
            good = len(kids) == 2 and kids[0] == node.bag and kids[1] == node.bag
        if not good:
            return _violation("nice", (i,), f"node {i} violates the {node.kind.value} rule")
    return validate(graph, nice.to_tree_decomposition())


@dataclass(frozen=True)
class ExcessBound:
    per_component: Tuple[int, ...]
    overall: int


def excess_bound(graph: Graph) -> ExcessBound:
    """Treewidth bound m_C - n_C + 2 per component (at least 1 with an edge, 0 for K1)."""
    bounds = []
    for component in connected_components(graph):
        if len(component) == 1:
            bounds.append(0)
            continue
        edges = sum(graph.degree(v) for v in component) // 2
        bounds.append(max(1, edges - len(component) + 2))
    return ExcessBound(tuple(bounds), max(bounds, default=0))


@dataclass(frozen=True)
class LocalTreewidthEstimate:
    k: int
    lower: int
    trials: int
    upper_excess: int
    exact: bool
    witness: VertexSet = frozenset()
    widths: Tuple[int, ...] = field(default=(), repr=False)
    excesses: Tuple[int, ...] = field(default=(), repr=False)


def _component_sizes(graph: Graph) -> List[int]:
    size = [0] * graph.n
    for component in connected_components(graph):
        for v in component:
            size[v] = len(component)
    return size


def sample_connected_subset(
    graph: Graph,
    k: int,
    rng: np.random.Generator,
    starts: Optional[Sequence[int]] = None,
) -> VertexSet:
    """Grow a connected k-set from a uniform start by adding uniform boundary vertices."""
    if starts is None:
        size = _component_sizes(graph)
        starts = [v for v in range(graph.n) if size[v] >= k]
    if not starts:
        raise NoConnectedSubgraph(f"no component has {k} vertices")
    start = starts[int(rng.integers(len(starts)))]
    chosen = {start}
    boundary = list(graph.neighbors(start))
    on_boundary = set(boundary)
    while len(chosen) < k:
        i = int(rng.integers(len(boundary)))
        v = boundary[i]
        boundary[i] = boundary[-1]
        boundary.pop()
        on_boundary.discard(v)
        chosen.add(v)
        for w in graph.neighbors(v):
            if w not in chosen and w not in on_boundary:
                on_boundary.add(w)
                boundary.append(w)
    return frozenset(chosen)


def subgraph_width(graph: Graph, exact_limit: int = DEFAULT_EXACT_LIMIT) -> Tuple[int, bool]:
    """Exact treewidth when small enough, else the best heuristic width."""
    if graph.n <= exact_limit:
        return exact_treewidth_small(graph, exact_limit)[0], True
    return best_heuristic_decomposition(graph).width, False


def local_treewidth_sample(
    graph: Graph,
    k: int,
    trials: int,
    seed: int,
    exact_limit: int = DEFAULT_EXACT_LIMIT,
) -> LocalTreewidthEstimate:
    """Estimate t_k(G) from ``trials`` sampled connected k-vertex subgraphs.

    Induced subgraphs suffice: deleting edges never raises treewidth.
    ``lower`` is a certified lower bound only when ``exact`` is true.
    """
    if not 1 <= k <= graph.n:
        raise KOutOfRange(f"k={k} outside 1..{graph.n}")
    size = _component_sizes(graph)
    starts = [v for v in range(graph.n) if size[v] >= k]
    if not starts:
        raise NoConnectedSubgraph(f"largest component has {max(size)} vertices, need {k}")
    rng = substream(seed, "sample")
    widths, excesses = [], []
    best_width, witness, exact = -1, frozenset(), True
    for _ in range(trials):
        subset = sample_connected_subset(graph, k, rng, starts)
        sub, _ = induced_subgraph(graph, subset)
        width, is_exact = subgraph_width(sub, exact_limit)
        exact = exact and is_exact
        widths.append(width)
        excesses.append(excess_bound(sub).overall)
        if width > best_width:
            best_width, witness = width, subset
    return LocalTreewidthEstimate(
        k, max(best_width, 0), trials, max(excesses, default=0), exact, witness, tuple(widths), tuple(excesses)
    )


def exact_local_treewidth_tiny(graph: Graph, k: int, limit: int = DEFAULT_EXACT_LIMIT) -> Tuple[int, VertexSet]:
    """t_k(G) by exhaustive enumeration of k-subsets, with a witness subset."""
    if graph.n > limit:
        raise TooLarge(f"local treewidth enumeration over {graph.n} vertices exceeds limit {limit}")
    if not 1 <= k <= graph.n:
        raise KOutOfRange(f"k={k} outside 1..{graph.n}")
    best, witness = -1, frozenset()
    for combo in itertools.combinations(range(graph.n), k):
        sub, _ = induced_subgraph(graph, combo)
        width = exact_treewidth_small(sub, limit)[0]
        if width > best:
            best, witness = width, frozenset(combo)
    return best, witness
