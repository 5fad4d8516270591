"""Instance generators with known optima, built from vertex cover.

Each vertex ``i`` of the cover graph becomes a middle vertex fed by its own
pair of seeds, and each edge becomes a protected vertex of threshold 2 joined
to both endpoints. Protecting an edge vertex costs one deletion at the edge
vertex itself or one seed edge at an endpoint, so the stopping optimum is the
minimum vertex cover.
"""
import itertools
import logging
from typing import List

from .contagion import MinContagionInstance, StopContagionInstance
from .errors import InvalidInstance, TooLarge
from .graph_core import Edge, Graph, from_edge_list
from .percolation import Threshold, ThresholdMap

logger = logging.getLogger(__name__)

GADGET_THRESHOLD = 2


def gen_hard_stop_instance(g_vc: Graph) -> StopContagionInstance:
    """Stopping-contagion instance whose optimum equals vc(g_vc).

    Layout: middle vertices ``0..n-1``, edge vertices ``n..n+m-1`` (in edge
    order), then the seed pair ``n+m+2i, n+m+2i+1`` of middle vertex ``i``.
    """
    n, m = g_vc.n, g_vc.m
    edges: List[Edge] = []
    for index, (u, v) in enumerate(g_vc.edges()):
        edges.append((u, n + index))
        edges.append((v, n + index))
    seeds = set()
    for i in range(n):
        first = n + m + 2 * i
        edges.append((i, first))
        edges.append((i, first + 1))
        seeds.update((first, first + 1))
    graph = from_edge_list(n + m + 2 * n, edges)
    protected = frozenset(range(n, n + m))
    logger.debug(f"hard stop instance from vc graph n={n}, m={m}: {graph.n} vertices, {graph.m} edges")
    return StopContagionInstance.uniform(graph, seeds, protected, GADGET_THRESHOLD)


def _hub_size(instance: StopContagionInstance) -> int:
    return instance.graph.m + 1


def shrink_seeds_to_pair(instance: StopContagionInstance) -> StopContagionInstance:
    """Same optimum with exactly two seeds.

    Two new seeds feed ``|E| + 1`` hub vertices, which in turn reach every
    old seed; the old seeds become ordinary threshold-2 vertices.
    """
    n = instance.graph.n
    hub = range(n + 2, n + 2 + _hub_size(instance))
    s, s_prime = n, n + 1
    edges = list(instance.graph.edges())
    for z in hub:
        edges.append((s, z))
        edges.append((s_prime, z))
        edges.extend((a, z) for a in sorted(instance.seeds))
    graph = from_edge_list(hub.stop, edges)
    values: List[Threshold] = list(instance.thresholds.values)
    for a in instance.seeds:
        values[a] = GADGET_THRESHOLD
    values.extend([0, 0])
    values.extend([GADGET_THRESHOLD] * len(hub))
    return StopContagionInstance(graph, frozenset((s, s_prime)), instance.protected, ThresholdMap(tuple(values)))


def shrink_protected_to_single(instance: StopContagionInstance) -> StopContagionInstance:
    """Same optimum with a single protected vertex.

    A new seed ``s`` and the protected set share ``|E| + 1`` hub vertices,
    all joined to the new protected vertex ``t``: one infected old protected
    vertex activates the whole hub and then ``t``.
    """
    n = instance.graph.n
    s, t = n, n + 1
    hub = range(n + 2, n + 2 + _hub_size(instance))
    edges = list(instance.graph.edges())
    for z in hub:
        edges.append((s, z))
        edges.append((t, z))
        edges.extend((b, z) for b in sorted(instance.protected))
    graph = from_edge_list(hub.stop, edges)
    values: List[Threshold] = list(instance.thresholds.values)
    values.extend([0, GADGET_THRESHOLD])
    values.extend([GADGET_THRESHOLD] * len(hub))
    return StopContagionInstance(graph, instance.seeds | {s}, frozenset((t,)), ThresholdMap(tuple(values)))


def gen_hard_min_instance(instance: StopContagionInstance) -> MinContagionInstance:
    """Minimizing-contagion instance with slack n-1 and the same optimum.

    Needs exactly one protected vertex ``b``. ``2n`` new vertices are joined
    to one seed and to ``b``, so infecting ``b`` blows the slack.
    """
    if len(instance.protected) != 1:
        raise InvalidInstance(f"expected exactly one protected vertex, got {len(instance.protected)}")
    if not instance.seeds:
        raise InvalidInstance("expected at least one seed")
    n = instance.graph.n
    (b,) = instance.protected
    a = min(instance.seeds)
    extra = range(n, 3 * n)
    edges = list(instance.graph.edges())
    for x in extra:
        edges.append((a, x))
        edges.append((b, x))
    graph = from_edge_list(3 * n, edges)
    values: List[Threshold] = list(instance.thresholds.values)
    values.extend([GADGET_THRESHOLD] * len(extra))
    return MinContagionInstance(graph, instance.seeds, ThresholdMap(tuple(values)), n - 1)


def min_vertex_cover_bruteforce(graph: Graph, limit: int = 20) -> int:
    if graph.n > limit:
        raise TooLarge(f"vertex cover enumeration over {graph.n} vertices exceeds limit {limit}")
    edges = graph.edges()
    for size in range(graph.n + 1):
        for chosen in itertools.combinations(range(graph.n), size):
            cover = set(chosen)
            if all(u in cover or v in cover for u, v in edges):
                return size
    return graph.n
