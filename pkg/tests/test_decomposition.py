import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stopcontagion.decomposition import (
    STRATEGIES,
    NodeKind,
    TreeDecomposition,
    check_nice,
    decomposition_from_order,
    exact_local_treewidth_tiny,
    exact_treewidth_small,
    excess_bound,
    heuristic_decomposition,
    local_treewidth_sample,
    make_nice,
    validate,
)
from stopcontagion.errors import InvalidDecomposition, KOutOfRange, NoConnectedSubgraph, TooLarge
from stopcontagion.graph_core import degeneracy, empty_graph, from_edge_list
from stopcontagion.random_models import complete_graph, cycle, path, random_tree

from .strategies import connected_graphs, graphs, trees


def petersen():
    g = nx.petersen_graph()
    return from_edge_list(g.number_of_nodes(), g.edges())


def test_single_bag_is_valid():
    td = TreeDecomposition((frozenset(range(4)),), ())
    assert validate(complete_graph(4), td).ok
    assert td.width == 3


def test_path_bags():
    td = TreeDecomposition((frozenset({0, 1}), frozenset({1, 2})), ((0, 1),))
    assert validate(path(3), td)
    assert td.width == 1


def test_missing_edge_is_reported():
    td = TreeDecomposition((frozenset({0, 1}), frozenset({2, 3})), ((0, 1),))
    report = validate(path(4), td)
    assert not report.ok
    assert report.kind == "edge"
    assert report.witness == (1, 2)


def test_broken_running_intersection():
    td = TreeDecomposition(
        (frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 2})),
        ((0, 1), (1, 2)),
    )
    report = validate(complete_graph(3), td)
    assert report.kind == "connectivity"
    assert report.witness == (0,)


def test_uncovered_vertex_and_bad_shape():
    assert validate(empty_graph(2), TreeDecomposition((frozenset({0}),), ())).kind == "coverage"
    assert validate(path(2), TreeDecomposition((frozenset({0, 1}),) * 2, ())).kind == "shape"


@pytest.mark.parametrize("strategy", STRATEGIES)
@pytest.mark.parametrize(
    "graph, width",
    [(random_tree(20, 3, seed=1), 1), (cycle(5), 2), (complete_graph(5), 4)],
)
def test_heuristic_widths(strategy, graph, width):
    td = heuristic_decomposition(graph, strategy)
    assert validate(graph, td).ok
    assert td.width == width


@pytest.mark.parametrize(
    "graph, width",
    [(complete_graph(4), 3), (cycle(5), 2), (random_tree(9, 3, seed=4), 1), (petersen(), 4)],
)
def test_exact_treewidth(graph, width):
    value, td = exact_treewidth_small(graph)
    assert value == width
    assert validate(graph, td).ok


def test_exact_treewidth_guard():
    with pytest.raises(TooLarge):
        exact_treewidth_small(path(13), hard_limit=12)


def test_unknown_strategy():
    with pytest.raises(ValueError):
        heuristic_decomposition(path(3), "max-degree")


def test_nice_form_of_empty_bag():
    nice = make_nice(TreeDecomposition((frozenset(),), ()))
    assert len(nice.nodes) == 1
    assert nice.nodes[nice.root].kind is NodeKind.LEAF


def test_nice_form_of_single_edge_bag():
    nice = make_nice(TreeDecomposition((frozenset({0, 1}),), ()), path(2))
    kinds = [node.kind for node in nice.nodes]
    assert kinds == [NodeKind.LEAF, NodeKind.INTRODUCE, NodeKind.INTRODUCE, NodeKind.FORGET, NodeKind.FORGET]
    assert nice.width == 1
    assert check_nice(path(2), nice).ok


def test_nice_form_of_cycle():
    graph = cycle(5)
    nice = make_nice(heuristic_decomposition(graph), graph)
    assert check_nice(graph, nice).ok
    assert nice.width == 2


def test_make_nice_rejects_invalid_input():
    td = TreeDecomposition((frozenset({0, 1}), frozenset({2, 3})), ((0, 1),))
    with pytest.raises(InvalidDecomposition):
        make_nice(td, path(4))


@pytest.mark.parametrize(
    "graph, bound",
    [(random_tree(15, 3, seed=0), 1), (cycle(5), 2), (complete_graph(4), 4), (empty_graph(1), 0)],
)
def test_excess_bound(graph, bound):
    assert excess_bound(graph).overall == bound


def test_excess_bound_per_component():
    graph = from_edge_list(6, [(0, 1), (1, 2), (0, 2), (3, 4)])
    assert excess_bound(graph).per_component == (2, 1, 0)


@settings(max_examples=200, deadline=None)
@given(graphs(max_n=8))
def test_heuristics_bound_exact_and_excess_bounds_exact(graph):
    exact, td = exact_treewidth_small(graph)
    assert validate(graph, td).ok
    for strategy in STRATEGIES:
        heuristic = heuristic_decomposition(graph, strategy)
        assert validate(graph, heuristic).ok
        assert heuristic.width >= exact
    assert exact <= excess_bound(graph).overall


@settings(deadline=None)
@given(graphs(max_n=10))
def test_nice_decomposition_keeps_width(graph):
    td = heuristic_decomposition(graph)
    nice = make_nice(td, graph)
    assert check_nice(graph, nice).ok
    assert nice.width == td.width


@given(trees(max_n=10))
def test_any_order_on_a_tree_is_valid(tree):
    td = decomposition_from_order(tree, list(reversed(range(tree.n))))
    assert validate(tree, td).ok


def test_local_treewidth_of_tree():
    estimate = local_treewidth_sample(random_tree(40, 3, seed=2), 6, trials=10, seed=0)
    assert estimate.lower == 1
    assert estimate.exact
    assert estimate.upper_excess == 1
    assert len(estimate.widths) == 10
    assert len(estimate.witness) == 6


def test_local_treewidth_of_complete_graph():
    estimate = local_treewidth_sample(complete_graph(6), 4, trials=5, seed=3)
    assert estimate.lower == 3
    assert estimate.upper_excess == 4


def test_local_treewidth_sampling_is_seeded():
    graph = cycle(12)
    assert local_treewidth_sample(graph, 5, 8, seed=11) == local_treewidth_sample(graph, 5, 8, seed=11)


def test_local_treewidth_errors():
    with pytest.raises(KOutOfRange):
        local_treewidth_sample(path(5), 0, 1, seed=0)
    with pytest.raises(NoConnectedSubgraph):
        local_treewidth_sample(empty_graph(5), 2, 1, seed=0)


def test_exact_local_treewidth():
    assert exact_local_treewidth_tiny(path(4), 2)[0] == 1
    assert exact_local_treewidth_tiny(complete_graph(5), 3)[0] == 2
    value, witness = exact_local_treewidth_tiny(petersen(), 5)
    assert value == 2
    assert len(witness) == 5


@settings(max_examples=20, deadline=None)
@given(graphs(min_n=2, max_n=7))
def test_exact_local_treewidth_is_monotone_in_k(graph):
    values = [exact_local_treewidth_tiny(graph, k)[0] for k in range(1, graph.n + 1)]
    assert values == sorted(values)


@settings(max_examples=2000, deadline=None)
@given(connected_graphs(max_n=8))
def test_edge_excess_bounds_exact_treewidth(graph):
    width, _ = exact_treewidth_small(graph)
    assert width <= excess_bound(graph).overall
    if graph.n > 1:
        assert width <= graph.m - graph.n + 2


@settings(max_examples=200, deadline=None)
@given(graphs(max_n=8))
def test_degeneracy_is_below_exact_treewidth(graph):
    assert degeneracy(graph)[0] <= exact_treewidth_small(graph)[0]


@st.composite
def bridged_components(draw):
    parts = draw(st.lists(connected_graphs(max_n=4), min_size=1, max_size=3))
    offsets, edges, n = [], [], 0
    for part in parts:
        offsets.append(n)
        edges.extend((u + n, v + n) for u, v in part.edges())
        n += part.n
    for i in range(1, len(parts)):
        j = draw(st.integers(0, i - 1))
        u = offsets[i] + draw(st.integers(0, parts[i].n - 1))
        v = offsets[j] + draw(st.integers(0, parts[j].n - 1))
        edges.append((v, u))
    return parts, from_edge_list(n, edges)


@settings(max_examples=500, deadline=None)
@given(bridged_components())
def test_bridging_components_keeps_treewidth(data):
    parts, joined = data
    widest = max(exact_treewidth_small(part)[0] for part in parts)
    assert exact_treewidth_small(joined)[0] <= max(widest, 1)
