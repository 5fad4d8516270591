import pytest

from stopcontagion.decomposition import heuristic_decomposition, validate
from stopcontagion.errors import BadSpec, IoError, ParseError
from stopcontagion.fileio import (
    format_decomposition,
    format_edge_list,
    format_thresholds,
    format_vertex_list,
    parse_decomposition,
    parse_edge_list,
    parse_thresholds,
    parse_vertex_list,
    read_graph,
    read_text,
    write_graph,
)
from stopcontagion.percolation import IMMUNIZED
from stopcontagion.random_models import cycle
from stopcontagion.specs import build_graph, parse_spec


def test_edge_list_with_comments():
    graph = parse_edge_list("# triangle\n3 3\n0 1\n\n1 2  # closing edge next\n2 0\n")
    assert (graph.n, graph.m) == (3, 3)
    assert format_edge_list(graph) == "3 3\n0 1\n0 2\n1 2\n"


@pytest.mark.parametrize(
    "text",
    ["", "3 2\n0 1\n", "3 1\n0 x\n", "3 2\n0 1\n1 0\n", "2 1\n0 5\n", "3 1\n1 1\n"],
)
def test_bad_edge_lists(text):
    with pytest.raises(ParseError):
        parse_edge_list(text)


def test_graph_files(tmp_path):
    target = tmp_path / "c5.txt"
    write_graph(target, cycle(5))
    assert read_graph(target) == cycle(5)
    with pytest.raises(IoError):
        read_text(tmp_path / "missing.txt")


def test_vertex_lists():
    assert parse_vertex_list("3\n# seed\n1\n", 4) == frozenset({1, 3})
    assert format_vertex_list({3, 1}) == "1\n3\n"
    with pytest.raises(ParseError):
        parse_vertex_list("4\n", 4)


def test_thresholds():
    thresholds = parse_thresholds("1 3\n2 inf\n", 4, default=2, seeds={0})
    assert thresholds.values == (0, 3, IMMUNIZED, 2)
    assert format_thresholds(thresholds) == "0 0\n1 3\n2 inf\n3 2\n"
    with pytest.raises(ParseError):
        parse_thresholds("9 2\n", 4)
    with pytest.raises(ParseError):
        parse_thresholds("1\n", 4)


def test_decomposition_text():
    graph = cycle(5)
    td = heuristic_decomposition(graph)
    parsed = parse_decomposition(format_decomposition(td))
    assert parsed == td
    assert validate(graph, parsed).ok
    with pytest.raises(ParseError):
        parse_decomposition("bags 2\n0: 1 2\nedges\n")
    with pytest.raises(ParseError):
        parse_decomposition("0: 1 2\n")


def test_spec_parsing():
    assert str(parse_spec("gnp:n=100,d=3")) == "gnp:n=100,d=3"
    assert str(parse_spec("noisytree:n=10,delta=3")) == "noisytree:n=10,delta=3,eps=1"
    assert str(parse_spec(" grid : side=4 ")) == "grid:side=4"
    assert parse_spec("gnp:n=100,d=2.5")["d"] == 2.5


@pytest.mark.parametrize(
    "text",
    ["", "hypercube:n=8", "gnp:n=100", "gnp:n=10.5,d=2", "gnp:n=10,d=two", "gnp:n=10,d=2,k=3", "tree:n=-4,delta=3", "gnp n=3"],
)
def test_bad_specs(text):
    with pytest.raises(BadSpec):
        parse_spec(text)


def test_generated_graphs():
    assert format_edge_list(build_graph("path:n=5")) == "5 4\n0 1\n1 2\n2 3\n3 4\n"
    assert format_edge_list(build_graph("gnp:n=100,d=0")) == "100 0\n"
    assert build_graph("noisytree:n=200,delta=3,eps=1", seed=5) == build_graph("noisytree:n=200,delta=3,eps=1", seed=5)
    assert build_graph("regular:n=10,d=3", seed=1).max_degree() == 3
    with pytest.raises(BadSpec):
        build_graph("regular:n=10,d=2.5")
