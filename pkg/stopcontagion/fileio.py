"""Plain-text formats for graphs, vertex sets, thresholds and decompositions.

Every format ignores blank lines and ``#`` comments.

Edge list::

    n m
    u v        (m lines)

Thresholds: ``v t`` per line, ``t`` an integer or ``inf``. Seeds and
protected sets: one vertex id per line. Decompositions::

    bags b
    i: v1 v2 ...
    edges
    i j
"""
import logging
import re
from pathlib import Path
from typing import Iterable, List, Optional, Tuple, Union

from .decomposition import TreeDecomposition
from .errors import GraphError, IoError, ParseError
from .graph_core import Graph, VertexSet, from_edge_list
from .percolation import IMMUNIZED, Threshold, ThresholdMap

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_INT = re.compile(r"-?\d+")
_BAG = re.compile(r"^(\d+)\s*:\s*(.*)$")


def _lines(text: str) -> List[Tuple[int, str]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((number, line))
    return lines


def _ints(number: int, line: str, count: Optional[int] = None) -> List[int]:
    fields = line.split()
    if not all(_INT.fullmatch(f) for f in fields):
        raise ParseError(f"line {number}: expected integers, got {line!r}")
    if count is not None and len(fields) != count:
        raise ParseError(f"line {number}: expected {count} fields, got {len(fields)}")
    return [int(f) for f in fields]


def read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise IoError(f"cannot read {path}: {e}")


def write_text(path: PathLike, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise IoError(f"cannot write {path}: {e}")


def parse_edge_list(text: str) -> Graph:
    lines = _lines(text)
    if not lines:
        raise ParseError("empty edge list: missing 'n m' header")
    number, header = lines[0]
    n, m = _ints(number, header, 2)
    if n < 0 or m < 0:
        raise ParseError(f"line {number}: negative header values")
    body = lines[1:]
    if len(body) != m:
        raise ParseError(f"header announces {m} edges, found {len(body)}")
    edges = [tuple(_ints(number, line, 2)) for number, line in body]
    try:
        return from_edge_list(n, edges)
    except GraphError as e:
        raise ParseError(f"invalid edge list: {e.detail}")


def format_edge_list(graph: Graph) -> str:
    rows = [f"{graph.n} {graph.m}"]
    rows.extend(f"{u} {v}" for u, v in graph.edges())
    return "\n".join(rows) + "\n"


def read_graph(path: PathLike) -> Graph:
    return parse_edge_list(read_text(path))


def write_graph(path: PathLike, graph: Graph) -> None:
    write_text(path, format_edge_list(graph))


def parse_vertex_list(text: str, n: Optional[int] = None) -> VertexSet:
    vertices = set()
    for number, line in _lines(text):
        (v,) = _ints(number, line, 1)
        if v < 0 or (n is not None and v >= n):
            raise ParseError(f"line {number}: vertex {v} out of range")
        vertices.add(v)
    return frozenset(vertices)


def format_vertex_list(vertices: Iterable[int]) -> str:
    return "".join(f"{v}\n" for v in sorted(vertices))


def read_vertex_list(path: PathLike, n: Optional[int] = None) -> VertexSet:
    return parse_vertex_list(read_text(path), n)


def parse_thresholds(text: str, n: int, default: int = 2, seeds: Iterable[int] = ()) -> ThresholdMap:
    """Threshold map with ``default`` for unlisted vertices and 0 for ``seeds``."""
    values: List[Threshold] = [default] * n
    for number, line in _lines(text):
        fields = line.split()
        if len(fields) != 2:
            raise ParseError(f"line {number}: expected 'v t', got {line!r}")
        (v,) = _ints(number, fields[0], 1)
        if not 0 <= v < n:
            raise ParseError(f"line {number}: vertex {v} out of range")
        if fields[1].lower() == "inf":
            values[v] = IMMUNIZED
        else:
            (t,) = _ints(number, fields[1], 1)
            if t < 0:
                raise ParseError(f"line {number}: negative threshold {t}")
            values[v] = t
    for v in seeds:
        values[v] = 0
    return ThresholdMap(tuple(values))


def format_thresholds(thresholds: ThresholdMap) -> str:
    return "".join(
        f"{v} {'inf' if t is IMMUNIZED else t}\n" for v, t in enumerate(thresholds.values)
    )


def parse_decomposition(text: str) -> TreeDecomposition:
    lines = _lines(text)
    if not lines or not lines[0][1].startswith("bags"):
        raise ParseError("decomposition must start with 'bags b'")
    number, header = lines[0]
    (count,) = _ints(number, header[len("bags"):], 1)
    bags: List[VertexSet] = []
    position = 1
    while position < len(lines) and lines[position][1] != "edges":
        number, line = lines[position]
        match = _BAG.match(line)
        if not match or int(match.group(1)) != len(bags):
            raise ParseError(f"line {number}: expected bag {len(bags)}, got {line!r}")
        bags.append(frozenset(_ints(number, match.group(2))))
        position += 1
    if len(bags) != count:
        raise ParseError(f"header announces {count} bags, found {len(bags)}")
    edges = []
    for number, line in lines[position + 1:]:
        i, j = _ints(number, line, 2)
        edges.append((i, j))
    return TreeDecomposition(tuple(bags), tuple(edges))


def format_decomposition(td: TreeDecomposition) -> str:
    rows = [f"bags {len(td.bags)}"]
    rows.extend(f"{i}: {' '.join(str(v) for v in sorted(bag))}".rstrip() for i, bag in enumerate(td.bags))
    rows.append("edges")
    rows.extend(f"{i} {j}" for i, j in td.edges)
    return "\n".join(rows) + "\n"
