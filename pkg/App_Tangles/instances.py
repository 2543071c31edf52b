"""
Plain-text instances.

    graph <n> <m>           matrix <rows> <cols>
    <u> <v>    (m lines)    <0/1 row>   (rows lines, cols entries each)

Vertices are 0-based. Blank lines and everything after '#' are ignored.
"""

import hashlib
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

import networkx as nx

from . connectivity import (
    ConnectivityOracle, cut_rank_fn, edge_boundary_fn, matroid_connectivity_fn, vertex_cut_fn,
)
from . exceptions import DomainError, ParseError, SizeGuardError

logger = logging.getLogger(__name__)

MAX_GROUND = 64
FUNCTIONS = ("edge-boundary", "vertex-cut", "cut-rank", "matroid")
FIXTURE_DIR = Path(__file__).resolve().parent / 'fixtures'

# name: (file, function)
FIXTURES = {
    "triforce": ("triforce.txt", "edge-boundary"),
    "p3": ("p3.txt", "edge-boundary"),
    "k4": ("k4.txt", "edge-boundary"),
    "grid3": ("grid3.txt", "edge-boundary"),
    "c5rank": ("c5.txt", "cut-rank"),
    "k4_matroid": ("k4_matroid.txt", "matroid"),
}


@dataclass
class Instance:
    kind: str
    graph: Optional[nx.Graph] = None
    edges: Tuple[Tuple[int, int], ...] = ()
    matrix: Tuple[Tuple[int, ...], ...] = ()


def _lines(text: str) -> List[Tuple[int, List[str]]]:
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        words = raw.split('#', 1)[0].split()
        if words:
            out.append((number, words))
    return out


def _ints(words: List[str], line: int) -> List[int]:
    try:
        return [int(w) for w in words]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(words)!r}", line)


def parse_text(text: str) -> Instance:
    lines = _lines(text)
    if not lines:
        raise ParseError("empty instance", 1)
    line, header = lines[0]
    if len(header) != 3 or header[0] not in ('graph', 'matrix'):
        raise ParseError("header must be 'graph <n> <m>' or 'matrix <rows> <cols>'", line)
    kind = header[0]
    a, b = _ints(header[1:], line)
    body = lines[1:]
    if a < 0 or b < 0:
        raise ParseError("sizes must be nonnegative", line)
    if kind == 'matrix' and (a == 0 or b == 0):
        raise ParseError("a matrix needs at least one row and one column", line)
    if len(body) != (b if kind == 'graph' else a):
        last = body[-1][0] + 1 if body else line + 1
        raise ParseError(f"expected {b if kind == 'graph' else a} lines after the header, found {len(body)}", last)

    if kind == 'graph':
        G = nx.Graph()
        G.add_nodes_from(range(a))
        edges = []
        for line, words in body:
            if len(words) != 2:
                raise ParseError("an edge line holds two vertices", line)
            u, v = _ints(words, line)
            if not (0 <= u < a and 0 <= v < a):
                raise ParseError(f"vertex out of range 0..{a - 1}", line)
            if u == v:
                raise ParseError("loops are not supported", line)
            if G.has_edge(u, v):
                raise ParseError(f"edge {u}-{v} listed twice", line)
            G.add_edge(u, v)
            edges.append((u, v))
        return Instance(kind, graph=G, edges=tuple(edges))

    rows = []
    for line, words in body:
        row = _ints(words, line)
        if len(row) != b or any(x not in (0, 1) for x in row):
            raise ParseError(f"a matrix row holds {b} entries, each 0 or 1", line)
        rows.append(tuple(row))
    return Instance(kind, matrix=tuple(rows))


def _guard(n: int) -> None:
    if n > MAX_GROUND:
        raise SizeGuardError("ground set size", MAX_GROUND, n)
    if n < 1:
        raise DomainError("the ground set is empty")


def _incidence(instance: Instance) -> List[List[int]]:
    vertices = instance.graph.number_of_nodes()
    matrix = [[0] * len(instance.edges) for _ in range(vertices)]
    for i, (u, v) in enumerate(instance.edges):
        matrix[u][i] = matrix[v][i] = 1
    return matrix


def build_oracle(instance: Instance, fn: Optional[str] = None) -> ConnectivityOracle:
    fn = fn or ('edge-boundary' if instance.kind == 'graph' else 'matroid')
    if fn not in FUNCTIONS:
        raise DomainError(f"unknown function {fn!r}; choose from {', '.join(FUNCTIONS)}")
    if instance.kind == 'matrix':
        if fn != 'matroid':
            raise DomainError(f"a matrix instance only supports the matroid function, not {fn!r}")
        _guard(len(instance.matrix[0]) if instance.matrix else 0)
        cols = len(instance.matrix[0])
        return matroid_connectivity_fn(instance.matrix, [f"c{i}" for i in range(cols)])
    G = instance.graph
    if fn in ('vertex-cut', 'cut-rank'):
        _guard(G.number_of_nodes())
        return vertex_cut_fn(G) if fn == 'vertex-cut' else cut_rank_fn(G)
    _guard(len(instance.edges))
    if fn == 'edge-boundary':
        return edge_boundary_fn(G, instance.edges)
    labels = [f"{u}-{v}" for u, v in instance.edges]
    return matroid_connectivity_fn(_incidence(instance), labels)


def parse_instance(path, fn: Optional[str] = None) -> ConnectivityOracle:
    """Reads an instance file; `fn` defaults to edge-boundary for graphs and matroid for matrices."""
    text = Path(path).read_text()
    oracle = build_oracle(parse_text(text), fn)
    logger.debug(f"parsed {path}: {oracle.name} over {oracle.n} elements")
    return oracle


def normalized_text(text: str) -> str:
    return "\n".join(" ".join(words) for _, words in _lines(text)) + "\n"


def instance_digest(text: str) -> str:
    return hashlib.sha256(normalized_text(text).encode()).hexdigest()


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise DomainError(f"unknown fixture {name!r}")
    return (FIXTURE_DIR / FIXTURES[name][0]).read_text()


def load_fixture(name: str, fn: Optional[str] = None) -> ConnectivityOracle:
    text = fixture_text(name)
    return build_oracle(parse_text(text), fn or FIXTURES[name][1])


def fixture_graph(name: str) -> Tuple[nx.Graph, Tuple[Tuple[int, int], ...]]:
    instance = parse_text(fixture_text(name))
    if instance.kind != 'graph':
        raise DomainError(f"fixture {name!r} is not a graph")
    return instance.graph, instance.edges


__all__ = [
    "Instance", "FUNCTIONS", "FIXTURES", "parse_text", "build_oracle", "parse_instance",
    "normalized_text", "instance_digest", "fixture_text", "load_fixture", "fixture_graph",
]
