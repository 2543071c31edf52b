"""
JSON and DOT documents for decompositions, plus the two post-passes that
are not part of the canonical output.
"""

import json
import logging
from typing import Optional, Sequence, Tuple

import networkx as nx

from . connectivity import ConnectivityOracle
from . decomposition import (
    DirectedTreeDecomposition, TangleTreeDecomposition, TreeDecomposition, VerificationReport,
    attach_tangles, verify_directed_decomposition, verify_tangle_decomposition,
)
from . exceptions import DomainError, TanglesError
from . subsets import Subset, from_ids, members
from . tangle_ds import TangleDataStructure

logger = logging.getLogger(__name__)

UNDIRECTED = "tangle-decomposition"
DIRECTED = "directed-tangle-decomposition"
VERSION = 1


def json_text(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _node_order(td: TreeDecomposition):
    def key(v):
        return members(td.bags[v]), sorted(members(td.side(v, u)) for u in td.tree.neighbors(v))
    return sorted(td.tree.nodes, key=key)


def decomposition_to_json(td: TreeDecomposition) -> dict:
    """Nodes numbered by bag content, edges listed as (a, b) with a < b and b's side as separation."""
    ids = {v: i for i, v in enumerate(_node_order(td))}
    tangle_at = td.tangle_at if isinstance(td, TangleTreeDecomposition) else {}
    nodes = []
    for v, i in sorted(ids.items(), key=lambda item: item[1]):
        entry = {"id": i, "kind": "tangle" if v in tangle_at else "hub", "bag": members(td.bags[v])}
        if v in tangle_at:
            entry["tangleOrder"] = td.tangles[tangle_at[v]].order
        nodes.append(entry)
    edges = []
    for s, t in td.tree.edges:
        (a, u), (b, w) = sorted(((ids[s], s), (ids[t], t)))
        x = td.side(u, w)
        edges.append({"a": a, "b": b, "separation": members(x), "order": td.oracle.evaluate(x)})
    edges.sort(key=lambda e: (e["a"], e["b"]))
    return {
        "format": UNDIRECTED,
        "version": VERSION,
        "function": td.oracle.name,
        "order": getattr(td, "order", None),
        "ground": list(td.oracle.ground.labels),
        "nodes": nodes,
        "edges": edges,
    }


def directed_to_json(dtd: DirectedTreeDecomposition) -> dict:
    bags = dtd.bags
    ordered = sorted(dtd.tree.nodes, key=lambda v: (members(dtd.cones[v]), members(bags[v])))
    ids = {v: i for i, v in enumerate(ordered)}
    tangle_at = dtd.tangle_at
    nodes = [{
        "id": ids[v],
        "tangleIndex": tangle_at[v],
        "tangleOrder": dtd.tangles[tangle_at[v]].order,
        "cone": members(dtd.cones[v]),
        "bag": members(bags[v]),
    } for v in ordered]
    edges = sorted(({"parent": ids[p], "child": ids[c]} for p, c in dtd.tree.edges),
                   key=lambda e: (e["parent"], e["child"]))
    return {
        "format": DIRECTED,
        "version": VERSION,
        "function": dtd.oracle.name,
        "order": dtd.order,
        "root": ids[dtd.root],
        "ground": list(dtd.oracle.ground.labels),
        "nodes": nodes,
        "edges": edges,
    }


def _dot_label(oracle: ConnectivityOracle, title: str, x: Subset) -> str:
    return f'{title}\\n{{{", ".join(oracle.ground.names(x))}}}'


def decomposition_to_dot(td: TreeDecomposition) -> str:
    doc = decomposition_to_json(td)
    oracle = td.oracle
    lines = ["graph decomposition {"]
    for node in doc["nodes"]:
        title = f"tangle of order {node['tangleOrder']}" if node["kind"] == "tangle" else "hub"
        lines.append(f'  n{node["id"]} [label="{_dot_label(oracle, title, from_ids(node["bag"]))}"];')
    for edge in doc["edges"]:
        lines.append(f'  n{edge["a"]} -- n{edge["b"]} [label="{edge["order"]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def directed_to_dot(dtd: DirectedTreeDecomposition) -> str:
    doc = directed_to_json(dtd)
    oracle = dtd.oracle
    lines = ["digraph decomposition {"]
    for node in doc["nodes"]:
        title = f"tangle {node['tangleIndex']}"
        lines.append(f'  n{node["id"]} [label="{_dot_label(oracle, title, from_ids(node["bag"]))}"];')
    for edge in doc["edges"]:
        lines.append(f'  n{edge["parent"]} -> n{edge["child"]};')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _check_header(doc: dict, oracle: ConnectivityOracle) -> None:
    if doc.get("version") != VERSION:
        raise DomainError(f"unsupported document version {doc.get('version')!r}")
    if len(doc.get("ground", [])) != oracle.n:
        raise DomainError(f"document is over {len(doc.get('ground', []))} elements, the instance has {oracle.n}")


def decomposition_from_json(oracle: ConnectivityOracle, doc: dict, ds: TangleDataStructure) -> TangleTreeDecomposition:
    """Rebuilds the tree and re-derives which maximal tangle sits at which node."""
    _check_header(doc, oracle)
    tree = nx.Graph()
    tree.add_nodes_from(node["id"] for node in doc["nodes"])
    tree.add_edges_from((edge["a"], edge["b"]) for edge in doc["edges"])
    td = TreeDecomposition(oracle, tree, {node["id"]: from_ids(node["bag"]) for node in doc["nodes"]})
    for edge in doc["edges"]:
        if td.side(edge["a"], edge["b"]) != from_ids(edge["separation"]):
            raise DomainError(f"separation of edge ({edge['a']}, {edge['b']}) does not match the bags")
    return attach_tangles(td, ds, doc["order"])


def directed_from_json(oracle: ConnectivityOracle, doc: dict, ds: TangleDataStructure) -> DirectedTreeDecomposition:
    _check_header(doc, oracle)
    parent = {edge["child"]: edge["parent"] for edge in doc["edges"]}
    cones = {node["id"]: from_ids(node["cone"]) for node in doc["nodes"]}
    tau = {node["tangleIndex"]: node["id"] for node in doc["nodes"]}
    tangles = {index: ds.tangle(index) for index in tau}
    return DirectedTreeDecomposition(oracle, doc["root"], parent, cones, tau, tangles, doc["order"])


def verify_document(oracle: ConnectivityOracle, doc: dict, ds: Optional[TangleDataStructure] = None) -> VerificationReport:
    """Verification report for a decomposition document against an instance."""
    order = doc.get("order")
    if not isinstance(order, int):
        raise DomainError("document has no order")
    ds = ds if ds is not None and ds.k >= order else TangleDataStructure.build(oracle, order)
    kind = doc.get("format")
    if kind == DIRECTED:
        return verify_directed_decomposition(directed_from_json(oracle, doc, ds))
    if kind != UNDIRECTED:
        raise DomainError(f"unknown document format {kind!r}")
    try:
        ttd = decomposition_from_json(oracle, doc, ds)
    except TanglesError as e:
        return VerificationReport(violations=[f"document does not describe a tangle decomposition: {e}"])
    report = verify_tangle_decomposition(ttd)
    tangle_at = ttd.tangle_at
    for node in doc["nodes"]:
        if node["kind"] != ttd.kind(node["id"]):
            report.violations.append(f"node {node['id']} is listed as {node['kind']} but is a {ttd.kind(node['id'])}")
        elif node["kind"] == "tangle" and node.get("tangleOrder") != ttd.tangles[tangle_at[node["id"]]].order:
            report.violations.append(f"node {node['id']} lists the wrong tangle order")
    return report


# SECTION: post-passes

def prune_empty_bags(td: TreeDecomposition) -> TreeDecomposition:
    """
    Merges every node with an empty bag into its lowest-numbered neighbour.
    The result depends on node numbering and is not canonical.
    """
    tree = td.tree.copy()
    bags = dict(td.bags)
    for node in sorted(td.tree.nodes):
        if bags.get(node) or node not in tree or tree.number_of_nodes() == 1:
            continue
        keep = min(tree.neighbors(node))
        tree = nx.contracted_nodes(tree, keep, node, self_loops=False)
        del bags[node]
    plain = nx.Graph()
    plain.add_nodes_from(tree.nodes)
    plain.add_edges_from(tree.edges)
    return TreeDecomposition(td.oracle, plain, bags)


def graph_tree_decomposition(G: nx.Graph, edges: Sequence[Tuple], td: TreeDecomposition) -> nx.Graph:
    """
    For an edge-boundary instance: the tree decomposition of G whose bag at
    a node holds the ends of the edges in its bag and the boundary vertices
    of its adjacent separations.
    """
    edges = list(edges)

    def ends(x: Subset):
        out = set()
        for i in members(x):
            out.update(edges[i])
        return out

    out = nx.Graph()
    for node in td.tree.nodes:
        vertices = ends(td.bags[node])
        for other in td.tree.neighbors(node):
            x = td.side(node, other)
            vertices |= ends(x) & ends(td.oracle.full & ~x)
        out.add_node(node, bag=frozenset(vertices))
    out.add_edges_from(td.tree.edges)
    return out


__all__ = [
    "json_text", "decomposition_to_json", "directed_to_json", "decomposition_to_dot", "directed_to_dot",
    "decomposition_from_json", "directed_from_json", "verify_document", "prune_empty_bags",
    "graph_tree_decomposition",
]
