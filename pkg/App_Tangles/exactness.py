"""
Partial decompositions and the rewrite that makes them exact.

A partial decomposition is a tree whose nodes have degree 1 or 3 together
with a set xi[(s, t)] for each oriented edge, the part of the ground set
that s sees in the direction of t. Opposite orientations of an edge carry
complementary sets and the three sets leaving an inner node cover the
ground set. It is exact when those three sets are also disjoint.
"""

import logging
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from . connectivity import ConnectivityOracle
from . exceptions import DomainError, IntegrityError
from . subsets import Subset

logger = logging.getLogger(__name__)

MAX_REWRITES = 100000

Edge = Tuple[int, int]


class PartialDecomposition:

    def __init__(self, oracle: ConnectivityOracle, tree: nx.Graph, xi: Dict[Edge, Subset]):
        self.oracle = oracle
        self.tree = tree
        self.xi = dict(xi)
        for s, t in tree.edges:
            if (s, t) not in self.xi or (t, s) not in self.xi:
                raise DomainError(f"edge ({s}, {t}) is not labelled in both directions")

    @classmethod
    def from_leaf_sets(cls, oracle: ConnectivityOracle, tree: nx.Graph,
                       leaf_sets: Dict[int, Subset]) -> "PartialDecomposition":
        """
        Labels every edge by the union of the leaf sets behind it, seen from
        the first edge; the opposite orientation gets the complement.
        """
        full = oracle.full
        covered = 0
        for x in leaf_sets.values():
            covered |= x
        if covered != full:
            raise DomainError("leaf sets do not cover the ground set")
        a, b = min(tuple(sorted(e)) for e in tree.edges)
        below: Dict[int, Subset] = {}

        def collect(node, parent):
            x = leaf_sets.get(node, 0) if tree.degree(node) == 1 else 0
            for child in tree.neighbors(node):
                if child != parent:
                    x |= collect(child, node)
            below[node] = x
            return x

        collect(a, b)
        collect(b, a)
        xi = {(a, b): below[b], (b, a): full ^ below[b]}
        cut = tree.copy()
        cut.remove_edge(a, b)
        for top in (a, b):
            for parent, child in nx.bfs_edges(cut, top):
                xi[(parent, child)] = below[child]
                xi[(child, parent)] = full ^ below[child]
        return cls(oracle, tree, xi)

    def leaf_sets(self) -> Dict[int, Subset]:
        return {v: self.xi[(next(iter(self.tree.neighbors(v))), v)]
                for v in sorted(self.tree.nodes) if self.tree.degree(v) == 1}

    def outgoing(self, node) -> List[Subset]:
        return [self.xi[(node, t)] for t in sorted(self.tree.neighbors(node))]

    def is_valid(self) -> bool:
        full = self.oracle.full
        for (s, t), x in self.xi.items():
            if self.xi[(t, s)] != full ^ x:
                return False
        for node in self.tree.nodes:
            degree = self.tree.degree(node)
            if degree not in (1, 3):
                return False
            if degree == 3:
                covered = 0
                for x in self.outgoing(node):
                    covered |= x
                if covered != full:
                    return False
        return nx.is_tree(self.tree)

    def is_exact(self) -> bool:
        if not self.is_valid():
            return False
        for node in self.tree.nodes:
            sides = self.outgoing(node)
            if len(sides) == 3 and (sides[0] & sides[1] or sides[0] & sides[2] or sides[1] & sides[2]):
                return False
        return True

    def width(self) -> int:
        return max((self.oracle.evaluate(x) for x in self.xi.values()), default=0)

    def edge_orders(self) -> Dict[Edge, int]:
        return {edge: self.oracle.evaluate(x) for edge, x in self.xi.items()}


def width(pd: PartialDecomposition) -> int:
    return pd.width()


def exactify(pd: PartialDecomposition) -> PartialDecomposition:
    """
    An exact partial decomposition on the same tree whose edge orders are no
    larger and whose leaf sets are subsets of the old ones.

    The first edge is subdivided by a root carrying the whole ground set, so
    every other node sees a parent set X and child sets Y1, Y2 with X inside
    their union. Nodes where X is strictly smaller than Y1 | Y2, or where
    the children overlap, are rewritten until none is left.
    """
    if not pd.is_valid():
        raise DomainError("partial decomposition is not valid")
    kappa = pd.oracle.evaluate
    full = pd.oracle.full
    tree = pd.tree
    if tree.number_of_edges() == 0:
        return pd
    a, b = min(tuple(sorted(e)) for e in tree.edges)
    root = max(tree.nodes) + 1
    children: Dict[int, List[int]] = {root: [a, b]}
    sets = {root: full, a: pd.xi[(b, a)], b: pd.xi[(a, b)]}
    order = [root]
    cut = tree.copy()
    cut.remove_edge(a, b)
    for top in (a, b):
        children[top] = []
        order.append(top)
        for parent, child in nx.bfs_edges(cut, top):
            children.setdefault(parent, [])
            children.setdefault(child, [])
            children[parent].append(child)
            sets[child] = pd.xi[(parent, child)]
            order.append(child)

    rewrites = 0
    while True:
        target = None
        for node in order:
            kids = children.get(node, [])
            if len(kids) == 2:
                y1, y2 = sets[kids[0]], sets[kids[1]]
                if sets[node] != y1 | y2 or y1 & y2:
                    target = node
                    break
        if target is None:
            break
        rewrites += 1
        if rewrites > MAX_REWRITES:
            raise IntegrityError("exactness rewrite does not terminate")
        first, second = children[target]
        x, y1, y2 = sets[target], sets[first], sets[second]
        if x != y1 | y2:
            growing = [c for c in (first, second) if kappa(x & sets[c]) > kappa(sets[c])]
            if not growing:
                sets[first], sets[second] = x & y1, x & y2
            else:
                sets[target] = x | sets[growing[0]]
        elif kappa(y1 & ~y2) <= kappa(y1):
            sets[first] = y1 & ~y2
        else:
            sets[second] = y2 & ~y1
    logger.debug(f"exactness rewrite finished after {rewrites} steps")

    xi = {}
    for parent, kids in children.items():
        if parent == root:
            continue
        for child in kids:
            xi[(parent, child)] = sets[child]
            xi[(child, parent)] = full ^ sets[child]
    xi[(a, b)] = sets[b]
    xi[(b, a)] = sets[a]
    return PartialDecomposition(pd.oracle, tree.copy(), xi)


def random_cubic_tree(leaves: int, rng: np.random.Generator) -> nx.Graph:
    """A tree with `leaves` leaves and inner nodes of degree 3; leaves are 0..leaves-1."""
    if leaves < 2:
        raise DomainError("a cubic tree needs at least two leaves")
    tree = nx.Graph()
    if leaves == 2:
        tree.add_edge(0, 1)
        return tree
    hub = leaves
    tree.add_edges_from([(0, hub), (1, hub), (2, hub)])
    fresh = hub + 1
    for leaf in range(3, leaves):
        edges = sorted(tuple(sorted(e)) for e in tree.edges)
        u, v = edges[int(rng.integers(len(edges)))]
        tree.remove_edge(u, v)
        tree.add_edges_from([(u, fresh), (fresh, v), (leaf, fresh)])
        fresh += 1
    return tree


def random_partial_decomposition(oracle: ConnectivityOracle, rng: np.random.Generator,
                                 leaves: Optional[int] = None) -> PartialDecomposition:
    """
    A valid, usually non-exact partial decomposition: a random partition
    into leaf sets, some leaf sets enlarged, then a few edge sets trimmed
    where another set at the same node still covers the trimmed elements.
    """
    n = oracle.n
    if n < 2:
        raise DomainError("need at least two elements")
    leaves = int(rng.integers(2, min(n, 6) + 1)) if leaves is None else leaves
    tree = random_cubic_tree(leaves, rng)
    cuts = np.sort(rng.choice(np.arange(1, n), size=leaves - 1, replace=False))
    parts = np.split(rng.permutation(n), cuts)
    leaf_sets = {}
    for leaf, part in enumerate(parts):
        leaf_sets[leaf] = sum(1 << int(e) for e in part)
    for leaf in rng.choice(leaves, size=int(rng.integers(1, leaves + 1)), replace=False):
        leaf_sets[int(leaf)] |= int(rng.integers(0, oracle.full + 1))
    pd = PartialDecomposition.from_leaf_sets(oracle, tree, leaf_sets)

    full = oracle.full
    xi = dict(pd.xi)
    for _ in range(int(rng.integers(0, 4))):
        edges = sorted(xi)
        s, t = edges[int(rng.integers(len(edges)))]
        others = 0
        for u in tree.neighbors(s):
            if u != t:
                others |= xi[(s, u)]
        removable = xi[(s, t)] & others
        if tree.degree(s) == 3 and tree.degree(t) == 3 and removable:
            xi[(s, t)] &= ~removable
            xi[(t, s)] = full ^ xi[(s, t)]
    return PartialDecomposition(oracle, tree, xi)


__all__ = [
    "PartialDecomposition", "width", "exactify", "random_cubic_tree", "random_partial_decomposition",
]
