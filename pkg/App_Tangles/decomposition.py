"""
Tree decompositions that display the tangles of a connectivity function.

The canonical decomposition is built order by order. Around each node that
carries a tangle of order k the ground set is contracted, the extensions of
that tangle to order k + 1 are separated by a nested family computed on the
contraction, and the expanded family joins the separations found so far. A
nested family closed under complementation determines its tree uniquely,
which is what keeps the whole construction free of arbitrary choices.
"""

import logging
from dataclasses import dataclass, field
from itertools import permutations
from typing import Dict, Iterable, List, Optional, Set

import networkx as nx
import numpy as np

from . connectivity import ConnectivityOracle, GroundSet
from . exceptions import DomainError, IntegrityError, TanglesError
from . subsets import Subset, members, minimal_of
from . tangle_ds import TangleDataStructure
from . tangles import (
    ExplicitTangle, TangleLike, leftmost_tangle_separation, min_separation_order,
    separation_table, tangle_set_separation,
)

logger = logging.getLogger(__name__)


# SECTION: nested families and their trees

def crosses(x: Subset, y: Subset, full: Subset) -> bool:
    return bool(x & y) and bool(x & ~y & full) and bool(~x & y & full) and bool(~x & ~y & full)


def check_nested(family: Iterable[Subset], n: int) -> bool:
    full = (1 << n) - 1
    items = sorted(set(int(x) for x in family))
    return not any(crosses(x, y, full) for i, x in enumerate(items) for y in items[i + 1:])


class TreeDecomposition:
    """A tree with pairwise disjoint bags covering the ground set."""

    def __init__(self, oracle: ConnectivityOracle, tree: nx.Graph, bags: Dict[int, Subset]):
        self.oracle = oracle
        self.tree = tree
        self.bags = dict(bags)
        self._sides: Dict = {}
        covered = 0
        for node in sorted(tree.nodes):
            bag = self.bags[node]
            if bag & covered:
                raise DomainError(f"bag of node {node} overlaps an earlier bag")
            covered |= bag
        if covered != oracle.full:
            raise DomainError("bags do not cover the ground set")
        if not nx.is_tree(tree):
            raise DomainError("decomposition graph is not a tree")

    def component(self, s, t) -> Set[int]:
        """Nodes on t's side of the edge st."""
        key = (s, t)
        if key not in self._sides:
            if not self.tree.has_edge(s, t):
                raise DomainError(f"{s} and {t} are not adjacent")
            cut = self.tree.copy()
            cut.remove_edge(s, t)
            self._sides[key] = nx.node_connected_component(cut, t)
        return self._sides[key]

    def side(self, s, t) -> Subset:
        x = 0
        for node in self.component(s, t):
            x |= self.bags[node]
        return x

    def oriented_edges(self):
        for s, t in sorted(self.tree.edges):
            yield s, t
            yield t, s

    def separations(self) -> Set[Subset]:
        return {self.side(s, t) for s, t in self.oriented_edges()}

    def adhesion(self) -> int:
        return max((self.oracle.evaluate(self.side(s, t)) for s, t in self.tree.edges), default=0)

    def __repr__(self):
        return f"{type(self).__name__}(nodes={self.tree.number_of_nodes()}, edges={self.tree.number_of_edges()})"


def nested_to_tree(oracle: ConnectivityOracle, family: Iterable[Subset]) -> TreeDecomposition:
    """
    The tree decomposition whose separations are exactly `family`.

    Each set X is drawn at the node whose neighbourhood is the complement of
    X together with the maximal members of the family strictly inside X;
    the edge for {X, complement X} joins the nodes drawn for its two sides.
    """
    full = oracle.full
    items = sorted(set(int(x) for x in family))
    present = set(items)
    if 0 in present or full in present:
        raise DomainError("a nested family may not contain the empty or the full set")
    if any(full ^ x not in present for x in items):
        raise DomainError("family is not closed under complementation")
    if not check_nested(items, oracle.n):
        raise DomainError("family is not nested")
    tree = nx.Graph()
    if not items:
        tree.add_node(0)
        return TreeDecomposition(oracle, tree, {0: full})

    star_of = {}
    for x in items:
        inside = [y for y in items if y != x and y & ~x == 0]
        star_of[x] = frozenset([full ^ x] + _maximal_of(inside))
    stars = set(star_of.values())

    def bag(star):
        covered = 0
        for y in star:
            covered |= y
        return full & ~covered

    def sort_key(star):
        return members(bag(star)), sorted(members(y) for y in star)

    ids = {star: i for i, star in enumerate(sorted(stars, key=sort_key))}
    tree.add_nodes_from(range(len(ids)))
    for x in items:
        if x < full ^ x:
            tree.add_edge(ids[star_of[x]], ids[star_of[full ^ x]])
    return TreeDecomposition(oracle, tree, {i: bag(star) for star, i in ids.items()})


def _maximal_of(family: List[Subset]) -> List[Subset]:
    """Inclusion-maximal members of a family."""
    items = sorted(set(family), key=lambda x: (-x.bit_count(), x))
    kept: List[Subset] = []
    for x in items:
        if not any(x & ~y == 0 for y in kept):
            kept.append(x)
    return sorted(kept)


class TangleTreeDecomposition(TreeDecomposition):
    """
    A tree decomposition with `tau` mapping tangle indices to the nodes that
    carry them; nodes without a tangle are hubs.
    """

    def __init__(self, oracle, tree, bags, tau: Dict[int, int], tangles: Dict[int, TangleLike],
                 order: int, ds: Optional[TangleDataStructure] = None):
        super().__init__(oracle, tree, bags)
        self.tau = dict(tau)
        self.tangles = dict(tangles)
        self.order = order
        self.ds = ds

    @property
    def tangle_at(self) -> Dict[int, int]:
        return {node: index for index, node in self.tau.items()}

    def kind(self, node) -> str:
        return "tangle" if node in self.tangle_at else "hub"


def _member(tangle: TangleLike, x: Subset) -> bool:
    return tangle.oracle.evaluate(x) < tangle.order and tangle.contains(x)


def assign_tangle_nodes(td: TreeDecomposition, tangles: Dict[int, TangleLike]) -> Dict[int, int]:
    """
    The node of each tangle: every edge of order below the tangle's order
    is oriented towards the side in the tangle, and exactly one node may
    remain that no edge points away from.
    """
    tau = {}
    for index in sorted(tangles):
        tangle = tangles[index]
        alive = set(td.tree.nodes)
        for s, t in sorted(td.tree.edges):
            x = td.side(s, t)
            if td.oracle.evaluate(x) >= tangle.order:
                continue
            if tangle.contains(x):
                alive -= td.component(t, s)
            else:
                alive -= td.component(s, t)
        if len(alive) != 1:
            raise DomainError(f"tangle {index} points at {len(alive)} nodes instead of one")
        tau[index] = alive.pop()
    if len(set(tau.values())) != len(tau):
        raise DomainError("two tangles point at the same node")
    return tau


# SECTION: coherent families

def coherent_nested_family(ds: TangleDataStructure, indices: Iterable[int]) -> Set[Subset]:
    """
    Nested family separating tangles of one order that share their
    truncation one order below. Each round adds every inclusion-minimal
    leftmost separation among the tangles not yet separated.
    """
    indices = sorted(set(indices))
    if len(indices) <= 1:
        return set()
    orders = {ds.order(i) for i in indices}
    if len(orders) != 1:
        raise DomainError(f"tangles {indices} do not share an order")
    order = orders.pop()
    if len({ds.truncation(i, order - 1) for i in indices}) != 1:
        raise DomainError(f"tangles {indices} do not share their truncation to order {order - 1}")

    cache: Dict = {}

    def z(i, j):
        if (i, j) not in cache:
            cache[(i, j)] = ds.separation(i, j)
        return cache[(i, j)]

    family: Set[Subset] = set()
    remaining = indices
    rounds = 0
    while len(remaining) >= 2:
        rounds += 1
        candidates = {z(i, j) for i in remaining for j in remaining if i != j}
        family |= set(minimal_of(candidates))
        separated = {i for i in indices if any(z(i, j) in family for j in indices if j != i)}
        left = [i for i in indices if i not in separated]
        if len(left) >= len(remaining):
            raise IntegrityError(f"round {rounds} separated none of the tangles {remaining}")
        remaining = left
    full = ds.oracle.full
    return family | {full ^ x for x in family}


# SECTION: contractions

class Contraction:
    """
    The ground set seen from one node: its bag plus one fresh element per
    neighbouring subtree. Fresh elements follow the bag elements and are
    ordered by the sets they stand for.
    """

    def __init__(self, oracle: ConnectivityOracle, bag: Subset, far_sides: Iterable[Subset]):
        self.source = oracle
        self.bag = bag
        self.far = sorted((int(x) for x in far_sides), key=members)
        bag_ids = members(bag)
        self.images = [1 << b for b in bag_ids] + self.far
        self.is_identity = not self.far and bag == oracle.full
        self._expansions = None
        if self.is_identity:
            self.oracle = oracle
            return
        labels = [oracle.ground.labels[b] for b in bag_ids]
        labels += ["c{" + ",".join(oracle.ground.names(x)) + "}" for x in self.far]
        self.oracle = ConnectivityOracle(
            GroundSet(len(self.images), tuple(labels)),
            lambda x: oracle.evaluate(self.expand(x)),
            name=f"{oracle.name}/contracted",
            vector_fn=lambda xs: oracle.table()[self.expansions()[xs]],
        )

    @property
    def n(self) -> int:
        return len(self.images)

    def expand(self, x: Subset) -> Subset:
        out = 0
        for i in members(int(x)):
            out |= self.images[i]
        return out

    def expansions(self) -> np.ndarray:
        """expand() of every subset of the contracted ground set."""
        if self._expansions is None:
            table = np.zeros(1, dtype=np.int64)
            for image in self.images:
                table = np.concatenate([table, table | image])
            table.setflags(write=False)
            self._expansions = table
        return self._expansions

    def contract(self, y: Subset) -> Subset:
        """Inverse of expand for unions of bag elements and whole far sides."""
        x = 0
        rest = int(y)
        for i, image in enumerate(self.images):
            if image & ~rest == 0:
                x |= 1 << i
                rest &= ~image
        if rest:
            raise DomainError(f"{y:#x} is not a union of contracted parts")
        return x


def contract_at(oracle: ConnectivityOracle, td: TreeDecomposition, node) -> Contraction:
    return Contraction(oracle, td.bags[node], [td.side(node, u) for u in td.tree.neighbors(node)])


def project_tangle(tangle: TangleLike, contraction: Contraction) -> Optional[ExplicitTangle]:
    """The tangle on the contracted ground set, None when a far side is a member."""
    if tangle.order == 0:
        return ExplicitTangle(0, [], contraction.oracle)
    for x in contraction.far:
        if _member(tangle, x):
            return None
    table = tangle.member_table()[contraction.expansions()]
    return ExplicitTangle(tangle.order, table, contraction.oracle)


# SECTION: canonical decompositions

def attach_tangles(td: TreeDecomposition, ds: TangleDataStructure, order: int) -> TangleTreeDecomposition:
    tangles = {i: ds.tangle(i) for i in ds.maximal_indices(order)}
    tau = assign_tangle_nodes(td, tangles)
    return TangleTreeDecomposition(td.oracle, td.tree, td.bags, tau, tangles, order, ds)


def _separations_at(ttd: TangleTreeDecomposition, node, extensions: List[int], order: int,
                    engine: Optional[str]) -> Set[Subset]:
    ds = ttd.ds
    contraction = contract_at(ttd.oracle, ttd, node)
    local_ds = ds if contraction.is_identity else TangleDataStructure.build(contraction.oracle, order, engine)
    local = []
    for j in extensions:
        projected = project_tangle(ds.tangle(j), contraction)
        if projected is None:
            raise IntegrityError(f"tangle {j} does not project to node {node}")
        local.append(local_ds.find(order, projected.contains))
    return {contraction.expand(x) for x in coherent_nested_family(local_ds, local)}


def canonical_decomposition(oracle: ConnectivityOracle, order: int, ds: Optional[TangleDataStructure] = None,
                            engine: Optional[str] = None) -> TangleTreeDecomposition:
    """Canonical tree decomposition for all tangles of order <= `order`."""
    if ds is None or ds.k < order:
        ds = TangleDataStructure.build(oracle, order, engine)
    family: Set[Subset] = set()
    td = nested_to_tree(oracle, family)
    for k in range(order):
        ttd = attach_tangles(td, ds, k)
        added: Set[Subset] = set()
        for index, node in sorted(ttd.tau.items()):
            if ds.order(index) != k:
                continue
            extensions = [j for j in ds.indices(k + 1) if ds.truncation(j, k) == index]
            if len(extensions) >= 2:
                added |= _separations_at(ttd, node, extensions, k + 1, engine)
        if added - family:
            family |= added
            td = nested_to_tree(oracle, family)
            logger.debug(f"{oracle.name}: {len(family)} separations after order {k + 1}")
    return attach_tangles(td, ds, order)


def _maximal_count(oracle: ConnectivityOracle, order: int, engine: Optional[str]) -> int:
    return len(TangleDataStructure.build(oracle, order, engine).maximal_indices(order))


def _singleton_star(td: TreeDecomposition) -> bool:
    tree = td.tree
    if tree.number_of_nodes() == 1:
        return True
    leaves = [v for v in tree.nodes if tree.degree(v) == 1]
    centres = [v for v in tree.nodes if tree.degree(v) > 1]
    return len(centres) <= 1 and all(td.bags[v].bit_count() == 1 for v in leaves)


def single_tangle_nodes(oracle: ConnectivityOracle, td: TreeDecomposition, order: int,
                        engine: Optional[str] = None) -> List[int]:
    """Nodes whose contraction still has more than one maximal tangle of order <= `order`."""
    out = []
    for node in sorted(td.tree.nodes):
        contraction = contract_at(oracle, td, node)
        if _maximal_count(contraction.oracle, order, engine) > 1:
            out.append(node)
    return out


def refine_single_tangle(oracle: ConnectivityOracle, order: int, engine: Optional[str] = None) -> TreeDecomposition:
    """
    Refines the canonical decomposition until every node's contraction has
    exactly one maximal tangle of order <= `order`.
    """
    ttd = canonical_decomposition(oracle, order, engine=engine)
    if _singleton_star(ttd):
        return ttd
    family = ttd.separations()
    for node in sorted(ttd.tree.nodes):
        contraction = contract_at(oracle, ttd, node)
        local_ds = ttd.ds if contraction.is_identity else TangleDataStructure.build(contraction.oracle, order, engine)
        if len(local_ds.maximal_indices(order)) <= 1:
            continue
        if contraction.n >= oracle.n:
            raise IntegrityError(f"contraction at node {node} does not shrink the ground set of {oracle.n}")
        inner = refine_single_tangle(contraction.oracle, order, engine)
        family |= {contraction.expand(x) for x in inner.separations()}
    if family == ttd.separations():
        return ttd
    return nested_to_tree(oracle, family)


# SECTION: directed decompositions

class DirectedTreeDecomposition:
    """
    A rooted tree with a cone per node; the root cone is the ground set and
    a node's bag is its cone minus the cones of its children.
    """

    def __init__(self, oracle: ConnectivityOracle, root: int, parent: Dict[int, int], cones: Dict[int, Subset],
                 tau: Dict[int, int], tangles: Dict[int, TangleLike], order: int):
        self.oracle = oracle
        self.root = root
        self.cones = dict(cones)
        self.tau = dict(tau)
        self.tangles = dict(tangles)
        self.order = order
        self.tree = nx.DiGraph()
        self.tree.add_nodes_from(cones)
        self.tree.add_edges_from((p, c) for c, p in parent.items())

    @property
    def tangle_at(self) -> Dict[int, int]:
        return {node: index for index, node in self.tau.items()}

    def children(self, node) -> List[int]:
        return sorted(self.tree.successors(node))

    def bag(self, node) -> Subset:
        x = self.cones[node]
        for child in self.children(node):
            x &= ~self.cones[child]
        return x

    @property
    def bags(self) -> Dict[int, Subset]:
        return {node: self.bag(node) for node in self.tree.nodes}

    def is_above(self, u, t) -> bool:
        """u is t or an ancestor of t."""
        return u == t or t in nx.descendants(self.tree, u)


def directed_decomposition(oracle: ConnectivityOracle, order: int, root_index: int,
                           ttd: Optional[TangleTreeDecomposition] = None,
                           ds: Optional[TangleDataStructure] = None) -> DirectedTreeDecomposition:
    """
    Directed decomposition rooted at the tangle `root_index`. Cones start as
    leftmost minimum separations inside the subtrees of the canonical
    decomposition; nodes whose cone escapes the parent's cone are moved up,
    deepest first, until every cone lies inside its parent's.
    """
    ttd = ttd or canonical_decomposition(oracle, order, ds=ds)
    if root_index not in ttd.tau:
        raise DomainError(f"tangle {root_index} is not maximal among the tangles of order <= {order}")
    full = oracle.full
    root = ttd.tau[root_index]
    tangle_at = ttd.tangle_at
    undirected_parent = dict(nx.bfs_predecessors(ttd.tree, root))

    parent: Dict[int, int] = {}
    cones = {root: full}
    for node in sorted(tangle_at):
        if node == root:
            continue
        above = undirected_parent[node]
        while above not in tangle_at:
            above = undirected_parent[above]
        parent[node] = above
        cone = tangle_set_separation(ttd.tangles[tangle_at[node]], ttd.side(undirected_parent[node], node))
        if cone is None:
            raise IntegrityError(f"tangle at node {node} has no member inside its subtree")
        cones[node] = cone

    def ancestors(node):
        chain = []
        while node in parent:
            node = parent[node]
            chain.append(node)
        return chain

    rounds = 0
    while True:
        bad = {u for u in parent if cones[u] & ~cones[parent[u]]}
        if not bad:
            break
        rounds += 1
        shadowed = {a for u in bad for a in ancestors(u) if a in bad}
        moves = {}
        for u in sorted(bad - shadowed):
            moves[u] = next(a for a in ancestors(u) if cones[u] & ~cones[a] == 0)
        parent.update(moves)
    logger.debug(f"directed decomposition of {oracle.name} settled after {rounds} rounds")
    tau = {index: node for node, index in tangle_at.items()}
    return DirectedTreeDecomposition(oracle, root, parent, cones, tau, ttd.tangles, order)


# SECTION: verification

@dataclass
class VerificationReport:
    violations: List[str] = field(default_factory=list)
    checked: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {"ok": self.ok, "violations": list(self.violations), "checked": list(self.checked)}


def _is_minimum(ttd, first: int, second: int, z: Subset, minimum: Dict) -> bool:
    a, b = ttd.tangles[first], ttd.tangles[second]
    return (ttd.oracle.evaluate(z) == minimum[(first, second)]
            and _member(a, z) and _member(b, ttd.oracle.full ^ z))


def verify_tangle_decomposition(ttd: TangleTreeDecomposition) -> VerificationReport:
    """Checks the tangle decomposition conditions one by one and lists every failure."""
    report = VerificationReport()
    tree = ttd.tree
    indices = sorted(ttd.tau)

    report.checked.append("injective")
    if len(set(ttd.tau.values())) != len(ttd.tau):
        report.violations.append("two tangles share a node")

    minimum = {}
    report.checked.append("incomparable")
    for a, b in permutations(indices, 2):
        m = min_separation_order(ttd.tangles[a], ttd.tangles[b])
        if m is None:
            report.violations.append(f"tangles {a} and {b} are comparable")
        else:
            minimum[(a, b)] = m

    paths = {(a, b): nx.shortest_path(tree, ttd.tau[a], ttd.tau[b]) for a, b in minimum}

    report.checked.append("TD1")
    for (a, b), path in paths.items():
        if not any(_is_minimum(ttd, a, b, ttd.side(t2, t1), minimum) for t1, t2 in zip(path, path[1:])):
            report.violations.append(f"TD1: no edge between tangles {a} and {b} is a minimum separation")

    report.checked.append("TD2")
    for s, t in ttd.oriented_edges():
        z = ttd.side(t, s)
        witnessed = False
        for (a, b), path in paths.items():
            steps = list(zip(path, path[1:]))
            if (s, t) in steps and _is_minimum(ttd, a, b, z, minimum):
                witnessed = True
                break
        if not witnessed:
            report.violations.append(f"TD2: edge ({s}, {t}) separates no pair of tangles minimally")

    report.checked.append("TD3")
    for a in indices:
        node = ttd.tau[a]
        for other in sorted(tree.neighbors(node)):
            if not _member(ttd.tangles[a], ttd.side(other, node)):
                report.violations.append(f"TD3: side of node {node} towards {other} is not in tangle {a}")

    report.checked.append("leaves")
    if indices:
        for leaf in sorted(v for v in tree.nodes if tree.degree(v) <= 1):
            if leaf not in ttd.tangle_at:
                report.violations.append(f"leaf {leaf} carries no tangle")
    if (tree.number_of_edges() == 0) != (len(indices) <= 1):
        report.violations.append("the tree has edges exactly when there are two or more tangles")

    report.checked.append("assignment")
    try:
        derived = assign_tangle_nodes(ttd, ttd.tangles)
        if derived != ttd.tau:
            report.violations.append(f"tangle nodes re-derive to {derived}, not {ttd.tau}")
    except TanglesError as e:
        report.violations.append(f"tangle nodes cannot be re-derived: {e}")

    if not report.ok:
        logger.info(f"tangle decomposition check found {len(report.violations)} violations")
    return report


def verify_directed_decomposition(dtd: DirectedTreeDecomposition) -> VerificationReport:
    report = VerificationReport()
    oracle = dtd.oracle
    full = oracle.full
    t_table = oracle.table()

    report.checked.append("cones")
    if dtd.cones[dtd.root] != full:
        report.violations.append("root cone is not the ground set")
    for p, c in sorted(dtd.tree.edges):
        if dtd.cones[c] & ~dtd.cones[p]:
            report.violations.append(f"cone of {c} is not inside the cone of its parent {p}")
    for node in sorted(dtd.tree.nodes):
        kids = dtd.children(node)
        for i, a in enumerate(kids):
            for b in kids[i + 1:]:
                if dtd.cones[a] & dtd.cones[b]:
                    report.violations.append(f"sibling cones of {a} and {b} overlap")
    covered = 0
    for node, bag in sorted(dtd.bags.items()):
        if covered & bag:
            report.violations.append(f"bag of {node} overlaps another bag")
        covered |= bag
    if covered != full:
        report.violations.append("bags do not cover the ground set")

    tangle_at = dtd.tangle_at
    nodes = sorted(dtd.tree.nodes)
    report.checked.append("DTD1")
    for t in nodes:
        for u in nodes:
            if dtd.is_above(u, t):
                continue
            feasible = separation_table(dtd.tangles[tangle_at[u]], dtd.tangles[tangle_at[t]])
            if not feasible.any():
                report.violations.append(f"DTD1: tangles at {u} and {t} are not separated")
                continue
            best = t_table[feasible].min()
            idx = np.flatnonzero(feasible & (t_table == best))
            if not np.any((idx & dtd.cones[u]) == dtd.cones[u]):
                report.violations.append(f"DTD1: no minimum separation from {u} to {t} contains the cone of {u}")

    report.checked.append("DTD2")
    for t in nodes:
        if t == dtd.root:
            continue
        ok = any(
            leftmost_tangle_separation(dtd.tangles[tangle_at[t]], dtd.tangles[tangle_at[u]]) == dtd.cones[t]
            for u in nodes if not dtd.is_above(t, u)
        )
        if not ok:
            report.violations.append(f"DTD2: cone of {t} is no leftmost minimum separation")
    return report


__all__ = [
    "crosses", "check_nested", "TreeDecomposition", "nested_to_tree", "TangleTreeDecomposition",
    "assign_tangle_nodes", "coherent_nested_family", "Contraction", "contract_at", "project_tangle",
    "attach_tangles", "canonical_decomposition", "single_tangle_nodes", "refine_single_tangle",
    "DirectedTreeDecomposition", "directed_decomposition", "VerificationReport",
    "verify_tangle_decomposition", "verify_directed_decomposition",
]
