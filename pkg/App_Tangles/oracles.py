"""
Slow reference answers used to cross-check the fast algorithms: tangles by
backtracking, branch width over every cubic tree, leftmost separations by
scanning a feasibility table, plus random instances and harnesses that
compare the two sides.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from . conf import setting
from . connectivity import ConnectivityOracle, cut_rank_fn, edge_boundary_fn, matroid_connectivity_fn
from . decomposition import (
    DirectedTreeDecomposition, TreeDecomposition, canonical_decomposition, directed_decomposition,
)
from . exceptions import DomainError, IntegrityError, SizeGuardError
from . subsets import Subset, all_subsets, box, members, minimal_members, singletons, subset_any, up_closure
from . tangle_ds import TangleDataStructure
from . tangles import ExplicitTangle, TangleLike, max_tangle_order

logger = logging.getLogger(__name__)


# SECTION: tangles by backtracking

def brute_force_tangles(oracle: ConnectivityOracle, k: int) -> List[ExplicitTangle]:
    """
    Every tangle of order k, sorted by key. Pairs {X, complement X} of order
    below k are decided one by one, lowest order first; after each choice
    the members are closed upwards and every pairwise intersection of
    order below k is forced in.
    """
    limit = setting('TANGLES_BRUTE_FORCE_LIMIT')
    if oracle.n > limit:
        raise SizeGuardError("brute-force tangle search", limit, oracle.n)
    if k <= 0:
        return [ExplicitTangle(0, [], oracle)]
    n, full = oracle.n, oracle.full
    t = oracle.table()
    idx = all_subsets(n)
    allowed = t < k
    pairs = [int(x) for x in idx if allowed[x] and x < full ^ x]
    pairs.sort(key=lambda x: (int(t[x]), min(x.bit_count(), (full ^ x).bit_count()), x))
    single = np.zeros(full + 1, dtype=bool)
    single[singletons(n)] = True
    found: List[ExplicitTangle] = []

    def propagate(inside: np.ndarray) -> Optional[np.ndarray]:
        while True:
            inside = up_closure(inside, n) & allowed
            if np.any(inside & inside[full ^ idx]) or np.any(inside & single):
                return None
            below = subset_any(inside, n)
            mins = minimal_members(inside, n)
            meets = np.bitwise_and.outer(mins, mins).ravel()
            if np.any(below[full ^ meets]):
                return None
            forced = inside.copy()
            forced[meets[allowed[meets]]] = True
            if np.array_equal(forced, inside):
                return inside
            inside = forced

    def search(inside: np.ndarray) -> None:
        inside = propagate(inside)
        if inside is None:
            return
        open_pair = next((x for x in pairs if not inside[x] and not inside[full ^ x]), None)
        if open_pair is None:
            found.append(ExplicitTangle(k, inside, oracle))
            return
        for choice in (open_pair, full ^ open_pair):
            trial = inside.copy()
            trial[choice] = True
            search(trial)

    search(np.zeros(full + 1, dtype=bool))
    found.sort(key=lambda tangle: sorted(tangle.key()[1]))
    logger.debug(f"brute force found {len(found)} tangles of order {k} for {oracle.name}")
    return found


# SECTION: branch width over all cubic trees

def _tree_width(oracle: ConnectivityOracle, edges: List[Tuple[int, int]], n: int) -> int:
    adjacency: Dict[int, List[int]] = {}
    for u, v in edges:
        adjacency.setdefault(u, []).append(v)
        adjacency.setdefault(v, []).append(u)

    def behind(start: int, skip: int) -> Subset:
        x, stack, seen = 0, [start], {skip, start}
        while stack:
            node = stack.pop()
            if node < n:
                x |= 1 << node
            for other in adjacency[node]:
                if other not in seen:
                    seen.add(other)
                    stack.append(other)
        return x

    return max(oracle.evaluate(behind(v, u)) for u, v in edges)


def brute_force_branch_width(oracle: ConnectivityOracle) -> int:
    """
    Minimum width over every cubic tree whose leaves are the elements,
    each tree built by inserting leaves into edges of the previous one.
    """
    limit = setting('TANGLES_BRANCH_WIDTH_LIMIT')
    n = oracle.n
    if n > limit:
        raise SizeGuardError("brute-force branch width", limit, n)
    if n == 0:
        raise DomainError("branch width of an empty ground set")
    if n == 1:
        return 0
    if n == 2:
        return oracle.evaluate(1)
    best = None

    def extend(edges: List[Tuple[int, int]], leaf: int, fresh: int) -> None:
        nonlocal best
        if leaf == n:
            width = _tree_width(oracle, edges, n)
            best = width if best is None else min(best, width)
            return
        for i, (u, v) in enumerate(edges):
            grown = edges[:i] + edges[i + 1:] + [(u, fresh), (fresh, v), (leaf, fresh)]
            extend(grown, leaf + 1, fresh + 1)

    hub = n
    extend([(0, hub), (1, hub), (2, hub)], 3, hub + 1)
    return best


# SECTION: leftmost separations by scanning

def box_constraint(oracle: ConnectivityOracle, lower: Subset, upper: Subset) -> np.ndarray:
    """Feasibility table of lower <= Z <= upper."""
    table = np.zeros(oracle.full + 1, dtype=bool)
    if lower & ~upper == 0:
        table[box(oracle.check_subset(lower), oracle.check_subset(upper))] = True
    return table


def base_constraint(oracle: ConnectivityOracle, b1: Subset, b2: Subset) -> np.ndarray:
    """Z containing b1 and disjoint from b2."""
    return box_constraint(oracle, b1, oracle.full & ~b2)


def tangle_pair_constraint(first: TangleLike, second: TangleLike) -> np.ndarray:
    """Z in the first tangle with its complement in the second."""
    oracle = first.oracle
    return first.member_table() & second.member_table()[oracle.full ^ all_subsets(oracle.n)]


def brute_force_leftmost_separation(oracle: ConnectivityOracle, feasible: np.ndarray) -> Optional[Subset]:
    """The inclusion-least feasible set of minimum order, None if nothing is feasible."""
    candidates = np.flatnonzero(feasible)
    if candidates.size == 0:
        return None
    values = np.array([oracle.evaluate(int(z)) for z in candidates])
    minimizers = [int(z) for z in candidates[values == values.min()]]
    meet = oracle.full
    for z in minimizers:
        meet &= z
    if meet not in minimizers:
        raise IntegrityError(f"minimum separations have no least element (meet {meet:#x})")
    return meet


# SECTION: random instances

def random_graph_instance(rng: np.random.Generator, vertices: Optional[int] = None, p: Optional[float] = None,
                          fn: str = "edge-boundary", max_edges: int = 8) -> ConnectivityOracle:
    vertices = vertices or int(rng.integers(3, 7))
    p = p or float(rng.choice([0.3, 0.5, 0.7]))
    G = nx.gnp_random_graph(vertices, p, seed=int(rng.integers(2 ** 31)))
    if fn == "cut-rank":
        return cut_rank_fn(G)
    if fn != "edge-boundary":
        raise DomainError(f"unknown graph function {fn!r}")
    edges = sorted(G.edges())[:max_edges] or [(0, 1)]
    return edge_boundary_fn(G, edges)


def random_matroid_instance(rng: np.random.Generator, rows: Optional[int] = None,
                            cols: Optional[int] = None) -> ConnectivityOracle:
    rows = rows or int(rng.integers(1, 4))
    cols = cols or int(rng.integers(2, 7))
    matrix = rng.integers(0, 2, size=(rows, cols))
    return matroid_connectivity_fn(matrix.tolist(), [f"c{i}" for i in range(cols)])


def random_instances(count: int, seed: int = 0) -> Iterator[Tuple[str, ConnectivityOracle]]:
    """Edge-boundary, cut-rank and matroid instances in turn."""
    rng = np.random.default_rng(seed)
    makers: List[Tuple[str, Callable[[], ConnectivityOracle]]] = [
        ("edge-boundary", lambda: random_graph_instance(rng)),
        ("cut-rank", lambda: random_graph_instance(rng, fn="cut-rank")),
        ("matroid", lambda: random_matroid_instance(rng)),
    ]
    for i in range(count):
        kind, make = makers[i % len(makers)]
        oracle = make()
        logger.debug(f"random instance {i} (seed {seed}): {kind} over {oracle.n} elements")
        yield f"{kind}#{i}", oracle


# SECTION: harnesses

@dataclass
class DualityReport:
    checked: int = 0
    mismatches: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def duality_sweep(max_edges: int = 5, max_vertices: int = 5, engine: Optional[str] = None) -> DualityReport:
    """
    Largest tangle order against brute-force branch width on every small
    atlas graph: connected graphs with at most `max_edges` edges under the
    edge boundary, graphs with at most `max_vertices` vertices under cut rank.
    """
    report = DualityReport()
    for number, G in enumerate(nx.graph_atlas_g()):
        instances = []
        if 0 < G.number_of_nodes() <= max_vertices:
            instances.append(cut_rank_fn(G))
        if 0 < G.number_of_edges() <= max_edges and nx.is_connected(G):
            instances.append(edge_boundary_fn(G))
        for oracle in instances:
            report.checked += 1
            tangle_order = max_tangle_order(oracle, engine)
            width = brute_force_branch_width(oracle)
            if tangle_order != width:
                report.mismatches.append(f"atlas graph {number} ({oracle.name}): "
                                         f"tangle order {tangle_order}, branch width {width}")
    logger.info(f"duality sweep checked {report.checked} instances, {len(report.mismatches)} mismatches")
    return report


@dataclass
class CanonicityReport:
    seed: int
    trials: int = 0
    passes: int = 0
    index_changes: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "seed": self.seed,
            "trials": self.trials,
            "passes": self.passes,
            "indexChanges": self.index_changes,
            "failures": list(self.failures),
        }


def _renamed(x: Subset, perm: Sequence[int]) -> Subset:
    out = 0
    for i in members(x):
        out |= 1 << perm[i]
    return out


def _labelled(td: TreeDecomposition, perm: Sequence[int]) -> nx.Graph:
    tangle_at = getattr(td, "tangle_at", {})
    G = nx.Graph()
    for node in td.tree.nodes:
        order = td.tangles[tangle_at[node]].order if node in tangle_at else None
        G.add_node(node, bag=_renamed(td.bags[node], perm), order=order)
    G.add_edges_from(td.tree.edges)
    return G


def _labelled_directed(dtd: DirectedTreeDecomposition, perm: Sequence[int]) -> nx.DiGraph:
    G = nx.DiGraph()
    tangle_at = dtd.tangle_at
    for node in dtd.tree.nodes:
        G.add_node(node, cone=_renamed(dtd.cones[node], perm),
                   order=dtd.tangles[tangle_at[node]].order, root=node == dtd.root)
    G.add_edges_from(dtd.tree.edges)
    return G


def _same(a: dict, b: dict) -> bool:
    return a == b


def canonicity_harness(oracle: ConnectivityOracle, order: int, trials: int = 10, seed: int = 0,
                       directed: bool = False, engine: Optional[str] = None) -> CanonicityReport:
    """
    Renames the elements at random, rebuilds everything, and checks that the
    decomposition is the renamed original. Data structure indices may move;
    those moves are counted, not reported as failures.
    """
    rng = np.random.default_rng(seed)
    n = oracle.n
    identity = list(range(n))
    base_ds = TangleDataStructure.build(oracle, order, engine)
    base = canonical_decomposition(oracle, order, ds=base_ds)
    roots = sorted(base.tau) if directed else []
    base_directed = {i: directed_decomposition(oracle, order, i, ttd=base) for i in roots}
    report = CanonicityReport(seed=seed)
    for trial in range(trials):
        perm = [int(p) for p in rng.permutation(n)]
        image = oracle.permuted(perm)
        inverse = [0] * n
        for old, new in enumerate(perm):
            inverse[new] = old
        ds = TangleDataStructure.build(image, order, engine)
        ttd = canonical_decomposition(image, order, ds=ds)
        report.trials += 1
        ok = nx.is_isomorphic(_labelled(base, perm), _labelled(ttd, identity), node_match=_same)

        moved = {}
        for i in base_ds.indices():
            tangle = base_ds.tangle(i)
            j = ds.find(base_ds.order(i), lambda y, tangle=tangle: tangle.contains(_renamed(y, inverse)))
            moved[i] = j
            report.index_changes += int(j != i)

        for i in roots:
            j = moved[i]
            if j not in ttd.tau:
                ok = False
                continue
            renamed = directed_decomposition(image, order, j, ttd=ttd)
            ok = ok and nx.is_isomorphic(_labelled_directed(base_directed[i], perm),
                                         _labelled_directed(renamed, identity), node_match=_same)
        if ok:
            report.passes += 1
        else:
            report.failures.append(f"trial {trial}: permutation {perm} changes the decomposition")
    logger.info(f"canonicity of {oracle.name} at order {order}: {report.passes}/{report.trials} "
                f"(seed {seed}, {report.index_changes} index moves)")
    return report


__all__ = [
    "brute_force_tangles", "brute_force_branch_width", "box_constraint", "base_constraint",
    "tangle_pair_constraint", "brute_force_leftmost_separation", "random_graph_instance",
    "random_matroid_instance", "random_instances", "DualityReport", "duality_sweep",
    "CanonicityReport", "canonicity_harness",
]
