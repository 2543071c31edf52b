"""
Connectivity functions and the oracle that evaluates them.

A connectivity function is a symmetric submodular kappa on the subsets of a
ground set with kappa(empty) == 0. ConnectivityOracle wraps such a function,
counts how often it is evaluated and memoizes values for small ground sets.
The built-in instances cover vertex cuts, edge boundaries, cut-rank and the
connectivity function of a binary matroid.
"""

import logging
import threading
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from . conf import setting
from . exceptions import DomainError, SizeGuardError
from . subsets import Subset, all_subsets, full_mask, members

logger = logging.getLogger(__name__)

MAX_GROUND = 64


@dataclass(frozen=True)
class GroundSet:
    n: int
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("a ground set needs at least one element")
        if self.n > MAX_GROUND:
            raise SizeGuardError("ground set size", MAX_GROUND, self.n)
        if not self.labels:
            object.__setattr__(self, 'labels', tuple(str(i) for i in range(self.n)))
        elif len(self.labels) != self.n:
            raise DomainError(f"expected {self.n} labels, got {len(self.labels)}")

    @property
    def full(self) -> Subset:
        return full_mask(self.n)

    def complement(self, x: Subset) -> Subset:
        return self.full ^ x

    def names(self, x: Subset) -> List[str]:
        return [self.labels[i] for i in members(x)]


class ConnectivityOracle:
    """
    Evaluates kappa on subsets of `ground`.

    `fn` maps an int subset to an int. `vector_fn`, when given, maps an int64
    array of subsets to their values at once and is used to fill the dense
    table. The call counter counts evaluations of `fn` (a dense table fill
    counts 2**n calls); memo hits are not counted.
    """

    def __init__(self, ground: GroundSet, fn: Callable[[Subset], int],
                 name: str = "custom", vector_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                 memo: Optional[bool] = None):
        self.ground = ground
        self.fn = fn
        self.vector_fn = vector_fn
        self.name = name
        if memo is None:
            memo = ground.n <= setting('TANGLES_MEMO_LIMIT')
        self.memo: Optional[Dict[Subset, int]] = {} if memo else None
        self.calls = 0
        self._table: Optional[np.ndarray] = None
        self._lock = threading.Lock()

    @property
    def n(self) -> int:
        return self.ground.n

    @property
    def full(self) -> Subset:
        return self.ground.full

    def __repr__(self):
        return f"ConnectivityOracle({self.name}, n={self.n})"

    def check_subset(self, x: Subset) -> int:
        x = int(x)
        if x < 0 or x >> self.n:
            raise DomainError(f"subset {x:#x} is not over a ground set of {self.n} elements")
        return x

    def evaluate(self, x: Subset) -> int:
        x = self.check_subset(x)
        if self._table is not None:
            return int(self._table[x])
        if self.memo is not None:
            with self._lock:
                if x in self.memo:
                    return self.memo[x]
        value = int(self.fn(x))
        with self._lock:
            self.calls += 1
            if self.memo is not None:
                self.memo[x] = value
        return value

    __call__ = evaluate

    def has_table(self) -> bool:
        return self._table is not None

    def table(self) -> np.ndarray:
        """Dense array of kappa over all 2**n subsets (read-only)."""
        if self._table is not None:
            return self._table
        limit = setting('TANGLES_DENSE_TABLE_LIMIT')
        if self.n > limit:
            raise SizeGuardError("dense table limit", limit, self.n)
        idx = all_subsets(self.n)
        if self.vector_fn is not None:
            values = np.asarray(self.vector_fn(idx), dtype=np.int64)
        else:
            values = np.fromiter((self.fn(int(x)) for x in idx), dtype=np.int64, count=idx.shape[0])
        values.setflags(write=False)
        with self._lock:
            self.calls += idx.shape[0]
            self._table = values
        logger.debug(f"filled dense table of {self.name} over {self.n} elements")
        return values

    def values(self, xs: Sequence[Subset]) -> np.ndarray:
        if self._table is not None:
            return self._table[np.asarray(xs, dtype=np.int64)]
        return np.array([self.evaluate(int(x)) for x in xs], dtype=np.int64)

    def permuted(self, perm: Sequence[int]) -> "ConnectivityOracle":
        """
        The same function with element i renamed to perm[i].
        """
        n = self.n
        if sorted(perm) != list(range(n)):
            raise DomainError("perm must be a permutation of the ground set ids")
        inverse = [0] * n
        for old, new in enumerate(perm):
            inverse[new] = old
        labels = [""] * n
        for old, new in enumerate(perm):
            labels[new] = self.ground.labels[old]

        def pull_back(y: Subset) -> Subset:
            x = 0
            for new in members(y):
                x |= 1 << inverse[new]
            return x

        base = self
        return ConnectivityOracle(GroundSet(n, tuple(labels)), lambda y: base.fn(pull_back(y)),
                                  name=self.name)


def gf2_rank(rows: List[int]) -> int:
    """Rank over GF(2) of rows given as int bitsets, lowest set column as pivot."""
    pivots: Dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            low = row & -row
            if low in pivots:
                row ^= pivots[low]
            else:
                pivots[low] = row
                rank += 1
                break
    return rank


def normalize(raw: Callable[[Subset], int], ground: GroundSet, name: str = "normalized") -> ConnectivityOracle:
    """Shift a symmetric submodular function so that it vanishes on the empty set."""
    offset = int(raw(0))
    return ConnectivityOracle(ground, lambda x: int(raw(x)) - offset, name=name)


def _graph_ids(G: nx.Graph) -> Tuple[List, Dict]:
    nodes = sorted(G.nodes())
    return nodes, {v: i for i, v in enumerate(nodes)}


def vertex_cut_fn(G: nx.Graph) -> ConnectivityOracle:
    """Number of edges between X and its complement, over the vertices of G."""
    nodes, index = _graph_ids(G)
    adjacency = [0] * len(nodes)
    pairs = []
    for u, v in G.edges():
        if u == v:
            continue
        iu, iv = index[u], index[v]
        adjacency[iu] |= 1 << iv
        adjacency[iv] |= 1 << iu
        pairs.append((iu, iv))

    def fn(x: Subset) -> int:
        return sum((adjacency[i] & ~x).bit_count() for i in members(x))

    def vector_fn(xs: np.ndarray) -> np.ndarray:
        out = np.zeros(xs.shape[0], dtype=np.int64)
        for iu, iv in pairs:
            out += ((xs >> iu) ^ (xs >> iv)) & 1
        return out

    ground = GroundSet(len(nodes), tuple(str(v) for v in nodes))
    return ConnectivityOracle(ground, fn, name="vertex-cut", vector_fn=vector_fn)


def edge_boundary_fn(G: nx.Graph, edges: Optional[Sequence[Tuple]] = None) -> ConnectivityOracle:
    """
    Boundary size of an edge set: vertices incident with an edge inside X and
    an edge outside X. The ground set is `edges` (default: G's edge order).
    """
    edges = list(G.edges()) if edges is None else list(edges)
    incidence: Dict = {}
    for i, (u, v) in enumerate(edges):
        incidence[u] = incidence.get(u, 0) | (1 << i)
        incidence[v] = incidence.get(v, 0) | (1 << i)
    masks = [m for m in incidence.values() if m & (m - 1)]
    n = len(edges)
    full = full_mask(n)

    def fn(x: Subset) -> int:
        outside = full & ~x
        return sum(1 for m in masks if m & x and m & outside)

    def vector_fn(xs: np.ndarray) -> np.ndarray:
        out = np.zeros(xs.shape[0], dtype=np.int64)
        for m in masks:
            out += ((xs & m) != 0) & ((xs & m) != m)
        return out

    ground = GroundSet(n, tuple(f"{u}-{v}" for u, v in edges))
    return ConnectivityOracle(ground, fn, name="edge-boundary", vector_fn=vector_fn)


def cut_rank_fn(G: nx.Graph) -> ConnectivityOracle:
    """GF(2) rank of the adjacency matrix between X and its complement."""
    nodes, index = _graph_ids(G)
    adjacency = [0] * len(nodes)
    for u, v in G.edges():
        if u == v:
            continue
        adjacency[index[u]] |= 1 << index[v]
        adjacency[index[v]] |= 1 << index[u]

    def fn(x: Subset) -> int:
        return gf2_rank([adjacency[i] & ~x for i in members(x)])

    ground = GroundSet(len(nodes), tuple(str(v) for v in nodes))
    return ConnectivityOracle(ground, fn, name="cut-rank")


def matroid_connectivity_fn(matrix: Sequence[Sequence[int]], labels: Sequence[str] = ()) -> ConnectivityOracle:
    """r(X) + r(complement X) - r(E) for the binary matroid on the columns of `matrix`."""
    matrix = np.asarray(matrix, dtype=np.int64) & 1
    if matrix.ndim != 2 or matrix.size == 0:
        raise DomainError("matroid matrix must be a nonempty 2-d 0/1 array")
    rows, cols = matrix.shape
    columns = [sum(int(matrix[r, c]) << r for r in range(rows)) for c in range(cols)]
    full = full_mask(cols)
    total = gf2_rank(columns)

    def rank(x: Subset) -> int:
        return gf2_rank([columns[c] for c in members(x)])

    def fn(x: Subset) -> int:
        return rank(x) + rank(full & ~x) - total

    ground = GroundSet(cols, tuple(labels))
    return ConnectivityOracle(ground, fn, name="matroid")


@dataclass
class AxiomReport:
    ok: bool
    axiom: Optional[str] = None
    witness: Tuple[Subset, ...] = ()
    mode: str = "exhaustive"
    seed: Optional[int] = None
    checked: int = 0
    notes: List[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "axiom": self.axiom,
            "witness": list(self.witness),
            "mode": self.mode,
            "seed": self.seed,
            "checked": self.checked,
        }


def _pair_violation(t: np.ndarray, n: int, full: int, kind: str) -> Optional[Tuple[int, int]]:
    idx = all_subsets(n)
    for x in range(full + 1):
        if kind == "submodularity":
            bad = t[x] + t < t[idx & x] + t[idx | x]
        else:
            bad = t[x] + t < t[x & ~idx & full] + t[idx & ~x]
        hits = np.flatnonzero(bad)
        if hits.size:
            return x, int(hits[0])
    return None


def verify_axioms(oracle: ConnectivityOracle, max_exhaustive: Optional[int] = None,
                  seed: Optional[int] = None, samples: Optional[int] = None) -> AxiomReport:
    """
    Check kappa(empty) == 0, nonnegativity, symmetry, submodularity and
    posimodularity. Exhaustive up to `max_exhaustive` elements, sampled
    with a recorded seed up to TANGLES_SAMPLE_LIMIT, refused above.
    """
    n = oracle.n
    full = oracle.full
    max_exhaustive = setting('TANGLES_MAX_EXHAUSTIVE') if max_exhaustive is None else max_exhaustive
    sample_limit = setting('TANGLES_SAMPLE_LIMIT')
    if n > max(max_exhaustive, sample_limit):
        raise SizeGuardError("axiom check limit", max(max_exhaustive, sample_limit), n)

    if oracle.evaluate(0) != 0:
        return AxiomReport(False, "empty", (0,))

    if n <= max_exhaustive:
        t = oracle.table()
        idx = all_subsets(n)
        negative = np.flatnonzero(t < 0)
        if negative.size:
            return AxiomReport(False, "nonnegativity", (int(negative[0]),), checked=t.size)
        asym = np.flatnonzero(t != t[full ^ idx])
        if asym.size:
            return AxiomReport(False, "symmetry", (int(asym[0]),), checked=t.size)
        for kind in ("submodularity", "posimodularity"):
            hit = _pair_violation(t, n, full, kind)
            if hit is not None:
                return AxiomReport(False, kind, hit, checked=t.size * t.size)
        return AxiomReport(True, checked=t.size * t.size)

    seed = setting('TANGLES_AXIOM_SAMPLE_SEED') if seed is None else seed
    samples = setting('TANGLES_AXIOM_SAMPLE_SIZE') if samples is None else samples
    rng = np.random.default_rng(seed)
    xs = rng.integers(0, full + 1, size=samples, dtype=np.int64)
    ys = rng.integers(0, full + 1, size=samples, dtype=np.int64)
    kx, ky = oracle.values(xs), oracle.values(ys)
    checks = [
        ("nonnegativity", kx < 0, lambda i: (int(xs[i]),)),
        ("symmetry", kx != oracle.values(full ^ xs), lambda i: (int(xs[i]),)),
        ("submodularity", kx + ky < oracle.values(xs & ys) + oracle.values(xs | ys),
         lambda i: (int(xs[i]), int(ys[i]))),
        ("posimodularity", kx + ky < oracle.values(xs & ~ys & full) + oracle.values(ys & ~xs & full),
         lambda i: (int(xs[i]), int(ys[i]))),
    ]
    for axiom, bad, witness in checks:
        hits = np.flatnonzero(bad)
        if hits.size:
            return AxiomReport(False, axiom, witness(int(hits[0])), mode="sampled", seed=seed, checked=samples)
    logger.info(f"sampled axiom check of {oracle.name} passed with seed {seed}")
    return AxiomReport(True, mode="sampled", seed=seed, checked=samples)


__all__ = [
    "GroundSet", "ConnectivityOracle", "AxiomReport", "gf2_rank", "normalize",
    "vertex_cut_fn", "edge_boundary_fn", "cut_rank_fn", "matroid_connectivity_fn",
    "verify_axioms",
]
