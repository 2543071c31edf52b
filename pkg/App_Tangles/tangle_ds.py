"""
Comprehensive tangle data structure of order k.

Every tangle of order <= k gets an integer index: 1 is the empty tangle,
then come the tangles of order 1, 2, ... k, each level numbered by a
left-first walk over its distinction tree. An internal node of a
distinction tree carries a separator X; the left subtree holds the tangles
containing X and the right subtree those containing its complement. The
separators on the path to a leaf pin down exactly one tangle.

Indices depend on the element order and are not canonical.
"""

import logging
import threading
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from . bases import distinct_lattices, enumerate_bases
from . conf import setting
from . connectivity import ConnectivityOracle
from . exceptions import DomainError, IntegrityError, SizeGuardError
from . subsets import Subset, from_ids, members, singletons
from . tangles import (
    DecompositionClosure, Tangle, empty_tangle, has_tangle_of_order, leftmost_tangle_separation,
    minimal_member_in_box, minimal_member_in_lattice,
)

logger = logging.getLogger(__name__)

FORMAT = "tangle-ds"
VERSION = 1


@dataclass
class DistinctionNode:
    separator: Optional[Subset] = None
    children: List["DistinctionNode"] = field(default_factory=list)
    path: Tuple[Subset, ...] = ()
    leaf: Optional[int] = None
    stored: Optional[int] = None

    @property
    def is_leaf(self) -> bool:
        return self.separator is None


def _split(oracle: ConnectivityOracle, closure: DecompositionClosure, lattices, path: Tuple[Subset, ...]) -> DistinctionNode:
    full = oracle.full
    marks = [0] + singletons(oracle.n) + [full ^ s for s in path]
    small = closure.close(closure.seed(marks))
    if small is None:
        raise IntegrityError(f"separator path {list(path)} is contained in no tangle")
    memo: Dict[Subset, bool] = {}

    def accepts(x: Subset) -> bool:
        if x not in memo:
            if small[x]:
                memo[x] = False
            elif small[full ^ x]:
                memo[x] = True
            else:
                memo[x] = closure.close(closure.extend(small, full ^ x)) is not None
        return memo[x]

    for lattice in lattices:
        x = minimal_member_in_lattice(oracle, accepts, lattice)
        if x is not None and accepts(full ^ x):
            node = DistinctionNode(separator=x, path=path)
            node.children = [
                _split(oracle, closure, lattices, path + (x,)),
                _split(oracle, closure, lattices, path + (full ^ x,)),
            ]
            return node
    return DistinctionNode(path=path)


def grow_distinction_tree(oracle: ConnectivityOracle, order: int, engine: Optional[str] = None) -> Optional[DistinctionNode]:
    """Distinction tree of the tangles of exactly `order`, None if there are none."""
    if order == 0:
        return DistinctionNode()
    if not has_tangle_of_order(oracle, order, engine):
        return None
    closure = DecompositionClosure(oracle, order - 1)
    lattices = distinct_lattices(oracle, order - 1)
    root = _split(oracle, closure, lattices, ())
    logger.debug(f"level {order} of {oracle.name}: {len(lattices)} lattices, {closure.rounds} closure rounds")
    return root


class TangleDataStructure:
    """
    Levels 0..k; `lower` is the structure of order k - 1 and is shared.
    """

    def __init__(self, oracle: ConnectivityOracle, k: int, lower: Optional["TangleDataStructure"],
                 root: Optional[DistinctionNode]):
        self.oracle = oracle
        self.k = k
        self.lower = lower
        self.root = root
        self.offset = lower.size() if lower is not None else 0
        self.leaves: List[DistinctionNode] = []
        self.tangles: List[Tangle] = []
        self.findings: List[str] = []
        self._lock = threading.Lock()
        if root is not None:
            self._number(root)

    def _number(self, node: DistinctionNode) -> None:
        if node.is_leaf:
            self.leaves.append(node)
            node.leaf = self.offset + len(self.leaves)
            if self.k == 0:
                self.tangles.append(empty_tangle(self.oracle))
            else:
                self.tangles.append(Tangle(self.k, node.path, self.oracle))
            return
        for child in node.children:
            self._number(child)

    @classmethod
    def build(cls, oracle: ConnectivityOracle, k: int, engine: Optional[str] = None) -> "TangleDataStructure":
        limit = setting('TANGLES_MAX_DS_ORDER')
        if k > limit:
            raise SizeGuardError("tangle data structure order", limit, k)
        if k < 0:
            raise DomainError(f"order must be nonnegative, got {k}")
        ds = None
        for level in range(k + 1):
            ds = cls(oracle, level, ds, grow_distinction_tree(oracle, level, engine))
            logger.debug(f"{oracle.name}: {len(ds.tangles)} tangles of order {level}")
        return ds

    def __repr__(self):
        return f"TangleDataStructure({self.oracle.name}, k={self.k}, size={self.size()})"

    # SECTION: accessors

    def size(self, order: Optional[int] = None) -> int:
        """Number of tangles of order <= `order` (default k)."""
        order = self.k if order is None else order
        if order > self.k:
            raise DomainError(f"order {order} is above the structure order {self.k}")
        if order < self.k:
            return self.lower.size(order) if order >= 0 else 0
        return self.offset + len(self.tangles)

    def _level(self, i: int) -> "TangleDataStructure":
        if not 1 <= i <= self.size():
            raise DomainError(f"tangle index {i} out of range 1..{self.size()}")
        level = self
        while i <= level.offset:
            level = level.lower
        return level

    def order(self, i: int) -> int:
        return self._level(i).k

    def tangle(self, i: int) -> Tangle:
        level = self._level(i)
        return level.tangles[i - level.offset - 1]

    def indices(self, order: Optional[int] = None) -> range:
        """Indices of the tangles of exactly `order`, or of every tangle."""
        if order is None:
            return range(1, self.size() + 1)
        level = self if order == self.k else self._at(order)
        return range(level.offset + 1, level.offset + len(level.tangles) + 1)

    def _at(self, order: int) -> "TangleDataStructure":
        if not 0 <= order <= self.k:
            raise DomainError(f"order {order} outside 0..{self.k}")
        level = self
        while level.k > order:
            level = level.lower
        return level

    # SECTION: the queries

    def membership(self, i: int, x: Subset) -> bool:
        return self.tangle(i).contains(x)

    def find(self, order: int, contains: Callable[[Subset], bool]) -> int:
        """Index of the tangle of `order` whose membership is `contains`."""
        level = self._at(order)
        node = level.root
        if node is None:
            raise IntegrityError(f"there is no tangle of order {order}")
        full = self.oracle.full
        while not node.is_leaf:
            left = contains(node.separator)
            right = contains(full ^ node.separator)
            if left == right:
                raise IntegrityError(f"membership oracle is not a tangle: separator {node.separator:#x} "
                                     f"and its complement are {'both' if left else 'neither'} accepted")
            node = node.children[0 if left else 1]
        return node.leaf

    def truncation(self, i: int, order: int) -> int:
        own = self.order(i)
        if order >= own:
            return i
        if order <= 0:
            return 1
        return self.find(order, self.tangle(i).contains)

    def separation(self, i: int, j: int, validate: bool = True) -> Optional[Subset]:
        """Leftmost minimum (T_i, T_j)-separation, None when the tangles are comparable."""
        if i == j:
            raise DomainError("a tangle has no separation from itself")
        top = min(self.order(i), self.order(j))
        split = None
        for level in range(1, top + 1):
            if self.truncation(i, level) != self.truncation(j, level):
                split = level
                break
        if split is None:
            return None
        first, second = self.truncation(i, split), self.truncation(j, split)
        separator = self._lca_separator(first, second)
        tangle = self.tangle(first)
        found = minimal_member_in_box(self.oracle, tangle.contains, 0, separator, split)
        if validate:
            reference = leftmost_tangle_separation(tangle, self.tangle(second))
            if found != reference:
                note = (f"separation({i}, {j}): minimal member {found!r} differs from the leftmost "
                        f"minimum separation {reference!r}; using the latter")
                logger.warning(note)
                with self._lock:
                    self.findings.append(note)
                found = reference
        return found

    def _lca_separator(self, first: int, second: int) -> Subset:
        level = self._level(first)
        a = level.leaves[first - level.offset - 1].path
        b = level.leaves[second - level.offset - 1].path
        for x, y in zip(a, b):
            if x != y:
                return x
        raise IntegrityError(f"tangles {first} and {second} share their whole separator path")

    def introduces_new_order(self, order: int) -> bool:
        """Whether some set has order exactly `order` - 1."""
        if order <= 0:
            return False
        return any(b.order == order - 1 for b in enumerate_bases(self.oracle, order - 1))

    def maximal_indices(self, order: Optional[int] = None) -> List[int]:
        """Tangles of order <= `order` that are not a truncation of another one."""
        order = self.k if order is None else order
        out = []
        for level in range(order + 1):
            above = list(self.indices(level + 1)) if level < order else []
            below = {self.truncation(j, level) for j in above}
            out.extend(i for i in self.indices(level) if i not in below)
        return out

    # SECTION: serialization and self checks

    def to_json(self) -> dict:
        levels = []
        ds = self
        while ds is not None:
            levels.append({"order": ds.k, "tree": _node_json(ds.root)})
            ds = ds.lower
        return {
            "format": FORMAT,
            "version": VERSION,
            "function": self.oracle.name,
            "n": self.oracle.n,
            "k": self.k,
            "labels": list(self.oracle.ground.labels),
            "levels": list(reversed(levels)),
        }

    @classmethod
    def from_json(cls, oracle: ConnectivityOracle, doc: dict) -> "TangleDataStructure":
        if doc.get("format") != FORMAT or doc.get("version") != VERSION:
            raise DomainError(f"not a {FORMAT} document of version {VERSION}")
        if doc.get("n") != oracle.n:
            raise DomainError(f"document is over {doc.get('n')} elements, the instance has {oracle.n}")
        ds = None
        for level in sorted(doc["levels"], key=lambda item: item["order"]):
            root = _node_from_json(level["tree"], (), oracle.full)
            ds = cls(oracle, level["order"], ds, root)
            for leaf in ds.leaves:
                if leaf.leaf != leaf.stored:
                    raise IntegrityError(f"stored leaf index {leaf.stored} does not match position {leaf.leaf}")
        if ds is None or ds.k != doc["k"]:
            raise DomainError("document levels do not match its order")
        return ds

    def integrity_report(self) -> List[str]:
        findings = []
        n = self.oracle.n
        for level in range(self.k + 1):
            count = len(self.indices(level))
            if count > n:
                findings.append(f"order {level}: {count} tangles, more than the {n} allowed")
        for i in self.indices():
            if self.find(self.order(i), self.tangle(i).contains) != i:
                findings.append(f"find does not return tangle {i}")
        return findings + list(self.findings)


def _node_json(node: Optional[DistinctionNode]):
    if node is None:
        return None
    if node.is_leaf:
        return {"leaf": node.leaf}
    return {"separator": members(node.separator), "children": [_node_json(c) for c in node.children]}


def _node_from_json(doc, path, full) -> Optional[DistinctionNode]:
    if doc is None:
        return None
    if "leaf" in doc:
        return DistinctionNode(path=path, stored=doc["leaf"])
    x = from_ids(doc["separator"])
    node = DistinctionNode(separator=x, path=path)
    left, right = doc["children"]
    node.children = [_node_from_json(left, path + (x,), full), _node_from_json(right, path + (full ^ x,), full)]
    return node


def build(oracle: ConnectivityOracle, k: int, engine: Optional[str] = None) -> TangleDataStructure:
    return TangleDataStructure.build(oracle, k, engine)


__all__ = ["DistinctionNode", "TangleDataStructure", "grow_distinction_tree", "build"]
