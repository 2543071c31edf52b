"""
Tangles of a connectivity function.

A tangle of order k is stored by its "big sides": for every X with
kappa(X) < k exactly one of X and its complement is a member, no three
members have an empty common intersection and no singleton is a member.

Existence questions ("is there a tangle of order k + 1 containing these
sets?") are answered through the dual object. Every set that must be small
is marked, the marks are closed under taking subsets of order <= k and under
unions of two small sets; a tangle exists exactly when the ground set never
becomes small. Two engines compute that closure: `closure` works on the
dense family of all sets of order <= k, `mu` keeps one largest known small
set per lattice L(B) and only grows those.
"""

import logging
import threading
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . bases import Base, Lattice, distinct_lattices
from . conf import setting
from . connectivity import ConnectivityOracle
from . exceptions import DomainError, IntegrityError, OutOfOrderError, SizeGuardError
from . separations import kappa_min
from . subsets import (
    Subset, all_subsets, down_closure, from_ids, maximal_members, members,
    minimal_members, popcounts, singletons, subset_any, submask_array,
)

logger = logging.getLogger(__name__)

# rows of maximal members OR-ed against all others at once
UNION_CHUNK = 512

Membership = Callable[[Subset], bool]


# SECTION: closure engines

class DecompositionClosure:
    """
    Small-side closure over the dense family of sets of order <= k.

    Families are boolean tables over all subsets. `close` returns the
    closed family, or None once the ground set itself is forced small.
    """

    def __init__(self, oracle: ConnectivityOracle, k: int):
        self.oracle = oracle
        self.k = k
        self.n = oracle.n
        self.full = oracle.full
        self.allowed = oracle.table() <= k
        self.rounds = 0

    def seed(self, marks: Iterable[Subset]) -> np.ndarray:
        table = np.zeros(self.full + 1, dtype=bool)
        table[np.fromiter((int(x) for x in marks), dtype=np.int64)] = True
        return down_closure(table, self.n) & self.allowed

    def extend(self, family: np.ndarray, x: Subset) -> np.ndarray:
        out = family.copy()
        below = submask_array(int(x))
        out[below] |= self.allowed[below]
        return out

    def close(self, family: np.ndarray) -> Optional[np.ndarray]:
        family = family.copy()
        while True:
            if family[self.full]:
                return None
            tops = maximal_members(family, self.n)
            unions = np.zeros_like(family)
            for start in range(0, tops.size, UNION_CHUNK):
                block = tops[start:start + UNION_CHUNK]
                unions[np.bitwise_or.outer(block, tops).ravel()] = True
            grown = family | (down_closure(unions, self.n) & self.allowed)
            self.rounds += 1
            if np.array_equal(grown, family):
                return family
            family = grown


class BaseMuIteration:
    """
    The base-indexed variant: mu maps every distinct lattice L(B) of order
    <= k to the largest member already known to be small. One round adds to
    mu(B) every member of L(B) lying below the union of two current values.
    """

    def __init__(self, oracle: ConnectivityOracle, k: int, lattices: Optional[List[Lattice]] = None):
        self.oracle = oracle
        self.k = k
        self.n = oracle.n
        self.full = oracle.full
        self.allowed = oracle.table() <= k
        self.lattices = distinct_lattices(oracle, k) if lattices is None else lattices
        self.rounds = 0

    def _seed_family(self, marks: np.ndarray) -> np.ndarray:
        table = np.zeros(self.full + 1, dtype=bool)
        table[marks] = True
        return down_closure(table, self.n) & self.allowed

    def _largest_small(self, lattice: Lattice, small: np.ndarray) -> int:
        inside = lattice.members[small[lattice.members]]
        return int(np.bitwise_or.reduce(inside)) if inside.size else 0

    def _start(self, small: np.ndarray, t0: "TangleLike") -> np.ndarray:
        mu = np.array([self._largest_small(lattice, small) for lattice in self.lattices], dtype=np.int64)
        if t0.order:
            for i, lattice in enumerate(self.lattices):
                if lattice.order >= t0.order:
                    continue
                flipped = Base(lattice.base.b2, lattice.base.b1, lattice.order)
                bottom = tangle_lattice_bottom(t0, flipped)
                if bottom is not None:
                    mu[i] |= self.full ^ bottom
        return mu

    def _small_from(self, values: np.ndarray) -> Optional[np.ndarray]:
        values = np.unique(values)
        unions = np.bitwise_or.outer(values, values).ravel()
        if np.any(unions == self.full):
            return None
        return self._seed_family(unions)

    def decide(self, marks: Sequence[Subset], t0: "TangleLike", batched: bool = True) -> bool:
        marks = np.asarray(list(marks), dtype=np.int64)
        small = self._seed_family(marks)
        if small[self.full]:
            return False
        seeds = maximal_members(small, self.n)
        mu = self._start(small, t0)
        while True:
            self.rounds += 1
            changed = False
            if batched:
                small = self._small_from(np.concatenate([mu, seeds]))
                if small is None:
                    return False
                grown = np.array([m | self._largest_small(lattice, small)
                                  for m, lattice in zip(mu, self.lattices)], dtype=np.int64)
                changed = not np.array_equal(grown, mu)
                mu = grown
            else:
                for i, lattice in enumerate(self.lattices):
                    small = self._small_from(np.concatenate([mu, seeds]))
                    if small is None:
                        return False
                    value = int(mu[i]) | self._largest_small(lattice, small)
                    if value != mu[i]:
                        mu[i] = value
                        changed = True
            if not changed:
                return self._small_from(np.concatenate([mu, seeds])) is not None


def _engine(name: Optional[str]) -> str:
    name = name or setting('TANGLES_ENGINE')
    if name not in ('closure', 'mu'):
        raise DomainError(f"unknown engine {name!r}")
    return name


def exists_tangle_avoiding(oracle: ConnectivityOracle, t0: "TangleLike", avoid: Iterable[Subset],
                           target: int, engine: Optional[str] = None) -> bool:
    """
    Is there a tangle of order `target` that extends t0 and contains none
    of the sets in `avoid`?
    """
    avoid = [oracle.check_subset(x) for x in avoid]
    if target <= 0:
        if avoid:
            raise DomainError("a tangle of order 0 has no sets to avoid")
        return True
    if t0.order > target:
        raise DomainError(f"start tangle of order {t0.order} is above the target order {target}")
    k = target - 1
    t = oracle.table()
    for x in avoid:
        if t[x] > k:
            raise DomainError(f"avoided set {x:#x} has order {int(t[x])} > {k}")
    marks = [0] + singletons(oracle.n) + avoid
    if t0.order:
        marks.extend(int(oracle.full ^ x) for x in t0.members())
    if _engine(engine) == 'mu':
        return BaseMuIteration(oracle, k).decide(marks, t0)
    closure = DecompositionClosure(oracle, k)
    return closure.close(closure.seed(marks)) is not None


def has_tangle_of_order(oracle: ConnectivityOracle, k: int, engine: Optional[str] = None) -> bool:
    return exists_tangle_avoiding(oracle, empty_tangle(oracle), [], k, engine)


def max_tangle_order(oracle: ConnectivityOracle, engine: Optional[str] = None) -> int:
    """Largest k with a tangle of order k; equals the branch width of kappa."""
    k = 0
    while has_tangle_of_order(oracle, k + 1, engine):
        k += 1
    logger.debug(f"max tangle order of {oracle.name} is {k}")
    return k


# SECTION: tangle objects

class TangleLike:
    order: int
    oracle: ConnectivityOracle

    def _in_range(self, x: Subset) -> Subset:
        x = self.oracle.check_subset(x)
        value = self.oracle.evaluate(x)
        if value >= self.order:
            raise OutOfOrderError(f"kappa({x:#x}) = {value} is not below the tangle order {self.order}")
        return x

    def contains(self, x: Subset) -> bool:
        raise NotImplementedError

    def member_table(self) -> np.ndarray:
        raise NotImplementedError

    def members(self) -> np.ndarray:
        return np.flatnonzero(self.member_table())

    def minimal_members(self) -> List[Subset]:
        return [int(x) for x in minimal_members(self.member_table(), self.oracle.n)]

    def key(self) -> Tuple[int, frozenset]:
        """Canonical identity: the order plus the minimal members."""
        return self.order, frozenset(self.minimal_members())

    def truncate(self, order: int) -> "TangleLike":
        raise NotImplementedError


class ExplicitTangle(TangleLike):
    """A tangle given by its full member list."""

    def __init__(self, order: int, members_: Iterable[Subset], oracle: ConnectivityOracle):
        self.order = order
        self.oracle = oracle
        if isinstance(members_, np.ndarray) and members_.dtype == bool:
            table = members_.copy()
        else:
            table = np.zeros(oracle.full + 1, dtype=bool)
            table[np.fromiter((int(x) for x in members_), dtype=np.int64)] = True
        table.setflags(write=False)
        self._table = table

    def __repr__(self):
        return f"ExplicitTangle(order={self.order}, members={len(self.members())})"

    def contains(self, x):
        return bool(self._table[self._in_range(x)])

    def member_table(self):
        return self._table

    def truncate(self, order):
        if order >= self.order:
            return self
        return ExplicitTangle(max(order, 0), self._table & (self.oracle.table() < order), self.oracle)


class Tangle(TangleLike):
    """
    The unique tangle of order `order` containing every set of `signature`.

    Membership of X is one closure trial: X is a member iff the signature
    plus X still extends to a tangle of this order. A truncation keeps a
    reference to the tangle it came from and answers through it.
    """

    def __init__(self, order: int, signature: Sequence[Subset], oracle: ConnectivityOracle,
                 source: Optional["Tangle"] = None):
        self.order = order
        self.oracle = oracle
        self.signature = tuple(int(s) for s in signature)
        self.source = source
        t = oracle.table()
        for s in self.signature:
            if t[s] >= order:
                raise DomainError(f"signature set {s:#x} has order {int(t[s])}, not below {order}")
        self._small = None
        self._closure = None
        self._table = None
        self._memo: Dict[Subset, bool] = {}
        self._lock = threading.RLock()

    def __repr__(self):
        return f"Tangle(order={self.order}, signature={list(self.signature)})"

    def _base_family(self) -> np.ndarray:
        if self._small is None:
            self._closure = DecompositionClosure(self.oracle, self.order - 1)
            marks = [0] + singletons(self.oracle.n) + [self.oracle.full ^ s for s in self.signature]
            small = self._closure.close(self._closure.seed(marks))
            if small is None:
                raise DomainError(f"no tangle of order {self.order} contains the signature {list(self.signature)}")
            self._small = small
        return self._small

    def contains(self, x):
        x = self._in_range(x)
        if self.source is not None:
            return self.source.contains(x)
        with self._lock:
            if self._table is not None:
                return bool(self._table[x])
            if x not in self._memo:
                small = self._base_family()
                if small[x]:
                    self._memo[x] = False
                elif small[self.oracle.full ^ x]:
                    self._memo[x] = True
                else:
                    trial = self._closure.extend(small, self.oracle.full ^ x)
                    self._memo[x] = self._closure.close(trial) is not None
            return self._memo[x]

    def member_table(self):
        """
        Members as a boolean table over all subsets.

        Undecided sets are visited by (size, value); each is tried on the
        small side first and committed to whichever side stays consistent.
        """
        if self.source is not None:
            return self.source.member_table() & (self.oracle.table() < self.order)
        with self._lock:
            if self._table is not None:
                return self._table
            full = self.oracle.full
            idx = all_subsets(self.oracle.n)
            if self.order == 0:
                table = np.zeros(full + 1, dtype=bool)
            else:
                small = self._base_family()
                closure = self._closure
                allowed = closure.allowed
                visit = np.lexsort((idx, popcounts(self.oracle.n)))
                for x in visit[allowed[visit]]:
                    x = int(x)
                    if small[x] or small[full ^ x]:
                        continue
                    trial = closure.close(closure.extend(small, x))
                    if trial is None:
                        trial = closure.close(closure.extend(small, full ^ x))
                        if trial is None:
                            raise IntegrityError(f"neither side of {x:#x} fits the tangle {self!r}")
                    small = trial
                table = allowed & small[full ^ idx]
            table.setflags(write=False)
            self._table = table
            return table

    def truncate(self, order):
        if order >= self.order:
            return self
        if order <= 0:
            return empty_tangle(self.oracle)
        t = self.oracle.table()
        kept = [s for s in self.signature if t[s] < order]
        return Tangle(order, kept, self.oracle, source=self.source or self)


def empty_tangle(oracle: ConnectivityOracle) -> Tangle:
    return Tangle(0, (), oracle)


# SECTION: axioms

@dataclass
class AxiomCheck:
    ok: bool
    axiom: Optional[str] = None
    witness: Tuple[Subset, ...] = ()

    def __bool__(self):
        return self.ok


def _as_table(oracle: ConnectivityOracle, family) -> np.ndarray:
    if isinstance(family, np.ndarray) and family.dtype == bool:
        return family
    table = np.zeros(oracle.full + 1, dtype=bool)
    table[np.fromiter((int(x) for x in family), dtype=np.int64)] = True
    return table


def check_axioms(oracle: ConnectivityOracle, family, k: int) -> AxiomCheck:
    """Exhaustive check of the four tangle axioms; reports the first violation."""
    limit = setting('TANGLES_MAX_EXHAUSTIVE')
    if oracle.n > limit:
        raise SizeGuardError("exhaustive axiom check", limit, oracle.n)
    n, full = oracle.n, oracle.full
    table = _as_table(oracle, family)
    t = oracle.table()
    idx = all_subsets(n)

    too_big = np.flatnonzero(table & (t >= k))
    if too_big.size:
        return AxiomCheck(False, "T0", (int(too_big[0]),))
    unoriented = np.flatnonzero((t < k) & ~table & ~table[full ^ idx])
    if unoriented.size:
        return AxiomCheck(False, "T1", (int(unoriented[0]),))
    below = subset_any(table, n)
    mins = minimal_members(table, n)
    for a in mins:
        meets = mins & a
        hits = np.flatnonzero(below[full ^ meets])
        if hits.size:
            b = int(mins[hits[0]])
            c = int(np.flatnonzero(table & ((idx & (int(a) & b)) == 0))[0])
            return AxiomCheck(False, "T2", (int(a), b, c))
    for x in singletons(n):
        if table[x]:
            return AxiomCheck(False, "T3", (x,))
    return AxiomCheck(True)


# SECTION: minimal members

def _grow(oracle: ConnectivityOracle, start: Subset, within: Subset, limit: int) -> Optional[Subset]:
    outside = oracle.full & ~within
    if kappa_min(oracle, start, outside).value > limit:
        return None
    grown = start
    for e in members(within & ~start):
        bit = 1 << e
        if kappa_min(oracle, grown | bit, outside).value <= limit:
            grown |= bit
    return grown


def _shrink(oracle: ConnectivityOracle, contains: Membership, lower: Subset, x: Subset, limit: int) -> Optional[Subset]:
    tried = set()
    for e in members(x & ~lower):
        within = x & ~(1 << e)
        free = members(within & ~lower)
        for size in range(limit + 1):
            for picked in combinations(free, size):
                grown = _grow(oracle, lower | from_ids(picked), within, limit)
                if grown is None or grown in tried:
                    continue
                tried.add(grown)
                if contains(grown):
                    return grown
    return None


def minimal_member_in_box(oracle: ConnectivityOracle, contains: Membership,
                          lower: Subset, upper: Subset, order: int) -> Optional[Subset]:
    """
    An inclusion-minimal X with lower <= X <= upper accepted by `contains`,
    where `contains` decides membership in a union of tangles of `order`.

    A strictly smaller member X* misses some x of the current X and has a
    free subset Z of at most order - 1 elements; growing Z greedily inside
    X - {x} while an order <= order - 1 extension exists reaches X* itself.
    """
    lower = oracle.check_subset(lower)
    upper = oracle.check_subset(upper)
    if lower & ~upper:
        return None
    limit = order - 1
    x = upper
    while limit >= 0:
        smaller = _shrink(oracle, contains, lower, x, limit)
        if smaller is None:
            break
        x = smaller
    if oracle.evaluate(x) <= limit and contains(x):
        return x
    return None


def minimal_member_in_lattice(oracle: ConnectivityOracle, contains: Membership, lattice: Lattice) -> Optional[Subset]:
    """
    Inclusion-minimal member of L(B) accepted by `contains`. Accepted
    lattice members are closed upwards inside the lattice, so one pass
    over the elements suffices.
    """
    found = lattice.members
    x = lattice.top
    if not contains(x):
        return None
    for e in members(x & ~lattice.bottom):
        below = found[(found & ~(x & ~(1 << e))) == 0]
        if below.size == 0:
            continue
        candidate = int(np.bitwise_or.reduce(below))
        if contains(candidate):
            x = candidate
    return x


def tangle_lattice_bottom(tangle: TangleLike, base: Base) -> Optional[Subset]:
    """The least member of T inside L(B), or None when T misses the lattice."""
    if base.order >= tangle.order:
        raise DomainError(f"lattice order {base.order} is not below the tangle order {tangle.order}")
    oracle = tangle.oracle

    def contains(x):
        return oracle.evaluate(x) == base.order and tangle.contains(x)

    return minimal_member_in_box(oracle, contains, base.b1, oracle.full & ~base.b2, base.order + 1)


# SECTION: separations between tangles

def _leftmost_feasible(oracle: ConnectivityOracle, feasible: np.ndarray) -> Optional[Subset]:
    candidates = np.flatnonzero(feasible)
    if candidates.size == 0:
        return None
    values = oracle.table()[candidates]
    best = values.min()
    meet = int(np.bitwise_and.reduce(candidates[values == best]))
    if not feasible[meet] or oracle.evaluate(meet) != best:
        raise IntegrityError(f"intersection {meet:#x} of the minimum separations is not one of them")
    return meet


def separation_table(first: TangleLike, second: TangleLike) -> np.ndarray:
    """Z with Z in the first tangle and its complement in the second."""
    oracle = first.oracle
    idx = all_subsets(oracle.n)
    return first.member_table() & second.member_table()[oracle.full ^ idx]


def leftmost_tangle_separation(first: TangleLike, second: TangleLike) -> Optional[Subset]:
    """Leftmost minimum (first, second)-separation; None when one truncates the other."""
    return _leftmost_feasible(first.oracle, separation_table(first, second))


def min_separation_order(first: TangleLike, second: TangleLike) -> Optional[int]:
    feasible = separation_table(first, second)
    if not feasible.any():
        return None
    return int(first.oracle.table()[feasible].min())


def tangle_set_separation(tangle: TangleLike, x: Subset) -> Optional[Subset]:
    """Leftmost minimum-order member of the tangle contained in X."""
    oracle = tangle.oracle
    x = oracle.check_subset(x)
    idx = all_subsets(oracle.n)
    return _leftmost_feasible(oracle, tangle.member_table() & ((idx & ~x) == 0))


__all__ = [
    "DecompositionClosure", "BaseMuIteration", "exists_tangle_avoiding", "has_tangle_of_order",
    "max_tangle_order", "TangleLike", "ExplicitTangle", "Tangle", "empty_tangle", "AxiomCheck",
    "check_axioms", "minimal_member_in_box", "minimal_member_in_lattice", "tangle_lattice_bottom",
    "separation_table", "leftmost_tangle_separation", "min_separation_order", "tangle_set_separation",
]
