"""
Free sets, bases and the lattices L(B1, B2) they span.

A pair (B1, B2) of disjoint sets is a base when kappa_min(B1, B2) is at least
max(|B1|, |B2|). Its lattice L(B1, B2) holds every X with B1 free in X and B2
free in the complement; all members share the order kappa_min(B1, B2), and
they are exactly the minimum (B1, B2)-separations.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional

import numpy as np

from . conf import setting
from . connectivity import ConnectivityOracle
from . exceptions import DomainError, SizeGuardError
from . separations import box_values, kappa_min, leftmost_min_separation, rightmost_min_separation
from . subsets import Subset, box, members, popcount

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Base:
    b1: Subset
    b2: Subset
    order: int


@dataclass(frozen=True)
class Lattice:
    bottom: Subset
    top: Subset
    order: int
    base: Base
    members: np.ndarray = field(compare=False, repr=False)

    @property
    def key(self):
        return (self.order, self.bottom, self.top)


def free_subset(oracle: ConnectivityOracle, x: Subset) -> Subset:
    """
    A subset Y of X with kappa_min(Y, complement X) == kappa(X).

    Elements are deleted greedily, highest id first, while the condition
    still holds; the survivor keeps the lowest ids.
    """
    target = oracle.evaluate(x)
    outside = oracle.full & ~x
    y = x
    for e in reversed(members(x)):
        candidate = y & ~(1 << e)
        if kappa_min(oracle, candidate, outside).value == target:
            y = candidate
    return y


def is_base(oracle: ConnectivityOracle, b1: Subset, b2: Subset) -> bool:
    if b1 & b2:
        raise DomainError(f"base sides overlap: {b1:#x} & {b2:#x}")
    return kappa_min(oracle, b1, b2).value >= max(popcount(b1), popcount(b2))


def _small_subsets(n: int, k: int) -> List[Subset]:
    out = []
    for size in range(k + 1):
        for combo in combinations(range(n), size):
            x = 0
            for i in combo:
                x |= 1 << i
            out.append(x)
    return sorted(out)


def enumerate_bases(oracle: ConnectivityOracle, k: int) -> List[Base]:
    """All bases of order at most k, sorted by (b1, b2)."""
    limit = setting('TANGLES_MAX_BASE_ORDER')
    if k > limit:
        raise SizeGuardError("base order limit", limit, k)
    if k < 0:
        return []
    candidates = _small_subsets(oracle.n, k)
    bases = []
    for b1 in candidates:
        for b2 in candidates:
            if b1 & b2:
                continue
            value = kappa_min(oracle, b1, b2).value
            if value <= k and value >= max(popcount(b1), popcount(b2)):
                bases.append(Base(b1, b2, value))
    bases.sort(key=lambda b: (b.b1, b.b2))
    logger.debug(f"{len(bases)} bases of order <= {k} for {oracle.name}")
    return bases


def base_for_set(oracle: ConnectivityOracle, x: Subset) -> Base:
    return Base(free_subset(oracle, x), free_subset(oracle, oracle.full & ~x), oracle.evaluate(x))


def _require_base(oracle: ConnectivityOracle, base: Base) -> None:
    if not is_base(oracle, base.b1, base.b2):
        raise DomainError(f"({base.b1:#x}, {base.b2:#x}) is not a base")


def lattice_bottom(oracle: ConnectivityOracle, base: Base) -> Subset:
    """Least member of L(B): the leftmost minimum (b1, b2)-separation."""
    _require_base(oracle, base)
    return leftmost_min_separation(oracle, base.b1, base.b2)


def lattice_top(oracle: ConnectivityOracle, base: Base) -> Subset:
    _require_base(oracle, base)
    return rightmost_min_separation(oracle, base.b1, base.b2)


def lattice_members(oracle: ConnectivityOracle, base: Base) -> np.ndarray:
    """Every member of L(B), ascending."""
    candidates = box(base.b1, oracle.full & ~base.b2)
    order = kappa_min(oracle, base.b1, base.b2).value
    return candidates[box_values(oracle, candidates) == order]


def lattice_of(oracle: ConnectivityOracle, base: Base) -> Lattice:
    found = lattice_members(oracle, base)
    bottom = int(np.bitwise_and.reduce(found))
    top = int(np.bitwise_or.reduce(found))
    return Lattice(bottom, top, base.order, base, found)


def distinct_lattices(oracle: ConnectivityOracle, k: int, bases: Optional[List[Base]] = None) -> List[Lattice]:
    """The different lattices L(B) over bases of order <= k, ordered by (order, bottom, top)."""
    seen = {}
    for base in (enumerate_bases(oracle, k) if bases is None else bases):
        lattice = lattice_of(oracle, base)
        seen.setdefault(lattice.key, lattice)
    return [seen[key] for key in sorted(seen)]


__all__ = [
    "Base", "Lattice", "free_subset", "is_base", "enumerate_bases", "base_for_set",
    "lattice_bottom", "lattice_top", "lattice_members", "lattice_of", "distinct_lattices",
]
