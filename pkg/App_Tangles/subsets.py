"""
Subsets of a ground set {0, ..., n-1} stored as plain ints.

Bit i of a subset is set iff element i belongs to it. Dense families of
subsets are numpy boolean arrays of length 2**n indexed by the subset's int
value, and the closure helpers at the bottom operate on those.
"""

from functools import lru_cache
from typing import Iterable, List

import numpy as np

Subset = int

EMPTY: Subset = 0


def full_mask(n: int) -> Subset:
    return (1 << n) - 1


def complement(x: Subset, n: int) -> Subset:
    return full_mask(n) ^ x


def popcount(x: Subset) -> int:
    return x.bit_count()


def members(x: Subset) -> List[int]:
    """Ids in x, ascending."""
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def from_ids(ids: Iterable[int]) -> Subset:
    x = 0
    for i in ids:
        if i < 0:
            raise ValueError(f"element id must be nonnegative, got {i}")
        x |= 1 << i
    return x


def is_subset(x: Subset, y: Subset) -> bool:
    return x & ~y == 0


def singletons(n: int) -> List[Subset]:
    return [1 << i for i in range(n)]


@lru_cache(maxsize=64)
def _submask_offsets(free: Subset) -> np.ndarray:
    offsets = np.zeros(1, dtype=np.int64)
    for bit in members(free):
        offsets = np.concatenate([offsets, offsets + (1 << bit)])
    offsets.setflags(write=False)
    return offsets


def submask_array(free: Subset) -> np.ndarray:
    """Every submask of `free`, ascending, as an int64 array."""
    return _submask_offsets(free)


def box(lower: Subset, upper: Subset) -> np.ndarray:
    """All Z with lower <= Z <= upper, ascending."""
    if lower & ~upper:
        return np.zeros(0, dtype=np.int64)
    return lower | submask_array(upper & ~lower)


def all_subsets(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def popcounts(n: int) -> np.ndarray:
    """popcount of every subset of an n-element ground set."""
    counts = np.zeros(1, dtype=np.int8)
    for _ in range(n):
        counts = np.concatenate([counts, counts + 1])
    return counts


def superset_any(table: np.ndarray, n: int) -> np.ndarray:
    """out[X] is true iff table[Y] for some Y containing X (upper closure, seen from X)."""
    v = table.copy()
    for b in range(n):
        view = v.reshape(-1, 2, 1 << b)
        view[:, 0, :] |= view[:, 1, :]
    return v


def subset_any(table: np.ndarray, n: int) -> np.ndarray:
    """out[X] is true iff table[Y] for some Y contained in X."""
    v = table.copy()
    for b in range(n):
        view = v.reshape(-1, 2, 1 << b)
        view[:, 1, :] |= view[:, 0, :]
    return v


def down_closure(table: np.ndarray, n: int) -> np.ndarray:
    """The family of all subsets of members of `table`."""
    return superset_any(table, n)


def up_closure(table: np.ndarray, n: int) -> np.ndarray:
    """The family of all supersets of members of `table`."""
    return subset_any(table, n)


def maximal_members(table: np.ndarray, n: int) -> np.ndarray:
    """Indices X with table[X] and no strict superset in the family."""
    above = superset_any(table, n)
    strict = np.zeros_like(table)
    idx = np.arange(table.shape[0], dtype=np.int64)
    for b in range(n):
        missing = (idx >> b) & 1 == 0
        strict[missing] |= above[idx[missing] | (1 << b)]
    return np.flatnonzero(table & ~strict)


def minimal_members(table: np.ndarray, n: int) -> np.ndarray:
    """Indices X with table[X] and no strict subset in the family."""
    below = subset_any(table, n)
    strict = np.zeros_like(table)
    idx = np.arange(table.shape[0], dtype=np.int64)
    for b in range(n):
        present = (idx >> b) & 1 == 1
        strict[present] |= below[idx[present] ^ (1 << b)]
    return np.flatnonzero(table & ~strict)


def minimal_of(family: Iterable[Subset]) -> List[Subset]:
    """Inclusion-minimal elements of a sparse family, sorted."""
    items = sorted(set(family), key=lambda x: (popcount(x), x))
    kept: List[Subset] = []
    for x in items:
        if not any(y & ~x == 0 for y in kept):
            kept.append(x)
    return sorted(kept)


__all__ = [
    "Subset", "EMPTY", "full_mask", "complement", "popcount", "members",
    "from_ids", "is_subset", "singletons", "submask_array", "box",
    "all_subsets", "popcounts", "superset_any", "subset_any",
    "down_closure", "up_closure", "maximal_members", "minimal_members",
    "minimal_of",
]
