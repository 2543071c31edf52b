"""
Constrained minimization of a connectivity function and the leftmost and
rightmost minimum (X, Y)-separations.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Protocol, Tuple

import numpy as np

from . conf import setting
from . connectivity import ConnectivityOracle
from . exceptions import DomainError, SizeGuardError
from . subsets import Subset, box, popcount

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MinSeparationResult:
    value: int
    witness: Subset


class Minimizer(Protocol):
    def minimize(self, oracle: ConnectivityOracle, lower: Subset, upper: Subset) -> Tuple[int, Subset]:
        ...


def box_values(oracle: ConnectivityOracle, candidates: np.ndarray) -> np.ndarray:
    if oracle.has_table() or oracle.n <= setting('TANGLES_DENSE_TABLE_LIMIT'):
        return oracle.table()[candidates]
    return oracle.values(candidates)


class ExhaustiveMinimizer:
    """Scans the whole sandwich lattice; the first minimizer in ascending order wins."""

    def __init__(self, max_free: Optional[int] = None):
        self.max_free = max_free

    def minimize(self, oracle, lower, upper):
        max_free = setting('TANGLES_MAX_FREE_POSITIONS') if self.max_free is None else self.max_free
        free = popcount(upper & ~lower)
        if free > max_free:
            raise SizeGuardError("free positions of exhaustive minimizer", max_free, free)
        candidates = box(lower, upper)
        values = box_values(oracle, candidates)
        best = int(np.argmin(values))
        return int(values[best]), int(candidates[best])


_default_minimizer: Minimizer = ExhaustiveMinimizer()


def set_default_minimizer(minimizer: Minimizer) -> None:
    global _default_minimizer
    _default_minimizer = minimizer


def _disjoint(x: Subset, y: Subset) -> None:
    if x & y:
        raise DomainError(f"separation constraints overlap: {x:#x} & {y:#x}")


def kappa_min(oracle: ConnectivityOracle, x: Subset, y: Subset,
              minimizer: Optional[Minimizer] = None) -> MinSeparationResult:
    """min kappa(Z) over X <= Z <= complement(Y)."""
    oracle.check_subset(x)
    oracle.check_subset(y)
    _disjoint(x, y)
    value, witness = (minimizer or _default_minimizer).minimize(oracle, x, oracle.full & ~y)
    return MinSeparationResult(value, witness)


def leftmost_min_separation(oracle: ConnectivityOracle, x: Subset, y: Subset,
                            minimizer: Optional[Minimizer] = None) -> Subset:
    """
    The inclusion-least minimum (X, Y)-separation.

    Pins elements to the Y side one at a time in ascending id order while the
    minimum value is unchanged; what is never pinned is the answer.
    """
    value = kappa_min(oracle, x, y, minimizer).value
    pinned = y
    for u in range(oracle.n):
        bit = 1 << u
        if (x | pinned) & bit:
            continue
        if kappa_min(oracle, x, pinned | bit, minimizer).value == value:
            pinned |= bit
    return oracle.full & ~pinned


def rightmost_min_separation(oracle: ConnectivityOracle, x: Subset, y: Subset,
                             minimizer: Optional[Minimizer] = None) -> Subset:
    return oracle.full & ~leftmost_min_separation(oracle, y, x, minimizer)


__all__ = [
    "MinSeparationResult", "Minimizer", "ExhaustiveMinimizer", "set_default_minimizer",
    "box_values", "kappa_min", "leftmost_min_separation", "rightmost_min_separation",
]
