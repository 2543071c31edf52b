from itertools import product

from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st
import numpy as np

from App_Tangles.exceptions import DomainError, SizeGuardError
from App_Tangles.instances import load_fixture
from App_Tangles.oracles import base_constraint, brute_force_leftmost_separation
from App_Tangles.separations import (
    ExhaustiveMinimizer, kappa_min, leftmost_min_separation, rightmost_min_separation,
)
from App_Tangles.subsets import box

from . common import TRI1, TRI3, renamed

FIXTURES = ('p3', 'triforce', 'k4', 'grid3', 'c5rank', 'k4_matroid')


def random_pair(rng, n):
    """Disjoint X and Y with every element on X, on Y or free."""
    sides = rng.integers(0, 3, size=n)
    x = sum(1 << i for i in range(n) if sides[i] == 1)
    y = sum(1 << i for i in range(n) if sides[i] == 2)
    return x, y


def extreme_minimizers(oracle, x, y):
    """Meet and join of every minimizer over the box, read off the dense table."""
    candidates = box(x, oracle.full & ~y)
    values = oracle.table()[candidates]
    minimizers = candidates[values == values.min()]
    return int(np.bitwise_and.reduce(minimizers)), int(np.bitwise_or.reduce(minimizers))


# TEST FOR MINIMUM SEPARATIONS
class MinSeparationTestCase(SimpleTestCase):

    def setUp(self):
        self.oracle = load_fixture('triforce')

    def test_kappa_min_between_triangles(self):
        result = kappa_min(self.oracle, 0b1, 0b1000)
        self.assertEqual(result.value, 1)
        self.assertEqual(self.oracle.evaluate(result.witness), 1)

    def test_leftmost_and_rightmost(self):
        """Test the extreme minimum separations of two edges in different triangles"""
        self.assertEqual(leftmost_min_separation(self.oracle, 0b1, 0b1000), TRI1)
        self.assertEqual(rightmost_min_separation(self.oracle, 0b1, 0b1000), TRI1 | TRI3)

    def test_p3_end_edges(self):
        oracle = load_fixture('p3')
        self.assertEqual(leftmost_min_separation(oracle, 0b01, 0b10), 0b01)

    def test_overlapping_constraints(self):
        with self.assertRaises(DomainError):
            kappa_min(self.oracle, 0b11, 0b10)

    def test_exhaustive_minimizer_guard(self):
        """Test the minimizer refuses a box with too many free positions"""
        with self.assertRaises(SizeGuardError):
            kappa_min(self.oracle, 0, 0, minimizer=ExhaustiveMinimizer(max_free=3))

    def test_scan_agrees_with_pinning(self):
        self.assertEqual(brute_force_leftmost_separation(self.oracle, base_constraint(self.oracle, 0b1, 0b1000)),
                         TRI1)

    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_minimizers_lie_between_the_extremes(self, data):
        """Test every minimum separation lies between the leftmost and the rightmost"""
        oracle = self.oracle
        x = data.draw(st.integers(min_value=0, max_value=oracle.full), label='x')
        y = data.draw(st.integers(min_value=0, max_value=oracle.full & ~x), label='y') & ~x
        value = kappa_min(oracle, x, y).value
        left = leftmost_min_separation(oracle, x, y)
        right = rightmost_min_separation(oracle, x, y)
        self.assertEqual(oracle.evaluate(right), value)
        self.assertEqual(oracle.evaluate(left), value)
        for z in box(x, oracle.full & ~y):
            if oracle.evaluate(int(z)) == value:
                self.assertEqual(left & ~int(z), 0)
                self.assertEqual(int(z) & ~right, 0)


# TEST FOR SEPARATION INVARIANTS
class SeparationInvariantTestCase(SimpleTestCase):

    def test_kappa_min_is_monotone(self):
        """Test moving a free element onto either side never lowers the minimum"""
        rng = np.random.default_rng(31)
        for name in FIXTURES:
            oracle = load_fixture(name)
            for _ in range(15):
                x, y = random_pair(rng, oracle.n)
                value = kappa_min(oracle, x, y).value
                for e in range(oracle.n):
                    bit = 1 << e
                    if (x | y) & bit:
                        continue
                    self.assertGreaterEqual(kappa_min(oracle, x, y | bit).value, value, (name, x, y, e))
                    self.assertGreaterEqual(kappa_min(oracle, x | bit, y).value, value, (name, x, y, e))

    def test_extremes_follow_a_renaming(self):
        """Test renaming the elements renames the leftmost and rightmost minimum separations"""
        rng = np.random.default_rng(37)
        for name in FIXTURES:
            oracle = load_fixture(name)
            for _ in range(10):
                perm = [int(p) for p in rng.permutation(oracle.n)]
                image = oracle.permuted(perm)
                x, y = random_pair(rng, oracle.n)
                px, py = renamed(x, perm), renamed(y, perm)
                self.assertEqual(leftmost_min_separation(image, px, py),
                                 renamed(leftmost_min_separation(oracle, x, y), perm), (name, perm, x, y))
                self.assertEqual(rightmost_min_separation(image, px, py),
                                 renamed(rightmost_min_separation(oracle, x, y), perm), (name, perm, x, y))

    def test_extremes_on_every_small_box(self):
        """Test against the meet and join of all minimizers for every disjoint X, Y"""
        for name in ('p3', 'c5rank', 'k4', 'k4_matroid'):
            oracle = load_fixture(name)
            full = oracle.full
            for sides in product(range(3), repeat=oracle.n):
                x = sum(1 << i for i, side in enumerate(sides) if side == 1)
                y = sum(1 << i for i, side in enumerate(sides) if side == 2)
                meet, join = extreme_minimizers(oracle, x, y)
                left = leftmost_min_separation(oracle, x, y)
                right = rightmost_min_separation(oracle, x, y)
                self.assertEqual(left, meet, (name, x, y))
                self.assertEqual(right, join, (name, x, y))
                self.assertEqual(right, full & ~leftmost_min_separation(oracle, y, x), (name, x, y))

    def test_extremes_between_single_elements(self):
        for name in ('triforce', 'grid3'):
            oracle = load_fixture(name)
            for a in range(oracle.n):
                for b in range(oracle.n):
                    if a == b:
                        continue
                    meet, join = extreme_minimizers(oracle, 1 << a, 1 << b)
                    self.assertEqual(leftmost_min_separation(oracle, 1 << a, 1 << b), meet, (name, a, b))
                    self.assertEqual(rightmost_min_separation(oracle, 1 << a, 1 << b), join, (name, a, b))
