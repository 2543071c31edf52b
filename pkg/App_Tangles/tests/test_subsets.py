from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st
import numpy as np

from App_Tangles.subsets import (
    box, complement, down_closure, from_ids, full_mask, maximal_members, members,
    minimal_members, minimal_of, popcount, submask_array, up_closure,
)


# TEST FOR BIT SUBSETS
class SubsetHelpersTestCase(SimpleTestCase):

    def test_members_and_from_ids(self):
        """Test ids come back ascending"""
        self.assertEqual(members(0b1011), [0, 1, 3])
        self.assertEqual(from_ids([3, 0, 1]), 0b1011)
        self.assertEqual(members(0), [])

    def test_from_ids_rejects_negative(self):
        """Test a negative id is refused"""
        with self.assertRaises(ValueError):
            from_ids([-1])

    def test_box_lists_the_sandwich(self):
        """Test box enumerates every set between the bounds"""
        self.assertEqual(box(0b001, 0b011).tolist(), [1, 3])
        self.assertEqual(box(0b100, 0b011).tolist(), [])
        self.assertEqual(submask_array(0b101).tolist(), [0, 1, 4, 5])

    def test_minimal_of(self):
        self.assertEqual(minimal_of([3, 1, 6, 4]), [1, 4])
        self.assertEqual(minimal_of([]), [])

    @given(st.integers(min_value=1, max_value=10), st.data())
    @settings(max_examples=50)
    def test_complement_partitions_the_ground_set(self, n, data):
        """Test a set and its complement split the ground set"""
        x = data.draw(st.integers(min_value=0, max_value=full_mask(n)))
        self.assertEqual(complement(complement(x, n), n), x)
        self.assertEqual(popcount(x) + popcount(complement(x, n)), n)
        self.assertEqual(x & complement(x, n), 0)


# TEST FOR DENSE FAMILIES
class DenseFamilyTestCase(SimpleTestCase):

    def table(self, n, items):
        t = np.zeros(1 << n, dtype=bool)
        t[items] = True
        return t

    def test_down_closure(self):
        self.assertTrue(down_closure(self.table(2, [0b11]), 2).all())
        self.assertEqual(np.flatnonzero(down_closure(self.table(3, [0b101]), 3)).tolist(), [0, 1, 4, 5])

    def test_up_closure(self):
        self.assertEqual(np.flatnonzero(up_closure(self.table(2, [0b01]), 2)).tolist(), [1, 3])

    def test_extreme_members(self):
        """Test maximal and minimal members of a small family"""
        t = self.table(2, [1, 2, 3])
        self.assertEqual(maximal_members(t, 2).tolist(), [3])
        self.assertEqual(minimal_members(t, 2).tolist(), [1, 2])

    @given(st.lists(st.integers(min_value=0, max_value=63), min_size=1, max_size=6))
    @settings(max_examples=30)
    def test_closures_match_a_direct_scan(self, items):
        """Test dense closures against pairwise subset checks"""
        t = self.table(6, items)
        down = down_closure(t, 6)
        up = up_closure(t, 6)
        for x in range(64):
            self.assertEqual(down[x], any(x & ~y == 0 for y in items))
            self.assertEqual(up[x], any(y & ~x == 0 for y in items))
