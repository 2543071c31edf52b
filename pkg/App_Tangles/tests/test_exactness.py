from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st
import networkx as nx
import numpy as np

from App_Tangles.exactness import (
    PartialDecomposition, exactify, random_cubic_tree, random_partial_decomposition, width,
)
from App_Tangles.exceptions import DomainError
from App_Tangles.instances import load_fixture


# TEST FOR PARTIAL DECOMPOSITIONS
class PartialDecompositionTestCase(SimpleTestCase):

    def setUp(self):
        self.oracle = load_fixture('k4')
        self.tree = nx.Graph([(0, 3), (1, 3), (2, 3)])

    def test_overlapping_leaf_sets(self):
        """Test overlapping leaf sets give a valid but inexact decomposition"""
        pd = PartialDecomposition.from_leaf_sets(self.oracle, self.tree, {0: 0b000011, 1: 0b001110, 2: 0b111000})
        self.assertTrue(pd.is_valid())
        self.assertFalse(pd.is_exact())
        exact = exactify(pd)
        self.assertTrue(exact.is_exact())
        self.assertLessEqual(width(exact), width(pd))

    def test_partition_is_already_exact(self):
        pd = PartialDecomposition.from_leaf_sets(self.oracle, self.tree, {0: 0b000011, 1: 0b001100, 2: 0b110000})
        self.assertTrue(pd.is_exact())
        self.assertEqual(exactify(pd).leaf_sets(), pd.leaf_sets())

    def test_uncovered_ground_set(self):
        with self.assertRaises(DomainError):
            PartialDecomposition.from_leaf_sets(self.oracle, self.tree, {0: 0b1, 1: 0b10, 2: 0b100})

    def test_invalid_labels(self):
        """Test labels that are not complementary are refused by exactify"""
        xi = {(0, 3): 0b1, (3, 0): 0b1, (1, 3): 0b10, (3, 1): 0b111101, (2, 3): 0b100, (3, 2): 0b111011}
        pd = PartialDecomposition(self.oracle, self.tree, xi)
        self.assertFalse(pd.is_valid())
        with self.assertRaises(DomainError):
            exactify(pd)

    def test_missing_direction(self):
        with self.assertRaises(DomainError):
            PartialDecomposition(self.oracle, nx.Graph([(0, 1)]), {(0, 1): 0b1})


# TEST FOR THE EXACTNESS REWRITE
class ExactifyTestCase(SimpleTestCase):

    def test_random_cubic_tree(self):
        tree = random_cubic_tree(6, np.random.default_rng(3))
        self.assertTrue(nx.is_tree(tree))
        self.assertEqual(sorted(v for v in tree.nodes if tree.degree(v) == 1), list(range(6)))
        self.assertTrue(all(tree.degree(v) == 3 for v in tree.nodes if v >= 6))

    @given(st.sampled_from(['triforce', 'k4', 'c5rank', 'k4_matroid']), st.integers(min_value=0, max_value=10 ** 6))
    @settings(max_examples=40, deadline=None)
    def test_exactify_properties(self, name, seed):
        """Test the rewrite is exact, never raises an edge order and only shrinks leaf sets"""
        oracle = load_fixture(name)
        pd = random_partial_decomposition(oracle, np.random.default_rng(seed))
        self.assertTrue(pd.is_valid())
        exact = exactify(pd)
        self.assertTrue(exact.is_exact())
        before, after = pd.edge_orders(), exact.edge_orders()
        for edge, order in after.items():
            self.assertLessEqual(order, before[edge])
        old = pd.leaf_sets()
        for leaf, x in exact.leaf_sets().items():
            self.assertEqual(x & ~old[leaf], 0)
