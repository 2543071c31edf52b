from django.test import SimpleTestCase
import networkx as nx
import numpy as np

from App_Tangles.connectivity import edge_boundary_fn, verify_axioms
from App_Tangles.exceptions import IntegrityError, SizeGuardError
from App_Tangles.instances import load_fixture
from App_Tangles.oracles import (
    box_constraint, brute_force_branch_width, brute_force_leftmost_separation, brute_force_tangles,
    canonicity_harness, duality_sweep, random_instances, tangle_pair_constraint,
)
from App_Tangles.separations import leftmost_min_separation
from App_Tangles.tangle_ds import TangleDataStructure
from App_Tangles.tangles import check_axioms, leftmost_tangle_separation, max_tangle_order

from . common import TRI1, TRIANGLES, triforce


# TEST FOR BRUTE FORCE TANGLES
class BruteForceTangleTestCase(SimpleTestCase):

    def test_triforce_counts(self):
        """Test one tangle of orders 0 and 1 and three of order 2"""
        oracle = triforce()
        self.assertEqual([len(brute_force_tangles(oracle, k)) for k in range(3)], [1, 1, 3])
        self.assertEqual(brute_force_tangles(load_fixture('p3'), 2), [])

    def test_found_tangles_satisfy_the_axioms(self):
        oracle = load_fixture('c5rank')
        for tangle in brute_force_tangles(oracle, 2):
            self.assertTrue(check_axioms(oracle, tangle.member_table(), 2).ok)

    def test_size_guard(self):
        with self.assertRaises(SizeGuardError):
            brute_force_tangles(load_fixture('grid3'), 2)


# TEST FOR BRUTE FORCE BRANCH WIDTH
class BruteForceBranchWidthTestCase(SimpleTestCase):

    def test_small_instances(self):
        expected = {'p3': 1, 'c5rank': 2, 'k4': 3, 'k4_matroid': 2}
        for name, width in expected.items():
            self.assertEqual(brute_force_branch_width(load_fixture(name)), width, name)

    def test_single_element(self):
        self.assertEqual(brute_force_branch_width(edge_boundary_fn(nx.path_graph(2))), 0)

    def test_size_guard(self):
        with self.assertRaises(SizeGuardError):
            brute_force_branch_width(triforce())

    def test_matches_the_largest_tangle_order(self):
        for name in ('p3', 'c5rank', 'k4', 'k4_matroid'):
            oracle = load_fixture(name)
            self.assertEqual(max_tangle_order(oracle), brute_force_branch_width(oracle), name)


# TEST FOR BRUTE FORCE SEPARATIONS
class BruteForceSeparationTestCase(SimpleTestCase):

    def test_box_scan_matches_pinning(self):
        oracle = triforce()
        for x, y in ((0b1, 0b1000), (0b1000, 0b1000000), (0b11, 0b100000000)):
            feasible = box_constraint(oracle, x, oracle.full & ~y)
            self.assertEqual(brute_force_leftmost_separation(oracle, feasible),
                             leftmost_min_separation(oracle, x, y))

    def test_tangle_pairs(self):
        """Test the scan over a tangle pair table matches the tangle separation"""
        oracle = triforce()
        tangles = brute_force_tangles(oracle, 2)
        for a in tangles:
            for b in tangles:
                if a is not b:
                    found = brute_force_leftmost_separation(oracle, tangle_pair_constraint(a, b))
                    self.assertIn(found, TRIANGLES)
                    self.assertEqual(found, leftmost_tangle_separation(a, b))

    def test_empty_and_broken_tables(self):
        oracle = triforce()
        self.assertIsNone(brute_force_leftmost_separation(oracle, np.zeros(oracle.full + 1, dtype=bool)))
        feasible = np.zeros(oracle.full + 1, dtype=bool)
        feasible[[0b111000, 0b111000000]] = True
        with self.assertRaises(IntegrityError):
            brute_force_leftmost_separation(oracle, feasible)


# TEST FOR HARNESSES
class HarnessTestCase(SimpleTestCase):

    def test_duality_sweep(self):
        """Test largest tangle order equals branch width on small atlas graphs"""
        report = duality_sweep()
        self.assertGreaterEqual(report.checked, 70)
        self.assertTrue(report.ok, report.mismatches)

    def test_random_instances_are_connectivity_functions(self):
        seen = set()
        for name, oracle in random_instances(6, seed=11):
            seen.add(name.split('#')[0])
            self.assertTrue(verify_axioms(oracle).ok, name)
        self.assertEqual(seen, {'edge-boundary', 'cut-rank', 'matroid'})

    def test_random_instances_are_reproducible(self):
        first = [(name, oracle.n) for name, oracle in random_instances(4, seed=5)]
        second = [(name, oracle.n) for name, oracle in random_instances(4, seed=5)]
        self.assertEqual(first, second)

    def test_canonicity_of_the_triforce(self):
        """Test renaming the elements renames the decomposition"""
        report = canonicity_harness(triforce(), 2, trials=2, seed=1)
        self.assertTrue(report.ok, report.failures)
        self.assertEqual(report.passes, 2)
        self.assertEqual(report.as_dict()['seed'], 1)

    def test_canonicity_of_directed_decompositions(self):
        """Test renaming commutes with the directed decompositions rooted at every maximal tangle"""
        orders = {'triforce': 2, 'k4': 3, 'c5rank': 2, 'grid3': 2, 'k4_matroid': 2}
        for seed, (name, order) in enumerate(orders.items(), start=4):
            report = canonicity_harness(load_fixture(name), order, trials=10, seed=seed, directed=True)
            self.assertTrue(report.ok, (name, report.failures))
            self.assertEqual((report.trials, report.passes), (10, 10), name)
            self.assertEqual(report.as_dict()['seed'], seed)

    def test_tangle_count_bounds(self):
        """Test at most n tangles per order and at most n - 1 maximal ones on random instances"""
        for name, oracle in random_instances(200, seed=23):
            n = oracle.n
            ds = TangleDataStructure.build(oracle, 3)
            for order in range(4):
                self.assertLessEqual(len(ds.indices(order)), n, (name, order))
                if n >= 2:
                    self.assertLessEqual(len(ds.maximal_indices(order)), n - 1, (name, order))
            self.assertEqual(ds.integrity_report(), [], name)

    def test_leftmost_triangle(self):
        self.assertEqual(leftmost_min_separation(triforce(), 0b1, 0b1000), TRI1)
