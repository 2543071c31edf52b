from django.test import SimpleTestCase

from App_Tangles.exceptions import DomainError, SizeGuardError
from App_Tangles.instances import load_fixture
from App_Tangles.oracles import brute_force_leftmost_separation, brute_force_tangles, tangle_pair_constraint
from App_Tangles.tangle_ds import TangleDataStructure

from . common import TRIANGLES, triangle_of, triforce


# TEST FOR THE TANGLE DATA STRUCTURE
class TangleDataStructureTestCase(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.oracle = triforce()
        cls.ds = TangleDataStructure.build(cls.oracle, 2)

    def test_sizes_and_indices(self):
        """Test numbering of the triforce: empty tangle, one of order 1, three of order 2"""
        ds = self.ds
        self.assertEqual([ds.size(0), ds.size(1), ds.size(2)], [1, 2, 5])
        self.assertEqual(list(ds.indices(2)), [3, 4, 5])
        self.assertEqual([ds.order(i) for i in ds.indices()], [0, 1, 2, 2, 2])
        self.assertEqual(ds.maximal_indices(), [3, 4, 5])
        self.assertEqual(ds.maximal_indices(1), [2])

    def test_index_out_of_range(self):
        with self.assertRaises(DomainError):
            self.ds.order(6)
        with self.assertRaises(DomainError):
            self.ds.size(3)

    def test_find_returns_each_index(self):
        for i in self.ds.indices():
            self.assertEqual(self.ds.find(self.ds.order(i), self.ds.tangle(i).contains), i)

    def test_truncation(self):
        for i in self.ds.indices(2):
            self.assertEqual(self.ds.truncation(i, 1), 2)
            self.assertEqual(self.ds.truncation(i, 0), 1)
            self.assertEqual(self.ds.truncation(i, 2), i)

    def test_separation_is_the_triangle(self):
        """Test the separation of two order-2 tangles is the first one's triangle"""
        for i in self.ds.indices(2):
            for j in self.ds.indices(2):
                if i != j:
                    self.assertEqual(self.ds.separation(i, j), triangle_of(self.ds.tangle(i)))
        self.assertEqual(self.ds.findings, [])

    def test_separation_of_comparable_tangles(self):
        self.assertIsNone(self.ds.separation(2, 3))
        with self.assertRaises(DomainError):
            self.ds.separation(3, 3)

    def test_membership(self):
        i = self.ds.indices(2)[0]
        triangle = triangle_of(self.ds.tangle(i))
        self.assertTrue(self.ds.membership(i, triangle))
        self.assertEqual(sum(self.ds.membership(i, x) for x in TRIANGLES), 1)

    def test_matches_brute_force(self):
        """Test the stored tangles are exactly the backtracking ones"""
        for k in range(3):
            fast = sorted(sorted(self.ds.tangle(i).key()[1]) for i in self.ds.indices(k))
            slow = sorted(sorted(t.key()[1]) for t in brute_force_tangles(self.oracle, k))
            self.assertEqual(fast, slow)

    def test_new_orders(self):
        self.assertTrue(self.ds.introduces_new_order(2))
        self.assertFalse(self.ds.introduces_new_order(0))

    def test_integrity(self):
        self.assertEqual(self.ds.integrity_report(), [])

    def test_json_round_trip(self):
        doc = self.ds.to_json()
        self.assertEqual(doc['format'], 'tangle-ds')
        self.assertEqual(doc['n'], 9)
        again = TangleDataStructure.from_json(self.oracle, doc)
        self.assertEqual(again.to_json(), doc)
        for i in self.ds.indices():
            self.assertEqual(again.tangle(i).key(), self.ds.tangle(i).key())

    def test_json_for_another_instance(self):
        with self.assertRaises(DomainError):
            TangleDataStructure.from_json(load_fixture('k4'), self.ds.to_json())
        with self.assertRaises(DomainError):
            TangleDataStructure.from_json(self.oracle, {'format': 'other', 'version': 1})


# TEST FOR OTHER INSTANCES
class OtherStructuresTestCase(SimpleTestCase):

    def test_p3_stops_at_order_one(self):
        ds = TangleDataStructure.build(load_fixture('p3'), 2)
        self.assertEqual(ds.size(2), 2)
        self.assertEqual(ds.size(1), 2)
        self.assertEqual(list(ds.indices(2)), [])
        self.assertEqual(ds.to_json()['levels'][2]['tree'], None)

    def test_k4_has_no_sets_of_order_one(self):
        """Test K4 gains no new order at 2 but does at 3"""
        ds = TangleDataStructure.build(load_fixture('k4'), 3)
        self.assertFalse(ds.introduces_new_order(2))
        self.assertTrue(ds.introduces_new_order(3))
        self.assertEqual(len(ds.indices(3)), 1)
        self.assertEqual(ds.integrity_report(), [])

    def test_unvalidated_separations_match_the_scan(self):
        """Test the minimal member below the separator is the leftmost minimum separation"""
        orders = {'p3': 1, 'triforce': 2, 'c5rank': 2, 'k4': 3, 'k4_matroid': 2, 'grid3': 2}
        for name, order in orders.items():
            ds = TangleDataStructure.build(load_fixture(name), order)
            for i in ds.indices():
                for j in ds.indices():
                    if i == j:
                        continue
                    top = min(ds.order(i), ds.order(j))
                    split = next((level for level in range(1, top + 1)
                                  if ds.truncation(i, level) != ds.truncation(j, level)), None)
                    if split is None:
                        self.assertIsNone(ds.separation(i, j, validate=False), (name, i, j))
                        continue
                    first, second = ds.tangle(ds.truncation(i, split)), ds.tangle(ds.truncation(j, split))
                    expected = brute_force_leftmost_separation(ds.oracle, tangle_pair_constraint(first, second))
                    self.assertEqual(ds.separation(i, j, validate=False), expected, (name, i, j))
            self.assertEqual(ds.findings, [], name)

    def test_order_guards(self):
        with self.assertRaises(SizeGuardError):
            TangleDataStructure.build(triforce(), 5)
        with self.assertRaises(DomainError):
            TangleDataStructure.build(triforce(), -1)
