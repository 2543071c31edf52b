import copy

from django.test import SimpleTestCase

from App_Tangles.decomposition import canonical_decomposition, directed_decomposition
from App_Tangles.exceptions import DomainError
from App_Tangles.export import (
    decomposition_from_json, decomposition_to_dot, decomposition_to_json, directed_to_dot, directed_to_json,
    graph_tree_decomposition, json_text, prune_empty_bags, verify_document,
)
from App_Tangles.instances import FIXTURE_DIR, fixture_graph
from App_Tangles.tangle_ds import TangleDataStructure

from . common import TRI1, TRI2, TRI3, triforce


# TEST FOR DECOMPOSITION DOCUMENTS
class DecompositionDocumentTestCase(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.oracle = triforce()
        cls.ds = TangleDataStructure.build(cls.oracle, 2)
        cls.ttd = canonical_decomposition(cls.oracle, 2, ds=cls.ds)
        cls.doc = decomposition_to_json(cls.ttd)

    def test_matches_the_golden_file(self):
        """Test the triforce document is byte-identical to the stored one"""
        golden = (FIXTURE_DIR / 'triforce_decomposition.json').read_text()
        self.assertEqual(json_text(self.doc), golden)

    def test_round_trip_verifies(self):
        again = decomposition_from_json(self.oracle, self.doc, self.ds)
        self.assertEqual(decomposition_to_json(again), self.doc)
        self.assertTrue(verify_document(self.oracle, self.doc, self.ds).ok)

    def test_moved_bags_are_reported(self):
        """Test a document whose bags disagree with its separations fails"""
        doc = copy.deepcopy(self.doc)
        doc['nodes'][1]['bag'], doc['nodes'][2]['bag'] = doc['nodes'][2]['bag'], doc['nodes'][1]['bag']
        report = verify_document(self.oracle, doc, self.ds)
        self.assertFalse(report.ok)
        self.assertIn('does not describe a tangle decomposition', report.violations[0])

    def test_wrong_node_kind_is_reported(self):
        doc = copy.deepcopy(self.doc)
        doc['nodes'][1]['kind'] = 'hub'
        del doc['nodes'][1]['tangleOrder']
        report = verify_document(self.oracle, doc, self.ds)
        self.assertEqual(report.violations, ['node 1 is listed as hub but is a tangle'])

    def test_bad_headers(self):
        doc = dict(self.doc, format='something-else')
        with self.assertRaises(DomainError):
            verify_document(self.oracle, doc, self.ds)
        with self.assertRaises(DomainError):
            verify_document(self.oracle, dict(self.doc, order=None), self.ds)
        report = verify_document(self.oracle, dict(self.doc, version=2), self.ds)
        self.assertFalse(report.ok)

    def test_dot(self):
        dot = decomposition_to_dot(self.ttd)
        self.assertTrue(dot.startswith('graph decomposition {\n'))
        self.assertIn('n0 -- n1 [label="1"];', dot)
        self.assertIn('tangle of order 2', dot)


# TEST FOR DIRECTED DOCUMENTS
class DirectedDocumentTestCase(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.oracle = triforce()
        cls.ds = TangleDataStructure.build(cls.oracle, 2)
        ttd = canonical_decomposition(cls.oracle, 2, ds=cls.ds)
        cls.root_index = next(i for i, node in ttd.tau.items() if ttd.bags[node] == TRI1)
        cls.dtd = directed_decomposition(cls.oracle, 2, cls.root_index, ttd=ttd)
        cls.doc = directed_to_json(cls.dtd)

    def test_layout(self):
        doc = self.doc
        self.assertEqual(doc['format'], 'directed-tangle-decomposition')
        self.assertEqual(doc['root'], 0)
        self.assertEqual(doc['nodes'][0]['cone'], list(range(9)))
        self.assertEqual(doc['nodes'][0]['bag'], [0, 1, 2])
        self.assertEqual(doc['nodes'][0]['tangleIndex'], self.root_index)
        self.assertEqual([n['cone'] for n in doc['nodes'][1:]], [[3, 4, 5], [6, 7, 8]])
        self.assertEqual(doc['edges'], [{'parent': 0, 'child': 1}, {'parent': 0, 'child': 2}])

    def test_verifies(self):
        self.assertTrue(verify_document(self.oracle, self.doc, self.ds).ok)

    def test_broken_cone_is_reported(self):
        doc = copy.deepcopy(self.doc)
        doc['nodes'][1]['cone'] = [3, 4, 5, 6]
        self.assertFalse(verify_document(self.oracle, doc, self.ds).ok)

    def test_dot(self):
        dot = directed_to_dot(self.dtd)
        self.assertTrue(dot.startswith('digraph decomposition {\n'))
        self.assertIn('n0 -> n1;', dot)


# TEST FOR POST-PASSES
class PostPassTestCase(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.oracle = triforce()
        cls.ttd = canonical_decomposition(cls.oracle, 2)

    def test_prune_merges_the_hub(self):
        """Test the empty hub is merged into its lowest neighbour"""
        pruned = prune_empty_bags(self.ttd)
        self.assertEqual(pruned.tree.number_of_nodes(), 3)
        self.assertEqual(sorted(pruned.bags.values()), sorted([TRI1, TRI2, TRI3]))
        self.assertLess(pruned.separations(), self.ttd.separations())

    def test_graph_tree_decomposition(self):
        G, edges = fixture_graph('triforce')
        tree = graph_tree_decomposition(G, edges, self.ttd)
        self.assertEqual(tree.nodes[0]['bag'], frozenset({0}))
        self.assertEqual(tree.nodes[1]['bag'], frozenset({0, 1, 2}))
        for u, v in G.edges:
            self.assertTrue(any({u, v} <= tree.nodes[node]['bag'] for node in tree.nodes))
