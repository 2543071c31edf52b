import json
import tempfile
from io import StringIO
from pathlib import Path
from unittest.mock import patch

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase

from App_Tangles.cli import run
from App_Tangles.connectivity import AxiomReport
from App_Tangles.instances import FIXTURE_DIR
from App_Tangles.models import StructureCache


# TEST FOR MANAGEMENT COMMANDS
class TanglesCommandTestCase(TestCase):
    def setUp(self):
        self.triforce = str(FIXTURE_DIR / 'triforce.txt')
        self.p3 = str(FIXTURE_DIR / 'p3.txt')
        self.golden = str(FIXTURE_DIR / 'triforce_decomposition.json')
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def call(self, *args):
        out, err = StringIO(), StringIO()
        call_command(*args, stdout=out, stderr=err)
        return out.getvalue(), err.getvalue()

    def write(self, name, text):
        path = Path(self.tmp.name) / name
        path.write_text(text)
        return str(path)

    # TANGLES
    def test_tangles_census(self):
        out, _ = self.call('tangles', self.triforce, '--order', '2')
        census = json.loads(out)
        self.assertEqual([level['count'] for level in census['orders']], [1, 1, 3])

    def test_tangles_of_order_zero(self):
        """Test order 0 lists only the empty tangle"""
        out, _ = self.call('tangles', self.p3, '--order', '0')
        self.assertEqual(json.loads(out)['size'], 1)

    def test_tangles_cache_flag(self):
        self.call('tangles', self.triforce, '--order', '2', '--cache')
        self.call('tangles', self.triforce, '--order', '2', '--cache')
        self.assertEqual(StructureCache.objects.count(), 1)

    def test_stats_go_to_stderr(self):
        _, err = self.call('tangles', self.p3, '--order', '1', '--stats')
        self.assertTrue(err.startswith('oracle calls: '))

    def test_stats_agree_across_engines(self):
        """Test both engines report the same count, since both read the dense table"""
        _, closure = self.call('tangles', self.triforce, '--order', '2', '--stats', '--engine', 'closure')
        _, mu = self.call('tangles', self.triforce, '--order', '2', '--stats', '--engine', 'mu')
        self.assertEqual(closure, mu)
        self.assertGreaterEqual(int(closure.split(': ')[1]), 2 ** 9)

    # BRANCH WIDTH
    def test_branchwidth(self):
        out, _ = self.call('branchwidth', self.p3)
        self.assertEqual(out, '1\n')

    def test_branchwidth_brute(self):
        out, _ = self.call('branchwidth', str(FIXTURE_DIR / 'c5.txt'), '--fn', 'cut-rank', '--brute')
        self.assertEqual(out, '2\nbrute force: 2\n')

    # DECOMPOSE
    def test_decompose_matches_the_golden_file(self):
        """Test the printed document is byte-identical to the stored one"""
        out, _ = self.call('decompose', self.triforce, '--order', '2')
        self.assertEqual(out, Path(self.golden).read_text())

    def test_decompose_output_and_dot_files(self):
        target = str(Path(self.tmp.name) / 'triforce.json')
        dot = str(Path(self.tmp.name) / 'triforce.dot')
        out, _ = self.call('decompose', self.triforce, '--order', '2', '--output', target, '--dot', dot)
        self.assertEqual(out, '')
        self.assertEqual(Path(target).read_text(), Path(self.golden).read_text())
        self.assertTrue(Path(dot).read_text().startswith('graph decomposition {'))

    def test_decompose_prune(self):
        out, _ = self.call('decompose', self.triforce, '--order', '2', '--prune')
        self.assertEqual(len(json.loads(out)['nodes']), 3)

    def test_directed(self):
        out, _ = self.call('directed', self.triforce, '--order', '2', '--root-index', '4')
        doc = json.loads(out)
        self.assertEqual(doc['format'], 'directed-tangle-decomposition')
        self.assertEqual(len(doc['edges']), 2)

    # VERIFY
    def test_verify_golden_file(self):
        out, _ = self.call('verify', self.golden, self.triforce)
        self.assertTrue(json.loads(out)['ok'])

    def test_verify_tampered_file(self):
        """Test a tampered document exits with the verification code"""
        doc = json.loads(Path(self.golden).read_text())
        doc['nodes'][2]['tangleOrder'] = 1
        path = self.write('tampered.json', json.dumps(doc))
        with self.assertRaises(CommandError) as caught:
            self.call('verify', path, self.triforce)
        self.assertEqual(caught.exception.returncode, 2)

    def test_verify_unreadable_json(self):
        path = self.write('broken.json', '{\n"format":\n')
        with self.assertRaises(CommandError) as caught:
            self.call('verify', path, self.triforce)
        self.assertEqual(caught.exception.returncode, 3)

    # SELF CHECK
    def test_selfcheck(self):
        out, _ = self.call('selfcheck', self.p3, '--order', '1', '--trials', '1')
        report = json.loads(out)
        self.assertTrue(report['ok'])
        self.assertEqual(report['canonicity']['trials'], 1)

    # EXIT CODES
    def test_parse_error_code(self):
        path = self.write('bad.txt', 'graph 3 2\n0 1\n')
        with self.assertRaises(CommandError) as caught:
            self.call('tangles', path, '--order', '1')
        self.assertEqual(caught.exception.returncode, 3)
        self.assertIn('line 3', str(caught.exception))

    def test_empty_matrix_is_a_parse_error(self):
        path = self.write('empty.txt', 'matrix 0 4\n')
        with self.assertRaises(CommandError) as caught:
            self.call('tangles', path, '--order', '1')
        self.assertEqual(caught.exception.returncode, 3)
        self.assertIn('line 1', str(caught.exception))

    def test_size_guard_code(self):
        with self.assertRaises(CommandError) as caught:
            self.call('tangles', self.triforce, '--order', '5')
        self.assertEqual(caught.exception.returncode, 4)

    def test_missing_file(self):
        with self.assertRaises(CommandError) as caught:
            self.call('tangles', str(Path(self.tmp.name) / 'none.txt'), '--order', '1')
        self.assertEqual(caught.exception.returncode, 1)

    # AXIOM CHECK FLAGS
    def test_seed_reaches_the_sampled_axiom_check(self):
        """Test --seed is used when --max-exhaustive pushes the check to sampling"""
        with self.assertLogs('App_Tangles.connectivity', 'INFO') as logs:
            self.call('branchwidth', self.p3, '--max-exhaustive', '0', '--seed', '7')
        self.assertTrue(any('passed with seed 7' in line for line in logs.output))

    @patch('App_Tangles.management.commands._base.verify_axioms',
           return_value=AxiomReport(False, 'symmetry', (1,)))
    def test_failed_axiom_check_code(self, mock_verify):
        with self.assertRaises(CommandError) as caught:
            self.call('decompose', self.p3, '--order', '1', '--max-exhaustive', '5', '--seed', '3')
        self.assertEqual(caught.exception.returncode, 2)
        self.assertIn('symmetry fails at [1]', str(caught.exception))
        self.assertEqual(mock_verify.call_args.kwargs, {'max_exhaustive': 5, 'seed': 3})

    @patch('App_Tangles.management.commands._base.verify_axioms')
    def test_selfcheck_runs_its_own_axiom_check(self, mock_verify):
        self.call('selfcheck', self.p3, '--order', '1', '--trials', '1')
        mock_verify.assert_not_called()


# TEST FOR THE COMMAND LINE ENTRY POINT
class CliTestCase(TestCase):

    def test_run_success(self):
        out, err = StringIO(), StringIO()
        self.assertEqual(run(['branchwidth', str(FIXTURE_DIR / 'k4.txt')], stdout=out, stderr=err), 0)
        self.assertEqual(out.getvalue(), '3\n')

    def test_run_reports_the_exit_code(self):
        out, err = StringIO(), StringIO()
        code = run(['tangles', str(FIXTURE_DIR / 'p3.txt'), '--order', '7'], stdout=out, stderr=err)
        self.assertEqual(code, 4)
        self.assertTrue(err.getvalue().startswith('error: refused'))

    def test_run_unknown_command(self):
        err = StringIO()
        self.assertEqual(run(['frobnicate'], stdout=StringIO(), stderr=err), 1)
        self.assertIn('usage: tangles', err.getvalue())
