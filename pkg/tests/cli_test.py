import json
import os
import unittest

from click.testing import CliRunner, Result

from statefiber.cli import cli
from statefiber.families import ThetaSpec, cycle_graph, parse_labels, theta_graph
from statefiber.graph_model import serialize_graph
from tests import DATA_DIR, read_data
from tests.ingest_test import TREFOIL
from tests.stallings_test import FIVE_WORDS


class _TestBase(unittest.TestCase):
    '''
    Runs the `statefiber` group in-process

    Never instantiated on its own, it has no tests
    '''
    def setUp(self):
        self.runner = CliRunner()

    ### Helper functions

    def invoke(self, *args: str, input: str = None) -> Result:
        return self.runner.invoke(cli, ['--workers', '1', *args], input=input)

    def assertExit(self, result: Result, code: int):
        self.assertEqual(result.exit_code, code, result.output)

    def data(self, name: str) -> str:
        return os.path.join(DATA_DIR, name)


class TestDecide(_TestBase):
    def test_exit_codes(self):
        cases = {'bouquet.graph': (0, 'FIBER'), 'cycle_abab.graph': (1, 'NOT_FIBER'),
                 'triangle.graph': (2, 'NON_ORIENTABLE')}
        for name, (code, verdict) in cases.items():
            with self.subTest(graph=name):
                result = self.invoke('decide', self.data(name))
                self.assertExit(result, code)
                self.assertEqual(result.output.splitlines()[0], verdict)

    def test_stdin(self):
        result = self.invoke('decide', input=read_data('cycle_aabb.graph'))
        self.assertExit(result, 1)

    def test_pd(self):
        result = self.invoke('decide', '--format', 'pd', self.data('figure_eight.pd'))
        self.assertExit(result, 0)
        result = self.invoke('decide', '--format', 'pd', '--state', 'all-a', input=TREFOIL)
        self.assertExit(result, 0)

    def test_bad_input(self):
        result = self.invoke('decide', self.data('torus.graph'))
        self.assertExit(result, 3)
        self.assertIn('NON_SPHERICAL', result.output)
        result = self.invoke('decide', '--format', 'pd', '--state', 'AB', input=TREFOIL)
        self.assertExit(result, 3)
        self.assertIn('STATE_LENGTH', result.output)

    def test_usage_errors(self):
        self.assertExit(self.invoke('decide', '--format', 'xml', self.data('bouquet.graph')), 3)
        self.assertExit(self.runner.invoke(cli, ['--workers', '0', 'decide', self.data('bouquet.graph')]), 3)
        self.assertExit(self.invoke('no-such-command'), 3)

    def test_batch(self):
        lines = [self.data('bouquet.graph'), f'PD {TREFOIL} | all-a', self.data('missing.graph'),
                 self.data('torus.graph')]
        result = self.invoke('decide', '--batch', input='\n'.join(lines) + '\n')
        self.assertExit(result, 0)
        rows = [json.loads(line) for line in result.output.splitlines()]
        self.assertEqual([row['input'] for row in rows], lines)
        self.assertEqual(rows[0]['verdict'], 'FIBER')
        self.assertEqual(rows[1]['verdict'], 'FIBER')
        self.assertEqual(rows[2]['error'], 'IO')
        self.assertEqual(rows[3]['error'], 'NON_SPHERICAL')

    def test_batch_refuses_trace(self):
        with self.runner.isolated_filesystem():
            result = self.invoke('decide', '--batch', '--trace', 'cert.json', input=self.data('bouquet.graph') + '\n')
            self.assertExit(result, 3)
            self.assertIn('--batch', result.output)
            self.assertFalse(os.path.exists('cert.json'))

    def test_five_regions(self):
        result = self.invoke('decide', self.data('five_regions.graph'))
        self.assertExit(result, 0)
        self.assertEqual(result.output.splitlines()[0], 'FIBER')


class TestCertificates(_TestBase):
    def test_trace_and_verify(self):
        with self.runner.isolated_filesystem():
            with open('cycle.graph', 'w') as f:
                f.write(serialize_graph(cycle_graph(parse_labels('AAAA'))))
            result = self.invoke('decide', '--trace', 'cert.json', 'cycle.graph')
            self.assertExit(result, 1)
            self.assertIn('certificate: cert.json', result.output)

            result = self.invoke('verify-certificate', 'cycle.graph', 'cert.json')
            self.assertExit(result, 1)
            self.assertEqual(result.output.strip(), 'NOT_FIBER (verified)')

            with open('cert.json') as f:
                payload = json.load(f)
            payload['verdict'] = 'FIBER'
            with open('forged.json', 'w') as f:
                json.dump(payload, f)
            result = self.invoke('verify-certificate', 'cycle.graph', 'forged.json')
            self.assertExit(result, 3)
            self.assertIn('BAD_CERTIFICATE', result.output)

    def test_not_json(self):
        with self.runner.isolated_filesystem():
            with open('cert.json', 'w') as f:
                f.write('{')
            result = self.invoke('verify-certificate', self.data('bouquet.graph'), 'cert.json')
            self.assertExit(result, 3)
            self.assertIn('BAD_CERTIFICATE', result.output)


class TestDecompose(_TestBase):
    def test_bouquet(self):
        result = self.invoke('decompose', self.data('bouquet.graph'))
        self.assertExit(result, 0)
        lines = result.output.splitlines()
        self.assertIn('# piece 0: TREE_FIBER', lines)
        self.assertIn('# piece 1: TREE_FIBER', lines)
        steps = json.loads(lines[-1])
        self.assertEqual(steps[0], {'kind': 'split', 'edges': [0, 1, 2, 3], 'vertex': None})

    def test_irreducible(self):
        with self.runner.isolated_filesystem():
            with open('cycle.graph', 'w') as f:
                f.write(serialize_graph(cycle_graph(parse_labels('AAAA'))))
            result = self.invoke('decompose', 'cycle.graph')
            self.assertExit(result, 0)
            self.assertEqual(result.output.splitlines()[0], '# piece 0: irreducible')

    def test_needs_a_source(self):
        self.assertExit(self.invoke('decompose'), 3)


class TestFold(_TestBase):
    def test_rose(self):
        result = self.invoke('fold', '--words', '; '.join(FIVE_WORDS), '--rank', '5')
        self.assertExit(result, 0)
        self.assertEqual(json.loads(result.output), {'rose': True, 'rank': 5, 'vertices': 1, 'edges': 5})

    def test_rank_from_words(self):
        result = self.invoke('fold', '--words', 'u1^2')
        self.assertExit(result, 1)
        self.assertEqual(json.loads(result.output)['rank'], 1)

    def test_graph(self):
        with self.runner.isolated_filesystem():
            with open('theta.graph', 'w') as f:
                f.write(serialize_graph(theta_graph(ThetaSpec.parse('1A,1B,3A'))))
            result = self.invoke('fold', '--graph', 'theta.graph', '--trace', 'folds.json')
            self.assertExit(result, 0)
            self.assertEqual(json.loads(result.output)['rank'], 2)
            with open('folds.json') as f:
                self.assertEqual(len(json.load(f)['folds']), 3)

    def test_needs_one_source(self):
        self.assertExit(self.invoke('fold'), 3)
        self.assertExit(self.invoke('fold', '--words', 'u1', '--graph', self.data('bouquet.graph')), 3)
        self.assertExit(self.invoke('fold', '--words', 'u1 x2'), 3)


class TestFamily(_TestBase):
    def test_verdicts(self):
        cases = [
            (['--cycle', 'AAAB'], 0, 'FIBER'),
            (['--cycle', 'AABB'], 1, 'NOT_FIBER'),
            (['--pretzel', '2,-2,7'], 0, 'FIBER'),
            (['--pretzel', '2,-2,2,-6'], 1, 'NOT_FIBER'),
            (['--theta', '1A,1B,1A,5B'], 1, 'NOT_FIBER'),
        ]
        for args, code, verdict in cases:
            with self.subTest(args=args):
                result = self.invoke('family', *args)
                self.assertExit(result, code)
                self.assertEqual(result.output.strip(), verdict)

    def test_json(self):
        result = self.invoke('family', '--theta', '1A,1B,3A', '--json')
        self.assertExit(result, 0)
        self.assertEqual(json.loads(result.output)['pretzel'], [2, -2, 4])
        result = self.invoke('family', '--two-bridge=-3,4,-2', '--json')
        report = json.loads(result.output)
        self.assertEqual((report['diagonal'], report['determinant'], report['verdict']), ([1], 1, 'FIBER'))

    def test_errors(self):
        cases = [['--cycle', 'AAB'], ['--pretzel', '2,x'], ['--two-bridge=3,3,-2'], ['--theta', '1A,1B']]
        for args in cases:
            with self.subTest(args=args):
                self.assertExit(self.invoke('family', *args), 3)
        self.assertExit(self.invoke('family'), 3)
        self.assertExit(self.invoke('family', '--cycle', 'AB', '--theta', '1A,1B,1A'), 3)


if __name__ == '__main__':
    unittest.main()
