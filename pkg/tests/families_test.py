import os
import random
import unittest

import sympy
from hypothesis import given, settings, strategies as st

from statefiber.config import Config
from statefiber.decompose import pipeline
from statefiber.errors import ErrorCode, FamilyError
from statefiber.families import (ContinuedFraction, Strand, ThetaSpec, TridiagonalMatrix, cycle_fiber, cycle_graph,
                                 enumerate_continued_fractions, enumerate_cycles, enumerate_theta, parse_labels,
                                 pretzel_fiber, sample_continued_fractions, theta_fiber, theta_graph,
                                 theta_to_pretzel, tree_graph, two_bridge_fiber, two_bridge_graph, two_bridge_matrix,
                                 two_bridge_words)
from statefiber.graph_model import EdgeLabel, rank, validate
from statefiber.stallings import Verdict, abelianize
from statefiber.testing import StateFiberTestCase

EXHAUSTIVE = bool(os.environ.get('STATEFIBER_EXHAUSTIVE'))

# reduced 2-bridge graph of rank 5 that is a fiber without reducing to a tree
FIBER_NOT_TREE = ContinuedFraction((2, 2, -1, -2, 1, -4, 1, 2, -1, 2, 2))


class TestCycles(StateFiberTestCase):
    def test_formula(self):
        cases = {'AA': True, 'AB': False, 'AABB': False, 'ABAB': False, 'AAAA': False, 'AAAB': True, 'BBBBBA': False}
        for labels, expected in cases.items():
            with self.subTest(labels=labels):
                self.assertEqual(cycle_fiber(parse_labels(labels)), expected)

    def test_general_decider_agrees(self):
        for labels in enumerate_cycles(12 if EXHAUSTIVE else 8):
            with self.subTest(labels=''.join(label.value for label in labels)):
                expected = Verdict.FIBER if cycle_fiber(labels) else Verdict.NOT_FIBER
                self.assertVerdict(cycle_graph(labels), expected)

    def test_odd(self):
        with self.assertRaises(FamilyError) as caught:
            cycle_graph(parse_labels('AAB'))
        self.assertEqual(caught.exception.code, ErrorCode.ODD_CYCLE)
        with self.assertRaises(FamilyError):
            cycle_fiber(parse_labels('A'))

    def test_bad_labels(self):
        with self.assertRaises(FamilyError) as caught:
            parse_labels('ABC')
        self.assertEqual(caught.exception.code, ErrorCode.SYNTAX)

    @settings(derandomize=True, max_examples=30, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32), st.integers(min_value=0, max_value=15))
    def test_trees_are_fibers(self, seed, size):
        g = tree_graph(random.Random(seed), size)
        self.assertEqual(rank(g), 0)
        self.assertVerdict(g, Verdict.FIBER)


class TestTheta(StateFiberTestCase):
    def test_parse(self):
        spec = ThetaSpec.parse('1A, 1B ,3A')
        self.assertEqual([s.vertices for s in spec.strands], [1, 1, 3])
        self.assertEqual(str(spec), '1A,1B,3A')
        self.assertEqual(Strand.parse('abba').label, None)
        self.assertEqual(str(Strand.parse('ABBA')), 'ABBA')
        self.assertEqual(Strand.uniform(2, EdgeLabel.B).labels, (EdgeLabel.B, ) * 3)

    def test_errors(self):
        cases = {'1A,1B': ErrorCode.TOO_FEW_STRANDS, '1A,2B,1A': ErrorCode.PARITY, '1A,1C,1A': ErrorCode.SYNTAX}
        for text, code in cases.items():
            with self.subTest(text=text):
                with self.assertRaises(FamilyError) as caught:
                    ThetaSpec.parse(text)
                self.assertEqual(caught.exception.code, code)
        with self.assertRaises(FamilyError) as caught:
            theta_fiber(ThetaSpec.parse('AB,1A,1B'))
        self.assertEqual(caught.exception.code, ErrorCode.UNREDUCED)

    def test_graph(self):
        g = theta_graph(ThetaSpec.parse('1A,1B,3A'))
        report = validate(g)
        self.assertEqual((report.vertex_count, report.edge_count), (7, 8))
        self.assertEqual(rank(g), 2)
        self.assertEqual(g.vertex(0).rotation, (0, 4, 8))

    def test_pretzel_dictionary(self):
        self.assertEqual(theta_to_pretzel(ThetaSpec.parse('1A,1B,3A')), [2, -2, 4])
        self.assertEqual(theta_to_pretzel(ThetaSpec.parse('0A,2B,0A')), [1, -3, 1])

    def test_pretzel(self):
        cases = {
            (1, 1, 1): True,
            (-1, 3, 3): True,
            (3, 3, 3): False,
            (2, -2, 7): True,
            (2, -2, 2, -4): True,
            (2, -2, 2, -6): False,
            (-4, 2, -2, 2): True,
            (1, -1, 1): False,
            (2, 2, 2): False,
        }
        for p, expected in cases.items():
            with self.subTest(p=p):
                self.assertEqual(pretzel_fiber(p), expected)
        with self.assertRaises(FamilyError):
            pretzel_fiber([2, 0, 1])

    def test_theta(self):
        cases = {
            '1A,1B,3A': True,
            '1A,1B,1A,5B': False,
            '1A,1B,1A,3B': True,
            '0A,0A,2B': True,
            '0A,2A,0A': False,
            '0A,0B,0A': False,
            '1A,1A,1A': False,
            '5B,1A,1B': True,
        }
        for text, expected in cases.items():
            with self.subTest(theta=text):
                spec = ThetaSpec.parse(text)
                self.assertEqual(theta_fiber(spec), expected)
                # the strand rule and the pretzel rule are two readings of one answer
                self.assertEqual(pretzel_fiber(theta_to_pretzel(spec)), expected)

    def test_general_decider(self):
        self.assertVerdict(theta_graph(ThetaSpec.parse('1A,1B,3A')), Verdict.FIBER)
        self.assertVerdict(theta_graph(ThetaSpec.parse('1A,1A,1A')), Verdict.NOT_FIBER)
        self.assertVerdict(theta_graph(ThetaSpec.parse('0A,0A,0A')), Verdict.FIBER)
        self.assertVerdict(theta_graph(ThetaSpec.parse('0A,0B,0A')), Verdict.NOT_FIBER)

    def test_distinct_orders(self):
        specs = [str(spec) for spec in enumerate_theta(3, 1, distinct=True)]
        self.assertEqual(len(specs), len(set(specs)))
        self.assertIn('0A,0A,0B', specs)
        self.assertNotIn('0A,0B,0A', specs)
        self.assertLess(len(specs), len(list(enumerate_theta(3, 1))))

    def test_general_decider_agrees(self):
        # six strands of up to five vertices when exhaustive
        self.config = Config(workers=1)
        for spec in enumerate_theta(6, 5, distinct=True) if EXHAUSTIVE else enumerate_theta(4, 2, distinct=True):
            with self.subTest(theta=str(spec)):
                self.assertVerdict(theta_graph(spec), Verdict.FIBER if theta_fiber(spec) else Verdict.NOT_FIBER)


class TestTwoBridge(StateFiberTestCase):
    def test_validation(self):
        for coefficients in [(), (0, ), (1, 2), (3, 3, -2), (2, 2)]:
            with self.subTest(cf=coefficients):
                with self.assertRaises(FamilyError) as caught:
                    ContinuedFraction(coefficients)
                self.assertEqual(caught.exception.code, ErrorCode.INVALID_CF)
        with self.assertRaises(FamilyError) as caught:
            ContinuedFraction.parse('3,x')
        self.assertEqual(caught.exception.code, ErrorCode.SYNTAX)

    def test_indexing(self):
        cf = ContinuedFraction.parse('[-3,4,-2]')
        self.assertEqual((cf[1], cf[2], cf[3]), (-2, 4, -3))
        self.assertEqual((cf.k, cf.closes, cf.regions), (1, False, 1))
        closing = ContinuedFraction((3, -2))
        self.assertEqual((closing.k, closing.closes, closing.regions), (0, True, 1))

    def test_tridiagonal(self):
        m = TridiagonalMatrix((2, 3, -1), (1, 0), (0, 1))
        self.assertEqual(m.rows(), [[2, 1, 0], [0, 3, 0], [0, 1, -1]])
        self.assertEqual(m.determinant(), -6)
        self.assertEqual(m.determinant(), int(sympy.Matrix(m.rows()).det()))
        for bad in [((1, 2), (), ()), ((1, 2), (1, ), (1, )), ((1, 2), (0, ), (0, )), ((1, 2), (2, ), (0, ))]:
            with self.subTest(matrix=bad):
                with self.assertRaises(FamilyError) as caught:
                    TridiagonalMatrix(*bad)
                self.assertEqual(caught.exception.code, ErrorCode.INVALID_CF)

    def test_matrix(self):
        cases = {(-3, 4, -2): ((1, ), 1), (-3, 2, -2): ((0, ), 0), (3, -2): ((1, ), 1), (4, ): ((), 1)}
        for coefficients, (diagonal, det) in cases.items():
            with self.subTest(cf=coefficients):
                matrix, got = two_bridge_matrix(ContinuedFraction(coefficients))
                self.assertEqual(matrix.diagonal, diagonal)
                self.assertEqual(got, det)

    def test_table(self):
        cases = {(-3, 4, -2): True, (-3, 2, -2): False, (3, -2): True, (4, ): True, (5, 2, 3): False}
        for coefficients, expected in cases.items():
            with self.subTest(cf=coefficients):
                self.assertEqual(two_bridge_fiber(ContinuedFraction(coefficients)), expected)

    def test_words_match_matrix(self):
        for coefficients, rows in [((-3, 4, -2), [[1]]), ((3, -2), [[1]])]:
            with self.subTest(cf=coefficients):
                cf = ContinuedFraction(coefficients)
                matrix, _ = abelianize(two_bridge_words(cf), cf.regions)
                self.assertEqual(matrix.tolist(), rows)
                self.assertEqual(two_bridge_matrix(cf)[0].rows(), rows)

    def test_matrix_determinant(self):
        for cf in enumerate_continued_fractions(5, 3):
            with self.subTest(cf=str(cf)):
                matrix, det = two_bridge_matrix(cf)
                product = 1
                for p in matrix.diagonal:
                    product *= p
                self.assertEqual(det, product)
                self.assertEqual(matrix.determinant(), det)
                if cf.regions:
                    self.assertEqual(int(sympy.Matrix(matrix.rows()).det()), det)
                words = two_bridge_words(cf)
                self.assertEqual(len(words), cf.regions)
                self.assertEqual(abs(abelianize(words, cf.regions)[1]), abs(det))

    def test_graph(self):
        g = two_bridge_graph(ContinuedFraction((3, -2)))
        report = validate(g)
        self.assertEqual((report.vertex_count, report.edge_count, report.face_count), (4, 5, 3))
        self.assertVerdict(g, Verdict.FIBER)

    def test_fiber_that_is_not_a_tree(self):
        g = two_bridge_graph(FIBER_NOT_TREE, reduced=True)
        self.assertEqual((len(g.vertices), len(g.edges), rank(g)), (14, 18, 5))
        result = pipeline(g)
        self.assertEqual(len(result.pieces), 1)
        self.assertEqual(result.early, ())
        self.assertEqual(two_bridge_matrix(FIBER_NOT_TREE)[0].diagonal, (1, 1, -1, -1, 1))
        self.assertTrue(two_bridge_fiber(FIBER_NOT_TREE))
        decision = self.assertVerdict(g, Verdict.FIBER)
        self.assertEqual(decision.pieces[0].rank, 5)
        self.assertReplays(g, decision)

    def test_enumerator(self):
        found = list(enumerate_continued_fractions(3, 2))
        self.assertIn(ContinuedFraction((2, )), found)
        self.assertIn(ContinuedFraction((-2, 2, 2)), found)
        self.assertNotIn(ContinuedFraction((2, 1, 2)), found)

    def test_sample(self):
        drawn = list(sample_continued_fractions(random.Random(3), 200, 3, 2))
        self.assertEqual(len(drawn), 200)
        self.assertLessEqual(set(drawn), set(enumerate_continued_fractions(3, 2)))
        self.assertEqual(drawn, list(sample_continued_fractions(random.Random(3), 200, 3, 2)))

    def test_general_decider_agrees(self):
        # up to 7 coefficients of size up to 6 when exhaustive; that range is sampled, not listed
        self.config = Config(workers=1)
        if EXHAUSTIVE:
            cases = sample_continued_fractions(random.Random(2024), 4000)
        else:
            cases = enumerate_continued_fractions(3, 4)
        for cf in cases:
            with self.subTest(cf=str(cf)):
                formula = two_bridge_fiber(cf)
                self.assertEqual(formula, abs(two_bridge_matrix(cf)[1]) == 1)
                self.assertVerdict(two_bridge_graph(cf), Verdict.FIBER if formula else Verdict.NOT_FIBER)


if __name__ == '__main__':
    unittest.main()
