import unittest
from typing import Optional, Sequence, Tuple, Union

from .config import Config
from .graph_model import PlanarStateGraph, canonical_form
from .stallings import (Certificate, DirectedLabeledGraph, FreeWord, Verdict, accepts, build_gamma_from_words, fold,
                        is_full_rose)
from .verdict import Decision, decide, decision_to_json, verify_decision


class StateFiberTestCase(unittest.TestCase):
    '''
    unittest.TestCase with assertions for state graphs, folds and certificates

    Single threaded by default, so a failure points at one piece
    '''
    config: Config = Config(workers=1)

    ### Utility functions exposed to the user

    def assertVerdict(self, g: PlanarStateGraph, expected: Union[Verdict, str]) -> Decision:
        # Assert the general decider gives `expected`, and hand back the decision
        decision = decide(g, self.config)
        self.assertEqual(decision.verdict, Verdict(expected))
        return decision

    def assertRose(self, folded: DirectedLabeledGraph, n: int, msg: Optional[str] = None):
        # Assert a folded graph is a rose with one petal per generator
        self.assertTrue(is_full_rose(folded, n), msg or f'not a rose on {n} petals: {folded.to_json()}')

    def assertNotRose(self, folded: DirectedLabeledGraph, n: int):
        self.assertFalse(is_full_rose(folded, n), f'unexpected rose on {n} petals')

    def assertAccepts(self, folded: DirectedLabeledGraph, word: FreeWord):
        self.assertTrue(accepts(folded, word), f'{word} is not read by any loop at the basepoint')

    def assertReplays(self, g: PlanarStateGraph, decision: Decision):
        # Assert the JSON certificate of `decision` replays to the same verdict
        self.assertEqual(verify_decision(g, decision_to_json(decision)), decision.verdict)

    def assertSameGraph(self, first: PlanarStateGraph, second: PlanarStateGraph):
        # Equal up to renaming vertices, edges and darts
        self.assertEqual(canonical_form(first), canonical_form(second))

    def assertFoldsTo(self, words: Sequence[Union[str, FreeWord]], n: int,
                      rose: bool) -> Tuple[DirectedLabeledGraph, Certificate]:
        # Fold the wedge of `words` and assert whether it is a rose
        parsed = [w if isinstance(w, FreeWord) else FreeWord.parse(w) for w in words]
        folded, certificate = fold(build_gamma_from_words(parsed, n), n)
        self.assertEqual(is_full_rose(folded, n), rose)
        return folded, certificate
