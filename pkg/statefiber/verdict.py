'''
Whole-graph verdicts: decompose, decide every irreducible piece, combine
'''
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from .config import Config
from .decompose import Decomposition, EarlyVerdict, Step, StepKind, pipeline, sign_graph, verify_provenance
from .errors import CertificateError, ErrorCode, GraphError
from .graph_model import PlanarStateGraph, VertexSign, faces, rank
from .stallings import (Certificate, CertificateKind, PieceDecision, Verdict, build_gamma_from_graph, decide_piece,
                        is_full_rose, label_edges)

logger = logging.getLogger(__name__)

__all__ = ['Verdict', 'Decision', 'decide', 'decision_to_json', 'verify_decision']


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    pieces: Tuple[PieceDecision, ...] = ()
    # edge ids of each decided piece, aligned with `pieces`
    piece_edges: Tuple[Tuple[int, ...], ...] = ()
    early: Tuple[EarlyVerdict, ...] = ()
    provenance: Tuple[Step, ...] = ()
    reason: Optional[str] = None

    @property
    def certificates(self) -> Tuple[Certificate, ...]:
        return tuple(p.certificate for p in self.pieces)


def _combine(decomposition: Decomposition, pieces: List[PieceDecision]) -> Verdict:
    if decomposition.has_distinct_parallel or any(p.verdict is Verdict.NOT_FIBER for p in pieces):
        return Verdict.NOT_FIBER
    return Verdict.FIBER


def decide(
    g: PlanarStateGraph,
    config: Optional[Config] = None,
    rng: Optional[random.Random] = None,
    basepoint: Optional[int] = None
) -> Decision:
    '''
    FIBER when every piece is; NOT_FIBER as soon as one is not; NON_ORIENTABLE when the graph cannot be signed
    '''
    config = config or Config()
    try:
        decomposition = pipeline(g, rng, basepoint)
    except GraphError as err:
        if err.code is not ErrorCode.NON_BIPARTITE:
            raise
        logger.info('verdict %s: %s', Verdict.NON_ORIENTABLE.value, err)
        return Decision(Verdict.NON_ORIENTABLE, reason=str(err))

    graphs = [p.graph for p in decomposition.pieces]
    if config.workers > 1 and len(graphs) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            pieces = list(pool.map(lambda h: decide_piece(h, config), graphs))
    else:
        pieces = [decide_piece(h, config, rng=rng) for h in graphs]

    verdict = _combine(decomposition, pieces)
    logger.info('verdict %s: %d pieces, %d early verdicts', verdict.value, len(pieces), len(decomposition.early))
    return Decision(verdict, tuple(pieces), tuple(tuple(sorted(h.edge_ids)) for h in graphs), decomposition.early,
                    decomposition.provenance)


### Certificates as JSON


def decision_to_json(decision: Decision) -> Dict[str, Any]:
    return {
        'verdict': decision.verdict.value,
        'reason': decision.reason,
        'early': [{'kind': v.kind.value, 'witness': list(v.witness)} for v in decision.early],
        'provenance': [step.to_json() for step in decision.provenance],
        'pieces': [{
            'edges': list(edges),
            'verdict': p.verdict.value,
            'rank': p.rank,
            'determinant': p.determinant,
            'words': [str(w) for w in p.words],
            'certificate': p.certificate.to_json(),
        } for edges, p in zip(decision.piece_edges, decision.pieces)],
    }


def _first_plus(h: PlanarStateGraph) -> int:
    return next(v.id for v, s in zip(h.vertices, h.signs) if s is VertexSign.PLUS)


def verify_decision(g: PlanarStateGraph, payload: Dict[str, Any]) -> Verdict:
    '''
    Re-check a verdict from its JSON certificate alone

    Replays the reduction log, then the folds of every open piece, and recombines. Any disagreement raises
    BAD_CERTIFICATE
    '''
    try:
        claimed = Verdict(payload['verdict'])
        steps = [Step.from_json(s) for s in payload.get('provenance', [])]
        records = payload.get('pieces', [])
    except (KeyError, TypeError, ValueError) as err:
        raise CertificateError(f'unreadable certificate: {err}')

    try:
        signed = sign_graph(g)
    except GraphError as err:
        if err.code is ErrorCode.NON_BIPARTITE and claimed is Verdict.NON_ORIENTABLE:
            return claimed
        raise CertificateError(f'certificate claims {claimed.value} but signing fails: {err}')
    if claimed is Verdict.NON_ORIENTABLE:
        raise CertificateError('certificate claims NON_ORIENTABLE for a bipartite graph')

    open_pieces = {tuple(sorted(h.edge_ids)): h for h in verify_provenance(signed, steps)}
    by_edges = {tuple(r.get('edges', ())): r for r in records}
    if set(by_edges) != set(open_pieces):
        raise CertificateError('certificate pieces do not match the replayed decomposition')

    verdict = Verdict.FIBER
    if any(s.kind is StepKind.DISTINCT_PARALLEL for s in steps):
        verdict = Verdict.NOT_FIBER
    for edges, h in open_pieces.items():
        certificate = Certificate.from_json(by_edges[edges]['certificate'])
        basepoint = _first_plus(h)
        labeling = label_edges(h, faces(h))
        folded = certificate.replay(build_gamma_from_graph(h, labeling, basepoint))
        rose = is_full_rose(folded, rank(h))
        if rose != (certificate.kind is CertificateKind.ROSE):
            raise CertificateError(f'piece {list(edges)}: certificate kind {certificate.kind.value} is wrong')
        if not rose:
            verdict = Verdict.NOT_FIBER

    if verdict is not claimed:
        raise CertificateError(f'certificate claims {claimed.value}, replay gives {verdict.value}')
    return verdict
