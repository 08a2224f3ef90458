'''
Reduce a state graph to the pieces that still need the algebraic test

A graph splits at its cut vertices into blocks. Inside a block, parallel edges with the same label are
redundant, parallel edges with distinct labels rule out a fiber, and two consecutive edges with distinct
labels can be collapsed. A piece that ends up a tree is a fiber
'''
import logging
import random
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .errors import CertificateError
from .graph_model import (PlanarStateGraph, Vertex, VertexSign, assign_signs, blocks, canonical_form, faces, rank,
                          validate)

logger = logging.getLogger(__name__)


class StepKind(str, Enum):
    SPLIT = 'split'
    DELETE_PARALLEL = 'delete_parallel'
    DISTINCT_PARALLEL = 'distinct_parallel'
    COLLAPSE = 'collapse'
    TREE = 'tree'


class EarlyKind(str, Enum):
    TREE_FIBER = 'TREE_FIBER'
    DISTINCT_PARALLEL_NOT_FIBER = 'DISTINCT_PARALLEL_NOT_FIBER'


@dataclass(frozen=True)
class Step:
    kind: StepKind
    edges: Tuple[int, ...]
    # the degree-2 vertex of a collapse
    vertex: Optional[int] = None

    def to_json(self) -> dict:
        return {'kind': self.kind.value, 'edges': list(self.edges), 'vertex': self.vertex}

    @classmethod
    def from_json(cls, data: dict) -> 'Step':
        try:
            return cls(StepKind(data['kind']), tuple(int(e) for e in data['edges']), data.get('vertex'))
        except (KeyError, TypeError, ValueError) as err:
            raise CertificateError(f'unreadable step {data!r}: {err}')


@dataclass(frozen=True)
class Piece:
    graph: PlanarStateGraph
    provenance: Tuple[Step, ...] = ()


@dataclass(frozen=True)
class EarlyVerdict:
    kind: EarlyKind
    # the distinct bigon, or the edges of the tree
    witness: Tuple[int, ...]
    piece: Piece


@dataclass(frozen=True)
class Decomposition:
    graph: PlanarStateGraph
    pieces: Tuple[Piece, ...]
    early: Tuple[EarlyVerdict, ...]
    provenance: Tuple[Step, ...]

    @property
    def has_distinct_parallel(self) -> bool:
        return any(v.kind is EarlyKind.DISTINCT_PARALLEL_NOT_FIBER for v in self.early)


### Graph surgery


def restrict(g: PlanarStateGraph, edge_ids: Sequence[int]) -> PlanarStateGraph:
    '''
    The subgraph on `edge_ids` with the inherited rotation, signs and (if it survives) outer dart
    '''
    keep = set(edge_ids)
    edges = tuple(e for e in g.edges if e.id in keep)
    darts = {d for e in edges for d in e.darts}
    vertices, signs = [], []
    for i, v in enumerate(g.vertices):
        rotation = tuple(d for d in v.rotation if d in darts)
        if rotation:
            vertices.append(Vertex(v.id, rotation))
            if g.signs is not None:
                signs.append(g.signs[i])
    outer = g.outer if g.outer in darts else None
    return PlanarStateGraph(tuple(vertices), edges, outer, tuple(signs) if g.signs is not None else None)


def _delete_edge(g: PlanarStateGraph, eid: int) -> PlanarStateGraph:
    gone = set(g.edge(eid).darts)
    vertices = tuple(Vertex(v.id, tuple(d for d in v.rotation if d not in gone)) for v in g.vertices)
    edges = tuple(e for e in g.edges if e.id != eid)
    outer = None if g.outer in gone else g.outer
    return replace(g, vertices=vertices, edges=edges, outer=outer)


def _after(rotation: Tuple[int, ...], dart: int) -> Tuple[int, ...]:
    # the rotation read from just after `dart`, without it
    i = rotation.index(dart)
    return rotation[i + 1:] + rotation[:i]


def _collapse(g: PlanarStateGraph, w: int, e1: int, e2: int) -> PlanarStateGraph:
    '''
    Contract both edges at the degree-2 vertex `w` into a single vertex

    The merged rotation is u's rotation read after e1, followed by x's rotation read after e2
    '''
    d1 = next(d for d in g.edge(e1).darts if g.vertex_of(d) != w)
    d2 = next(d for d in g.edge(e2).darts if g.vertex_of(d) != w)
    u, x = g.vertex_of(d1), g.vertex_of(d2)
    merged = _after(g.vertex(u).rotation, d1) + _after(g.vertex(x).rotation, d2)
    keep, drop = min(u, x), max(u, x)

    vertices, signs = [], []
    for i, v in enumerate(g.vertices):
        if v.id in (w, drop):
            continue
        vertices.append(Vertex(v.id, merged) if v.id == keep else v)
        if g.signs is not None:
            signs.append(g.signs[i])
    gone = set(g.edge(e1).darts) | set(g.edge(e2).darts)
    return PlanarStateGraph(tuple(vertices), tuple(e for e in g.edges if e.id not in (e1, e2)),
                            None if g.outer in gone else g.outer,
                            tuple(signs) if g.signs is not None else None)


def _bigons(g: PlanarStateGraph) -> List[Tuple[int, int]]:
    found = set()
    for face in faces(g):
        if len(face) == 2:
            e1, e2 = sorted(g.edge_of(d) for d in face.darts)
            if e1 != e2:
                found.add((e1, e2))
    return sorted(found)


def _collapsible(g: PlanarStateGraph) -> Iterator[Tuple[int, int, int]]:
    for v in sorted(g.vertices, key=lambda v: v.id):
        if len(v.rotation) != 2:
            continue
        a1, a2 = v.rotation
        e1, e2 = sorted((g.edge_of(a1), g.edge_of(a2)))
        if e1 == e2 or g.label(e1) == g.label(e2):
            continue
        if g.head(a1) == g.head(a2):
            continue
        yield v.id, e1, e2


### Splitting and reducing


def split_cut_vertices(g: PlanarStateGraph) -> List[Piece]:
    parts = blocks(g)
    if not parts:
        return [Piece(g)]
    return [Piece(restrict(g, part)) for part in parts]


def reduce_piece(piece: Piece, rng: Optional[random.Random] = None) -> Tuple[Piece, Optional[EarlyVerdict]]:
    '''
    Apply the reduction rules to a fixpoint

    Rank 0 stops with TREE_FIBER and a distinct-label bigon stops with DISTINCT_PARALLEL_NOT_FIBER. Otherwise
    same-label bigons lose their higher edge, then distinct-label consecutive pairs are collapsed. With `rng`
    the next move is drawn from all eligible ones
    '''
    g = piece.graph
    steps = list(piece.provenance)
    while True:
        if rank(g) == 0:
            steps.append(Step(StepKind.TREE, tuple(sorted(g.edge_ids))))
            done = Piece(g, tuple(steps))
            logger.debug('piece %s is a tree', steps[-1].edges)
            return done, EarlyVerdict(EarlyKind.TREE_FIBER, steps[-1].edges, done)

        bigons = _bigons(g)
        distinct = [pair for pair in bigons if g.label(pair[0]) != g.label(pair[1])]
        if distinct:
            pair = rng.choice(distinct) if rng else distinct[0]
            steps.append(Step(StepKind.DISTINCT_PARALLEL, pair))
            done = Piece(g, tuple(steps))
            logger.debug('edges %s are parallel with distinct labels', pair)
            return done, EarlyVerdict(EarlyKind.DISTINCT_PARALLEL_NOT_FIBER, pair, done)

        moves = [Step(StepKind.DELETE_PARALLEL, pair) for pair in bigons]
        moves += [Step(StepKind.COLLAPSE, (e1, e2), w) for w, e1, e2 in _collapsible(g)]
        if not moves:
            return Piece(g, tuple(steps)), None

        step = rng.choice(moves) if rng else moves[0]
        g = _apply(g, step)
        steps.append(step)
        logger.debug('%s %s', step.kind.value, step.edges)


def _apply(g: PlanarStateGraph, step: Step) -> PlanarStateGraph:
    if step.kind is StepKind.DELETE_PARALLEL:
        return _delete_edge(g, max(step.edges))
    if step.kind is StepKind.COLLAPSE:
        return _collapse(g, step.vertex, *step.edges)
    raise ValueError(f'{step.kind.value} does not change the graph')


def sign_graph(g: PlanarStateGraph, basepoint: Optional[int] = None) -> PlanarStateGraph:
    # an existing signing picks the basepoint: its first PLUS vertex
    if basepoint is None and g.signs is not None:
        basepoint = next(v.id for v, s in zip(g.vertices, g.signs) if s is VertexSign.PLUS)
    return assign_signs(g, basepoint)


def pipeline(g: PlanarStateGraph, rng: Optional[random.Random] = None,
             basepoint: Optional[int] = None) -> Decomposition:
    '''
    Sign, split, reduce and re-split until every piece is irreducible or decided

    NON_BIPARTITE from signing propagates
    '''
    validate(g)
    signed = sign_graph(g, basepoint)

    log: List[Step] = []
    irreducible: List[Piece] = []
    early: List[EarlyVerdict] = []
    split = Step(StepKind.SPLIT, tuple(sorted(signed.edge_ids)))
    log.append(split)
    work = [replace(p, provenance=(split, )) for p in split_cut_vertices(signed)]

    while work:
        piece = work.pop(0)
        reduced, verdict = reduce_piece(piece, rng)
        log.extend(reduced.provenance[len(piece.provenance):])
        if verdict is not None:
            early.append(verdict)
            continue
        parts = split_cut_vertices(reduced.graph)
        if len(parts) == 1:
            irreducible.append(reduced)
            continue
        split = Step(StepKind.SPLIT, tuple(sorted(reduced.graph.edge_ids)))
        log.append(split)
        work.extend(replace(p, provenance=reduced.provenance + (split, )) for p in parts)

    logger.debug('%d irreducible pieces, %d early verdicts', len(irreducible), len(early))
    return Decomposition(signed, tuple(irreducible), tuple(early), tuple(log))


### Properties of the decomposition


def is_adequate(g: PlanarStateGraph) -> bool:
    return not any(g.is_loop(e.id) for e in g.edges)


def is_homogeneous(g: PlanarStateGraph) -> bool:
    return all(len({g.label(eid) for eid in block}) == 1 for block in blocks(g))


def reduced_piece_codes(g: PlanarStateGraph, rng: Optional[random.Random] = None) -> List[Tuple]:
    '''
    Canonical forms of every final piece, decided early or not, as a sorted list
    '''
    result = pipeline(g, rng)
    finals = [p.graph for p in result.pieces] + [v.piece.graph for v in result.early]
    return sorted(canonical_form(h) for h in finals)


def same_decomposition(g1: PlanarStateGraph, g2: PlanarStateGraph) -> bool:
    return reduced_piece_codes(g1) == reduced_piece_codes(g2)


### Replay


def _owner(pool: Dict[FrozenSet[int], PlanarStateGraph], edges: Tuple[int, ...]) -> FrozenSet[int]:
    for key in pool:
        if set(edges) <= key and (edges or not key):
            return key
    raise CertificateError(f'no open piece holds edges {list(edges)}')


def verify_provenance(g: PlanarStateGraph, steps: Sequence[Step]) -> List[PlanarStateGraph]:
    '''
    Replay a provenance log against `g`, checking every step is legal where it happens

    Returns the pieces still open at the end, sorted by smallest edge id
    '''
    pool: Dict[FrozenSet[int], PlanarStateGraph] = {frozenset(g.edge_ids): g}
    for i, step in enumerate(steps):
        key = _owner(pool, step.edges)
        h = pool.pop(key)
        if step.kind is StepKind.SPLIT:
            if key != frozenset(step.edges):
                raise CertificateError(f'step {i}: split does not cover a whole piece')
            for part in split_cut_vertices(h):
                pool[frozenset(part.graph.edge_ids)] = part.graph
        elif step.kind is StepKind.TREE:
            if key != frozenset(step.edges) or rank(h) != 0:
                raise CertificateError(f'step {i}: piece {sorted(key)} is not a tree')
        elif step.kind is StepKind.DISTINCT_PARALLEL:
            pair = tuple(sorted(step.edges))
            if pair not in _bigons(h) or h.label(pair[0]) == h.label(pair[1]):
                raise CertificateError(f'step {i}: edges {list(pair)} are not a distinct-label bigon')
        elif step.kind is StepKind.DELETE_PARALLEL:
            pair = tuple(sorted(step.edges))
            if pair not in _bigons(h) or h.label(pair[0]) != h.label(pair[1]):
                raise CertificateError(f'step {i}: edges {list(pair)} are not a same-label bigon')
            h = _apply(h, step)
            pool[frozenset(h.edge_ids)] = h
        else:
            if (step.vertex, *sorted(step.edges)) not in set(_collapsible(h)):
                raise CertificateError(f'step {i}: cannot collapse {list(step.edges)} at vertex {step.vertex}')
            h = _apply(h, step)
            pool[frozenset(h.edge_ids)] = h
    return [pool[k] for k in sorted(pool, key=lambda k: min(k, default=-1))]
