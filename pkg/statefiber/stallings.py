'''
The Stallings map of a state graph and the folding test for it

Every bounded region of an irreducible piece gives a free generator of the complement; every edge, directed
from its PLUS to its MINUS end, reads one of those letters or nothing. The surface is a fiber exactly when
the loops of the graph, read this way, generate the whole free group, which folding decides
'''
import logging
import random
import re
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from itertools import chain
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import sympy
from numba import njit

from .config import Config
from .errors import AlgebraError, CertificateError, ErrorCode, GraphError, ParseError, InternalMismatch
from .graph_model import (EdgeLabel, FaceSet, PlanarStateGraph, VertexSign, assign_signs, faces, has_cut_vertex,
                          plus_dart, rank)

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    FIBER = 'FIBER'
    NOT_FIBER = 'NOT_FIBER'
    NON_ORIENTABLE = 'NON_ORIENTABLE'


### Free words

# (generator index, +1 or -1)
Letter = Tuple[int, int]

_TOKEN = re.compile(r'^u(\d+)(?:\^(-?\d+))?$')


@dataclass(frozen=True)
class FreeWord:
    letters: Tuple[Letter, ...] = ()

    @classmethod
    def of(cls, letters: Iterable[Letter]) -> 'FreeWord':
        # freely reduced on construction
        stack: List[Letter] = []
        for gen, exp in letters:
            if stack and stack[-1] == (gen, -exp):
                stack.pop()
            else:
                stack.append((gen, exp))
        return cls(tuple(stack))

    @classmethod
    def parse(cls, text: str) -> 'FreeWord':
        '''
        Read `u1^-1 u5 u1^-1`; an empty string or `1` is the identity
        '''
        letters: List[Letter] = []
        for token in text.replace('*', ' ').split():
            if token == '1':
                continue
            match = _TOKEN.match(token)
            if not match or int(match.group(1)) < 1:
                raise ParseError(f'bad letter {token!r} in word {text!r}')
            power = int(match.group(2) or 1)
            letters.extend([(int(match.group(1)), 1 if power > 0 else -1)] * abs(power))
        return cls.of(letters)

    def __mul__(self, other: 'FreeWord') -> 'FreeWord':
        return FreeWord.of(self.letters + other.letters)

    def inverse(self) -> 'FreeWord':
        return FreeWord(tuple((gen, -exp) for gen, exp in reversed(self.letters)))

    def is_reduced(self) -> bool:
        return all(a != (b[0], -b[1]) for a, b in zip(self.letters, self.letters[1:]))

    def generators(self) -> List[int]:
        return sorted({gen for gen, _ in self.letters})

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return '1'
        out, i = [], 0
        while i < len(self.letters):
            j = i
            while j < len(self.letters) and self.letters[j] == self.letters[i]:
                j += 1
            gen, exp = self.letters[i]
            power = (j - i) * exp
            out.append(f'u{gen}' if power == 1 else f'u{gen}^{power}')
            i = j
        return ' '.join(out)


### Labeling and the map on loops


@dataclass(frozen=True)
class Labeling:
    '''
    Letter of every edge, read along its PLUS to MINUS direction

    An A-edge reads the region on its left, a B-edge the region on its right; the outer region reads
    nothing (None)
    '''
    graph: PlanarStateGraph = field(repr=False)
    n: int
    letters: Mapping[int, Optional[int]]
    plus_darts: Mapping[int, int]
    unused: Tuple[int, ...] = ()

    def read(self, dart: int) -> Optional[Letter]:
        eid = self.graph.edge_of(dart)
        gen = self.letters[eid]
        if gen is None:
            return None
        return gen, 1 if dart == self.plus_darts[eid] else -1


def label_edges(g: PlanarStateGraph, f: Optional[FaceSet] = None) -> Labeling:
    if g.signs is None:
        raise GraphError('label_edges needs a signed graph', ErrorCode.UNSIGNED)
    if has_cut_vertex(g):
        raise GraphError('label_edges needs a piece without cut vertices', ErrorCode.HAS_CUT_VERTEX)
    f = f if f is not None else faces(g)

    letters: Dict[int, Optional[int]] = {}
    plus: Dict[int, int] = {}
    for e in g.edges:
        d = plus_dart(g, e.id)
        plus[e.id] = d
        region = f.right(g.twin(d)) if e.label is EdgeLabel.A else f.right(d)
        letters[e.id] = region or None
    used = {x for x in letters.values() if x is not None}
    return Labeling(g, f.n, letters, plus, tuple(i for i in range(1, f.n + 1) if i not in used))


def _tree(g: PlanarStateGraph, basepoint: int, rng: Optional[random.Random]) -> Dict[int, int]:
    # breadth-first spanning tree: vertex -> dart arriving from its parent
    order = sorted(g.edge_ids)
    if rng is not None:
        rng.shuffle(order)
    rank_of = {eid: i for i, eid in enumerate(order)}
    parent: Dict[int, int] = {}
    seen = {basepoint}
    queue = deque([basepoint])
    while queue:
        v = queue.popleft()
        for d in sorted(g.vertex(v).rotation, key=lambda d: (rank_of[g.edge_of(d)], d)):
            w = g.head(d)
            if w not in seen:
                seen.add(w)
                parent[w] = d
                queue.append(w)
    return parent


def _path_to(g: PlanarStateGraph, parent: Dict[int, int], v: int) -> List[int]:
    path = []
    while v in parent:
        path.append(parent[v])
        v = g.vertex_of(parent[v])
    return path[::-1]


def generators(
    g: PlanarStateGraph,
    basepoint: int,
    mode: str = 'tree',
    rng: Optional[random.Random] = None,
    f: Optional[FaceSet] = None,
    connectors: Optional[Mapping[int, Sequence[int]]] = None
) -> List[List[int]]:
    '''
    A basis of loops at `basepoint` as closed dart walks

    "tree": one loop per edge outside a breadth-first spanning tree, crossing that edge PLUS to MINUS.
    "regions": the counterclockwise boundary of every bounded region, reached from the basepoint along
    `connectors[region]` (a dart path) or else along the tree path, and left the same way back.
    `rng` randomizes the spanning tree
    '''
    parent = _tree(g, basepoint, rng)

    def closed(darts: List[int]) -> List[int]:
        there = _path_to(g, parent, g.vertex_of(darts[0]))
        back = [g.twin(d) for d in reversed(_path_to(g, parent, g.head(darts[-1])))]
        return there + darts + back

    if mode == 'tree':
        used = set(parent.values())
        loops = []
        for eid in sorted(g.edge_ids):
            if not set(g.edge(eid).darts) & used:
                d0, d1 = g.edge(eid).darts
                d = d0 if g.signs is None or g.sign(g.vertex_of(d0)) is VertexSign.PLUS else d1
                loops.append(closed([d]))
        return loops
    if mode == 'regions':
        f = f if f is not None else faces(g)
        connectors = connectors or {}
        loops = []
        for face in f.bounded:
            # faces are traced with the region on the right; reversed twins keep it on the left
            around = [g.twin(d) for d in reversed(face.darts)]
            if face.index in connectors:
                path = list(connectors[face.index])
                start = g.head(path[-1]) if path else basepoint
            else:
                start = g.vertex_of(around[0])
                path = _path_to(g, parent, start)
            i = next((i for i, d in enumerate(around) if g.vertex_of(d) == start), None)
            if i is None:
                raise AlgebraError(f'connector of region {face.index} ends at vertex {start}, off its boundary',
                                   ErrorCode.PATH_NOT_CLOSED)
            loops.append(path + around[i:] + around[:i] + [g.twin(d) for d in reversed(path)])
        return loops
    raise ValueError(f'unknown generator mode {mode!r}')


def phi(path: Sequence[int], labeling: Labeling, basepoint: int) -> FreeWord:
    g = labeling.graph
    at = basepoint
    for i, d in enumerate(path):
        if g.vertex_of(d) != at:
            raise AlgebraError(f'dart {d} at step {i} does not leave vertex {at}', ErrorCode.PATH_NOT_CLOSED)
        at = g.head(d)
    if at != basepoint:
        raise AlgebraError(f'path ends at {at}, not at basepoint {basepoint}', ErrorCode.PATH_NOT_CLOSED)
    return FreeWord.of(letter for letter in map(labeling.read, path) if letter is not None)


### Directed labeled graphs and folding


class GammaEdge(NamedTuple):
    id: int
    tail: int
    head: int
    letter: int


@dataclass(frozen=True)
class DirectedLabeledGraph:
    vertices: Tuple[int, ...]
    edges: Tuple[GammaEdge, ...]
    basepoint: int

    def is_rose(self) -> bool:
        return len(self.vertices) == 1 and all(e.tail == e.head for e in self.edges)

    def to_json(self) -> dict:
        return {
            'vertices': list(self.vertices),
            'edges': [[e.id, e.tail, e.head, e.letter] for e in self.edges],
            'basepoint': self.basepoint,
        }

    @classmethod
    def from_json(cls, data: dict) -> 'DirectedLabeledGraph':
        try:
            return cls(tuple(data['vertices']), tuple(GammaEdge(*map(int, e)) for e in data['edges']),
                       int(data['basepoint']))
        except (KeyError, TypeError, ValueError) as err:
            raise CertificateError(f'unreadable graph: {err}')


def build_gamma_from_words(words: Sequence[FreeWord], n: int) -> DirectedLabeledGraph:
    '''
    A wedge of one loop per word at vertex 0
    '''
    vertices = [0]
    edges: List[GammaEdge] = []
    for word in words:
        if any(gen > n for gen in word.generators()):
            raise AlgebraError(f'word {word} uses a generator beyond u{n}', ErrorCode.NON_SQUARE)
        at = 0
        for i, (gen, exp) in enumerate(word.letters):
            if i == len(word) - 1:
                nxt = 0
            else:
                nxt = len(vertices)
                vertices.append(nxt)
            tail, head = (at, nxt) if exp > 0 else (nxt, at)
            edges.append(GammaEdge(len(edges), tail, head, gen))
            at = nxt
    return DirectedLabeledGraph(tuple(vertices), tuple(edges), 0)


def build_gamma_from_graph(g: PlanarStateGraph, labeling: Labeling, basepoint: int) -> DirectedLabeledGraph:
    '''
    Direct every edge PLUS to MINUS with its letter and contract the edges that read nothing

    A contracted class is named by its smallest vertex id
    '''
    parent = {v: v for v in g.vertex_ids}

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in g.edges:
        if labeling.letters[e.id] is None:
            a, b = find(g.vertex_of(e.darts[0])), find(g.vertex_of(e.darts[1]))
            if a != b:
                parent[max(a, b)] = min(a, b)

    edges = []
    for e in g.edges:
        gen = labeling.letters[e.id]
        if gen is None:
            continue
        d = labeling.plus_darts[e.id]
        edges.append(GammaEdge(e.id, find(g.vertex_of(d)), find(g.head(d)), gen))
    vertices = tuple(sorted({find(v) for v in g.vertex_ids}))
    return DirectedLabeledGraph(vertices, tuple(edges), find(basepoint))


class CertificateKind(str, Enum):
    ROSE = 'ROSE'
    NON_ROSE = 'NON_ROSE'


@dataclass(frozen=True)
class Fold:
    vertex: int
    kept: int
    dropped: int


@dataclass(frozen=True)
class Certificate:
    kind: CertificateKind
    folds: Tuple[Fold, ...]
    final: DirectedLabeledGraph
    # edges of the state graph contracted for reading nothing
    contracted: Tuple[int, ...] = ()

    def replay(self, gamma: DirectedLabeledGraph) -> DirectedLabeledGraph:
        '''
        Re-apply the folds to `gamma` and check the outcome is the folded graph on record
        '''
        uf = _Classes(gamma.vertices)
        edges = {e.id: e for e in gamma.edges}
        alive = set(edges)
        for i, fold in enumerate(self.folds):
            if fold.kept not in alive or fold.dropped not in alive or fold.kept == fold.dropped:
                raise CertificateError(f'fold {i}: edges {fold.kept}, {fold.dropped} are not both present')
            k, d = edges[fold.kept], edges[fold.dropped]
            if k.letter != d.letter:
                raise CertificateError(f'fold {i}: edges {k.id} and {d.id} carry different letters')
            v = uf.find(fold.vertex)
            if uf.find(k.tail) == uf.find(d.tail) == v:
                uf.union(k.head, d.head)
            elif uf.find(k.head) == uf.find(d.head) == v:
                uf.union(k.tail, d.tail)
            else:
                raise CertificateError(f'fold {i}: edges {k.id} and {d.id} do not meet at {fold.vertex} alike')
            alive.discard(d.id)

        final = _collapse_classes(uf, [edges[e] for e in sorted(alive)], gamma.vertices, gamma.basepoint)
        if not is_folded(final):
            raise CertificateError('replayed graph still has a foldable pair')
        if final != self.final:
            raise CertificateError('replayed graph differs from the recorded one')
        return final

    def to_json(self) -> dict:
        return {
            'kind': self.kind.value,
            'folds': [[f.vertex, f.kept, f.dropped] for f in self.folds],
            'final': self.final.to_json(),
            'contracted': list(self.contracted),
        }

    @classmethod
    def from_json(cls, data: dict) -> 'Certificate':
        try:
            return cls(CertificateKind(data['kind']), tuple(Fold(*map(int, f)) for f in data['folds']),
                       DirectedLabeledGraph.from_json(data['final']), tuple(data.get('contracted', ())))
        except (KeyError, TypeError, ValueError) as err:
            raise CertificateError(f'unreadable certificate: {err}')


class _Classes:
    '''
    Union-find over vertex ids; every class remembers its smallest member
    '''
    def __init__(self, vertices: Iterable[int]):
        self.parent = {v: v for v in vertices}
        self.size = {v: 1 for v in self.parent}
        self.least = {v: v for v in self.parent}

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def union(self, a: int, b: int) -> Tuple[int, int]:
        # returns (surviving root, absorbed root); equal when already joined
        a, b = self.find(a), self.find(b)
        if a == b:
            return a, a
        if self.size[a] < self.size[b]:
            a, b = b, a
        self.parent[b] = a
        self.size[a] += self.size[b]
        self.least[a] = min(self.least[a], self.least[b])
        return a, b

    def name(self, v: int) -> int:
        return self.least[self.find(v)]


def _collapse_classes(uf: _Classes, edges: Iterable[GammaEdge], vertices: Iterable[int],
                      basepoint: int) -> DirectedLabeledGraph:
    named = tuple(GammaEdge(e.id, uf.name(e.tail), uf.name(e.head), e.letter) for e in edges)
    return DirectedLabeledGraph(tuple(sorted({uf.name(v) for v in vertices})), named, uf.name(basepoint))


@njit(cache=True, nogil=True)
def _root(parent, v):
    root = v
    while parent[root] != root:
        root = parent[root]
    while parent[v] != root:
        up = parent[v]
        parent[v] = root
        v = up
    return root


@njit(cache=True, nogil=True)
def _absorb(parent, size, first, last, nxt, keep, gone):
    # class `gone` joins `keep` and its incidence list is appended to keep's
    parent[gone] = keep
    size[keep] += size[gone]
    if first[gone] != -1:
        if first[keep] == -1:
            first[keep] = first[gone]
        else:
            nxt[last[keep]] = first[gone]
        last[keep] = last[gone]
        first[gone] = -1
        last[gone] = -1


@njit(cache=True, nogil=True)
def _fold_arrays(tails, heads, letters, vertex_count, letter_count):
    '''
    Folds a graph given as edge arrays, edges ordered by id and vertices by index

    Every class keeps one linked list of edge ends: end 2e is the tail of edge e, end 2e + 1 its head. A
    dirty class is scanned with a table of the ends seen per letter and direction; a clash is a fold, and
    the two far endpoints are merged by size with their lists appended. A class merged into the one being
    scanned is scanned on the spot, any other merged class goes back on the stack.

    Returns the root of every vertex, which edges survive, and each fold as (vertex, kept, dropped)
    '''
    m = tails.shape[0]
    parent = np.arange(vertex_count)
    size = np.ones(vertex_count, np.int64)
    alive = np.ones(m, np.bool_)
    first = np.full(vertex_count, -1, np.int64)
    last = np.full(vertex_count, -1, np.int64)
    nxt = np.full(2 * m, -1, np.int64)
    for end in range(2 * m):
        at = tails[end // 2] if end % 2 == 0 else heads[end // 2]
        if last[at] == -1:
            first[at] = end
        else:
            nxt[last[at]] = end
        last[at] = end

    slot = np.full(2 * letter_count + 2, -1, np.int64)
    touched = np.empty(2 * letter_count + 2, np.int64)
    dirty = np.ones(vertex_count, np.bool_)
    # every merge pushes at most one class
    stack = np.empty(2 * vertex_count, np.int64)
    top = 0
    for i in range(vertex_count - 1, -1, -1):
        stack[top] = i
        top += 1

    fold_at = np.empty(m, np.int64)
    fold_kept = np.empty(m, np.int64)
    fold_dropped = np.empty(m, np.int64)
    count = 0

    while top > 0:
        top -= 1
        v = _root(parent, stack[top])
        if not dirty[v]:
            continue
        dirty[v] = False
        used = 0
        prev = -1
        end = first[v]
        while end != -1:
            e = end // 2
            if not alive[e]:
                following = nxt[end]
                if prev == -1:
                    first[v] = following
                else:
                    nxt[prev] = following
                if last[v] == end:
                    last[v] = prev
                end = following
                continue
            at_tail = end % 2 == 0
            key = 2 * letters[e] + (0 if at_tail else 1)
            other = slot[key]
            if other == e:
                prev = end
                end = nxt[end]
                continue
            if other == -1 or not alive[other]:
                if other == -1:
                    touched[used] = key
                    used += 1
                slot[key] = e
                prev = end
                end = nxt[end]
                continue

            kept = min(other, e)
            dropped = max(other, e)
            alive[dropped] = False
            slot[key] = kept
            fold_at[count] = v
            fold_kept[count] = kept
            fold_dropped[count] = dropped
            count += 1
            if at_tail:
                a = _root(parent, heads[kept])
                b = _root(parent, heads[dropped])
            else:
                a = _root(parent, tails[kept])
                b = _root(parent, tails[dropped])
            if a != b:
                if a == v or b == v:
                    _absorb(parent, size, first, last, nxt, v, b if a == v else a)
                else:
                    if size[a] < size[b]:
                        a, b = b, a
                    _absorb(parent, size, first, last, nxt, a, b)
                    dirty[b] = False
                    dirty[a] = True
                    stack[top] = a
                    top += 1
            # the same end again: unlinked if it was dropped, passed over if it was kept
        for i in range(used):
            slot[touched[i]] = -1

    roots = np.empty(vertex_count, np.int64)
    for i in range(vertex_count):
        roots[i] = _root(parent, i)
    return roots, alive, fold_at[:count], fold_kept[:count], fold_dropped[:count]


def _edge_arrays(gamma: DirectedLabeledGraph):
    # ids, tail and head vertex indices, letters, all ordered by edge id
    vertices = np.asarray(gamma.vertices, dtype=np.int64)
    table = np.fromiter(chain.from_iterable(gamma.edges), dtype=np.int64,
                        count=4 * len(gamma.edges)).reshape(-1, 4)
    table = table[np.argsort(table[:, 0], kind='stable')]
    order = np.argsort(vertices, kind='stable')
    ranked = vertices[order]

    def index(ids: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(order[np.searchsorted(ranked, ids)])

    return (vertices, np.ascontiguousarray(table[:, 0]), index(table[:, 1]), index(table[:, 2]),
            np.ascontiguousarray(table[:, 3]), int(index(np.array([gamma.basepoint]))[0]))


def fold(gamma: DirectedLabeledGraph, n: Optional[int] = None,
         trace: bool = True) -> Tuple[DirectedLabeledGraph, Certificate]:
    '''
    Fold until no vertex has two edges with the same letter and direction

    The certificate is a ROSE when the result is a rose on `n` petals (by default, on every letter of
    `gamma`). Vertices of the result are named by the smallest vertex of their class, and a fold always
    keeps the edge with the smaller id
    '''
    vertices, ids, tails, heads, letters, base = _edge_arrays(gamma)
    letter_count = int(letters.max()) if len(letters) else 0
    roots, alive, at, kept, dropped = _fold_arrays(tails, heads, letters, len(vertices), letter_count)

    least = np.full(len(vertices), np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(least, roots, vertices)
    names = least[roots]
    keep = np.flatnonzero(alive)
    edges = tuple(map(GammaEdge._make, zip(ids[keep].tolist(), names[tails[keep]].tolist(),
                                           names[heads[keep]].tolist(), letters[keep].tolist())))
    folded = DirectedLabeledGraph(tuple(np.unique(names).tolist()), edges, int(names[base]))

    folds: Tuple[Fold, ...] = ()
    if trace:
        folds = tuple(map(Fold, vertices[at].tolist(), ids[kept].tolist(), ids[dropped].tolist()))
    if n is None:
        n = len(set(letters.tolist()))
    kind = CertificateKind.ROSE if is_full_rose(folded, n) else CertificateKind.NON_ROSE
    logger.debug('%d folds: %d edges to %d', len(at), len(gamma.edges), len(folded.edges))
    return folded, Certificate(kind, folds, folded)


def is_folded(gamma: DirectedLabeledGraph) -> bool:
    seen = set()
    for e in gamma.edges:
        for key in (('out', e.tail, e.letter), ('in', e.head, e.letter)):
            if key in seen:
                return False
            seen.add(key)
    return True


def is_full_rose(folded: DirectedLabeledGraph, n: int) -> bool:
    return folded.is_rose() and len(folded.edges) == n and {e.letter for e in folded.edges} == set(range(1, n + 1))


def accepts(gamma: DirectedLabeledGraph, word: FreeWord) -> bool:
    '''
    Does some loop at the basepoint spell `word` letter by letter
    '''
    out: Dict[Tuple[int, int], List[int]] = {}
    for e in gamma.edges:
        out.setdefault((e.tail, e.letter), []).append(e.head)
        out.setdefault((e.head, -e.letter), []).append(e.tail)
    states = {gamma.basepoint}
    for gen, exp in word.letters:
        states = {w for v in states for w in out.get((v, gen * exp), ())}
        if not states:
            return False
    return gamma.basepoint in states


### Deciding a piece


def abelianize(words: Sequence[FreeWord], n: int) -> Tuple[sympy.Matrix, int]:
    '''
    Exponent-sum matrix (one row per word) and its exact determinant
    '''
    if len(words) != n:
        raise AlgebraError(f'{len(words)} words for {n} generators', ErrorCode.NON_SQUARE)
    if n == 0:
        return sympy.zeros(0, 0), 1
    rows = [[0] * n for _ in words]
    for row, word in zip(rows, words):
        for gen, exp in word.letters:
            if gen > n:
                raise AlgebraError(f'word {word} uses a generator beyond u{n}', ErrorCode.NON_SQUARE)
            row[gen - 1] += exp
    matrix = sympy.Matrix(rows)
    return matrix, int(matrix.det(method='bareiss'))


@dataclass(frozen=True)
class PieceDecision:
    verdict: Verdict
    certificate: Certificate
    words: Tuple[FreeWord, ...]
    determinant: int
    rank: int


def decide_piece(
    g: PlanarStateGraph,
    config: Optional[Config] = None,
    basepoint: Optional[int] = None,
    rng: Optional[random.Random] = None
) -> PieceDecision:
    '''
    FIBER exactly when the graph's loops fold onto a rose with one petal per bounded region

    The words of a loop basis are kept with the exponent-sum determinant; a FIBER needs it to be +-1
    '''
    config = config or Config()
    if basepoint is None:
        plus = [v.id for v, s in zip(g.vertices, g.signs or ()) if s is VertexSign.PLUS]
        basepoint = plus[0] if plus else g.vertices[0].id
    signed = assign_signs(g, basepoint)
    f = faces(signed)
    labeling = label_edges(signed, f)
    n = rank(signed)

    gamma = build_gamma_from_graph(signed, labeling, basepoint)
    folded, certificate = fold(gamma, n, trace=config.fold_trace)
    certificate = Certificate(certificate.kind, certificate.folds, certificate.final,
                              tuple(eid for eid, gen in sorted(labeling.letters.items()) if gen is None))
    verdict = Verdict.FIBER if certificate.kind is CertificateKind.ROSE else Verdict.NOT_FIBER

    loops = generators(signed, basepoint, config.generator_mode, rng, f)
    words = tuple(phi(path, labeling, basepoint) for path in loops)
    _, det = abelianize(words, n)
    if config.check_unimodular and verdict is Verdict.FIBER and abs(det) != 1:
        raise InternalMismatch(f'piece folds to a rose but its exponent matrix has determinant {det}')
    logger.debug('piece of rank %d: %s (det %d)', n, verdict.value, det)
    return PieceDecision(verdict, certificate, words, det, n)
