'''
Planar-embedded, A/B-labeled state graphs

A graph is stored purely combinatorially: every edge is a pair of half-edges ("darts") and every vertex
lists its darts in counterclockwise order (a rotation system). Faces come from the rotation system alone,
so no coordinates are ever needed
'''
import logging
import random
import re
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Tuple

import networkx as nx

from .errors import ErrorCode, GraphError, ParseError

logger = logging.getLogger(__name__)


class EdgeLabel(str, Enum):
    A = 'A'
    B = 'B'

    @property
    def other(self) -> 'EdgeLabel':
        return EdgeLabel.B if self is EdgeLabel.A else EdgeLabel.A


class VertexSign(str, Enum):
    PLUS = '+'
    MINUS = '-'

    @property
    def other(self) -> 'VertexSign':
        return VertexSign.MINUS if self is VertexSign.PLUS else VertexSign.PLUS


@dataclass(frozen=True)
class Vertex:
    id: int
    # darts leaving this vertex, counterclockwise
    rotation: Tuple[int, ...]


@dataclass(frozen=True)
class Edge:
    id: int
    label: EdgeLabel
    darts: Tuple[int, int]


@dataclass(frozen=True)
class PlanarStateGraph:
    '''
    A connected multigraph with a rotation system and A/B edge labels

    Loops and parallel edges are allowed. `outer` is any dart on the outer face, `signs` is aligned
    with `vertices` and only present once `assign_signs` succeeded

    The lookup tables below are built lazily and are not part of equality
    '''
    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...] = ()
    outer: Optional[int] = None
    signs: Optional[Tuple[VertexSign, ...]] = None

    ### Lookups

    @cached_property
    def _vertex_index(self) -> Dict[int, int]:
        return {v.id: i for i, v in enumerate(self.vertices)}

    @cached_property
    def _edge_index(self) -> Dict[int, int]:
        return {e.id: i for i, e in enumerate(self.edges)}

    @cached_property
    def _dart_vertex(self) -> Dict[int, int]:
        return {d: v.id for v in self.vertices for d in v.rotation}

    @cached_property
    def _dart_edge(self) -> Dict[int, int]:
        return {d: e.id for e in self.edges for d in e.darts}

    @cached_property
    def _twin(self) -> Dict[int, int]:
        twin = {}
        for e in self.edges:
            d0, d1 = e.darts
            twin[d0] = d1
            twin[d1] = d0
        return twin

    @cached_property
    def _succ(self) -> Dict[int, int]:
        succ = {}
        for v in self.vertices:
            rot = v.rotation
            for i, d in enumerate(rot):
                succ[d] = rot[(i + 1) % len(rot)]
        return succ

    @cached_property
    def _pred(self) -> Dict[int, int]:
        return {b: a for a, b in self._succ.items()}

    def vertex(self, vid: int) -> Vertex:
        return self.vertices[self._vertex_index[vid]]

    def edge(self, eid: int) -> Edge:
        return self.edges[self._edge_index[eid]]

    def has_vertex(self, vid: int) -> bool:
        return vid in self._vertex_index

    def vertex_of(self, dart: int) -> int:
        return self._dart_vertex[dart]

    def edge_of(self, dart: int) -> int:
        return self._dart_edge[dart]

    def twin(self, dart: int) -> int:
        return self._twin[dart]

    def succ(self, dart: int) -> int:
        # counterclockwise successor around the dart's vertex
        return self._succ[dart]

    def pred(self, dart: int) -> int:
        return self._pred[dart]

    def head(self, dart: int) -> int:
        return self._dart_vertex[self._twin[dart]]

    def endpoints(self, eid: int) -> Tuple[int, int]:
        d0, d1 = self.edge(eid).darts
        return self._dart_vertex[d0], self._dart_vertex[d1]

    def degree(self, vid: int) -> int:
        return len(self.vertex(vid).rotation)

    def label(self, eid: int) -> EdgeLabel:
        return self.edge(eid).label

    def sign(self, vid: int) -> VertexSign:
        if self.signs is None:
            raise GraphError('graph has not been signed', ErrorCode.UNSIGNED)
        return self.signs[self._vertex_index[vid]]

    @property
    def darts(self) -> List[int]:
        return sorted(self._dart_vertex)

    @property
    def vertex_ids(self) -> List[int]:
        return [v.id for v in self.vertices]

    @property
    def edge_ids(self) -> List[int]:
        return [e.id for e in self.edges]

    def is_loop(self, eid: int) -> bool:
        u, v = self.endpoints(eid)
        return u == v


@dataclass(frozen=True)
class ValidationReport:
    vertex_count: int
    edge_count: int
    face_count: int

    @property
    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + self.face_count

    @property
    def rank(self) -> int:
        return self.edge_count - self.vertex_count + 1


@dataclass(frozen=True)
class Face:
    index: int
    darts: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.darts)


@dataclass(frozen=True)
class FaceSet:
    '''
    Faces of a plane map, outer face first (index 0), then R_1..R_n

    Each face lies on the right of its darts, so bounded faces are traced clockwise
    '''
    faces: Tuple[Face, ...]
    # True when the outer face was picked as the longest face rather than given
    outer_defaulted: bool = False
    face_of: Mapping[int, int] = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def outer(self) -> Face:
        return self.faces[0]

    @property
    def bounded(self) -> Tuple[Face, ...]:
        return self.faces[1:]

    @property
    def n(self) -> int:
        return len(self.faces) - 1

    def right(self, dart: int) -> int:
        return self.face_of[dart]

    def __len__(self) -> int:
        return len(self.faces)

    def __iter__(self):
        return iter(self.faces)


### Validation, faces, signing, rank


def _trace_faces(g: PlanarStateGraph) -> List[Tuple[int, ...]]:
    seen = set()
    cycles = []
    for start in g.darts:
        if start in seen:
            continue
        cycle = []
        dart = start
        while dart not in seen:
            seen.add(dart)
            cycle.append(dart)
            dart = g.succ(g.twin(dart))
        cycles.append(tuple(cycle))
    return cycles


def _check_structure(g: PlanarStateGraph) -> None:
    if not g.vertices:
        raise GraphError('graph has no vertices', ErrorCode.DISCONNECTED)
    if len(g._vertex_index) != len(g.vertices):
        raise GraphError('duplicate vertex id', ErrorCode.MALFORMED_ROTATION)
    if len(g._edge_index) != len(g.edges):
        raise GraphError('duplicate edge id', ErrorCode.MALFORMED_ROTATION)

    rotation_darts = [d for v in g.vertices for d in v.rotation]
    edge_darts = [d for e in g.edges for d in e.darts]
    if len(set(rotation_darts)) != len(rotation_darts):
        raise GraphError('a dart appears in more than one rotation slot', ErrorCode.MALFORMED_ROTATION)
    if len(set(edge_darts)) != len(edge_darts):
        raise GraphError('a dart belongs to more than one edge end', ErrorCode.MALFORMED_ROTATION)
    missing = set(edge_darts) ^ set(rotation_darts)
    if missing:
        raise GraphError(f'darts {sorted(missing)} are not both in a rotation and an edge',
                         ErrorCode.MALFORMED_ROTATION)
    if g.outer is not None and g.outer not in g._dart_vertex:
        raise GraphError(f'outer dart {g.outer} does not exist', ErrorCode.MALFORMED_ROTATION)
    if g.signs is not None and len(g.signs) != len(g.vertices):
        raise GraphError('signs are not aligned with vertices', ErrorCode.MALFORMED_ROTATION)


def _components(g: PlanarStateGraph) -> int:
    seen = set()
    count = 0
    for v in g.vertices:
        if v.id in seen:
            continue
        count += 1
        seen.add(v.id)
        queue = deque([v.id])
        while queue:
            u = queue.popleft()
            for d in g.vertex(u).rotation:
                w = g.head(d)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return count


def validate(g: PlanarStateGraph) -> ValidationReport:
    '''
    Check rotation consistency, connectivity and the sphere Euler formula

    Raises GraphError with MALFORMED_ROTATION, DISCONNECTED or NON_SPHERICAL, returns the counts otherwise
    '''
    _check_structure(g)
    count = _components(g)
    if count != 1:
        raise GraphError(f'graph has {count} components', ErrorCode.DISCONNECTED)
    face_count = len(_trace_faces(g)) if g.edges else 1
    report = ValidationReport(len(g.vertices), len(g.edges), face_count)
    if report.euler_characteristic != 2:
        raise GraphError(f'V - E + F = {report.euler_characteristic}, rotation system is not spherical',
                         ErrorCode.NON_SPHERICAL)
    if g.signs is not None:
        for e in g.edges:
            u, v = g.endpoints(e.id)
            if g.sign(u) == g.sign(v):
                raise GraphError(f'edge {e.id} joins two {g.sign(u).name} vertices', ErrorCode.NON_BIPARTITE)
    return report


def faces(g: PlanarStateGraph) -> FaceSet:
    cycles = _trace_faces(g)
    if not cycles:
        return FaceSet((Face(0, ()), ), outer_defaulted=g.outer is None)

    if g.outer is not None:
        outer = next(i for i, c in enumerate(cycles) if g.outer in c)
    else:
        # longest face, earliest discovered on ties
        outer = max(range(len(cycles)), key=lambda i: (len(cycles[i]), -i))
        logger.debug('no outer dart given, using the face of length %d at dart %d', len(cycles[outer]),
                     cycles[outer][0])

    ordered = [cycles[outer]] + [c for i, c in enumerate(cycles) if i != outer]
    face_list = tuple(Face(i, c) for i, c in enumerate(ordered))
    face_of = {d: f.index for f in face_list for d in f.darts}
    return FaceSet(face_list, outer_defaulted=g.outer is None, face_of=face_of)


def rank(g: PlanarStateGraph) -> int:
    return len(g.edges) - len(g.vertices) + 1


def assign_signs(g: PlanarStateGraph, basepoint: Optional[int] = None) -> PlanarStateGraph:
    '''
    Two-colour the vertices with `basepoint` marked PLUS

    An odd cycle (a loop included) raises NON_BIPARTITE: the state surface is then non-orientable
    '''
    if basepoint is None:
        basepoint = g.vertices[0].id
    if not g.has_vertex(basepoint):
        raise GraphError(f'basepoint {basepoint} is not a vertex', ErrorCode.MALFORMED_ROTATION)

    colour = {basepoint: VertexSign.PLUS}
    queue = deque([basepoint])
    while queue:
        u = queue.popleft()
        for d in g.vertex(u).rotation:
            w = g.head(d)
            if w not in colour:
                colour[w] = colour[u].other
                queue.append(w)
            elif colour[w] == colour[u]:
                raise GraphError(f'odd cycle through edge {g.edge_of(d)}', ErrorCode.NON_BIPARTITE)
    if len(colour) != len(g.vertices):
        raise GraphError('graph is disconnected', ErrorCode.DISCONNECTED)
    return replace(g, signs=tuple(colour[v.id] for v in g.vertices))


def plus_dart(g: PlanarStateGraph, eid: int) -> int:
    # the dart of `eid` that leaves its PLUS endpoint
    d0, d1 = g.edge(eid).darts
    return d0 if g.sign(g.vertex_of(d0)) is VertexSign.PLUS else d1


### Small immutable edits


def with_outer(g: PlanarStateGraph, dart: Optional[int]) -> PlanarStateGraph:
    return replace(g, outer=dart)


def relabel(g: PlanarStateGraph, labels: Mapping[int, EdgeLabel]) -> PlanarStateGraph:
    return replace(g, edges=tuple(replace(e, label=labels.get(e.id, e.label)) for e in g.edges))


def swap_labels(g: PlanarStateGraph) -> PlanarStateGraph:
    return relabel(g, {e.id: e.label.other for e in g.edges})


def mirror(g: PlanarStateGraph) -> PlanarStateGraph:
    # reflecting the plane reverses every rotation; the outer region is then found on the twin dart
    outer = g.twin(g.outer) if g.outer is not None else None
    return replace(g, vertices=tuple(Vertex(v.id, tuple(reversed(v.rotation))) for v in g.vertices), outer=outer)


def underlying_nx(g: PlanarStateGraph) -> nx.MultiGraph:
    graph = nx.MultiGraph()
    graph.add_nodes_from(g.vertex_ids)
    for e in g.edges:
        u, v = g.endpoints(e.id)
        graph.add_edge(u, v, key=e.id, label=e.label)
    return graph


def blocks(g: PlanarStateGraph) -> List[Tuple[int, ...]]:
    '''
    Edge ids of every block (maximal 2-connected piece), sorted by smallest edge id

    Parallel edges stay in the block of their endpoint pair and each loop is a block on its own
    '''
    simple = nx.Graph()
    simple.add_nodes_from(g.vertex_ids)
    between: Dict[frozenset, List[int]] = {}
    found = []
    for e in g.edges:
        u, v = g.endpoints(e.id)
        if u == v:
            found.append((e.id, ))
            continue
        simple.add_edge(u, v)
        between.setdefault(frozenset((u, v)), []).append(e.id)
    for component in nx.biconnected_component_edges(simple):
        found.append(tuple(sorted(eid for u, v in component for eid in between[frozenset((u, v))])))
    return sorted(found)


def has_cut_vertex(g: PlanarStateGraph) -> bool:
    return len(blocks(g)) > 1


def canonical_form(g: PlanarStateGraph) -> Tuple:
    '''
    Code of the labeled plane map that ignores vertex, edge and dart ids

    Minimum over all starting darts of a breadth-first walk of the rotation system, so two graphs have
    the same code exactly when an orientation preserving, label preserving map takes one onto the other
    '''
    if not g.edges:
        return (len(g.vertices), )
    return min(_code_from(g, start) for start in g.darts)


def _code_from(g: PlanarStateGraph, start: int) -> Tuple:
    number = {g.vertex_of(start): 0}
    entry = {0: start}
    code = []
    queue = deque([g.vertex_of(start)])
    while queue:
        v = queue.popleft()
        rot = g.vertex(v).rotation
        offset = rot.index(entry[number[v]])
        code.append(len(rot))
        for k in range(len(rot)):
            dart = rot[(offset + k) % len(rot)]
            back = g.twin(dart)
            w = g.vertex_of(back)
            if w not in number:
                number[w] = len(number)
                entry[number[w]] = back
                queue.append(w)
            w_rot = g.vertex(w).rotation
            position = (w_rot.index(back) - w_rot.index(entry[number[w]])) % len(w_rot)
            code.append((g.label(g.edge_of(dart)).value, number[w], position))
    return tuple(code)


### Text format

_LINE = re.compile(r'^(vertex|edge|outer|sign)\b(.*?):(.*)$')


def parse_graph(text: str, check: bool = True) -> PlanarStateGraph:
    '''
    Parse the line format::

        vertex <id> : <dart> <dart> ...     # counterclockwise
        edge <id> <A|B> : <dart> <dart>
        outer : <dart>                       # optional
        sign <vertex-id> : +|-               # optional, all or none

    With `check`, the parsed graph is also run through `validate`
    '''
    vertices: List[Vertex] = []
    edges: List[Edge] = []
    outer = None
    signs: Dict[int, VertexSign] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        match = _LINE.match(line)
        if not match:
            raise ParseError(f'line {lineno}: cannot parse {raw.strip()!r}')
        kind, head, tail = match.group(1), match.group(2).split(), match.group(3).split()
        try:
            if kind == 'vertex':
                if len(head) != 1:
                    raise ValueError
                vertices.append(Vertex(int(head[0]), tuple(int(t) for t in tail)))
            elif kind == 'edge':
                if len(head) != 2 or len(tail) != 2:
                    raise ValueError
                edges.append(Edge(int(head[0]), EdgeLabel(head[1].upper()), (int(tail[0]), int(tail[1]))))
            elif kind == 'outer':
                if head or len(tail) != 1 or outer is not None:
                    raise ValueError
                outer = int(tail[0])
            else:
                if len(head) != 1 or len(tail) != 1:
                    raise ValueError
                signs[int(head[0])] = VertexSign(tail[0])
        except ValueError:
            raise ParseError(f'line {lineno}: malformed {kind} line {raw.strip()!r}')

    if not vertices:
        raise ParseError('no vertex lines')
    sign_tuple = None
    if signs:
        if set(signs) != {v.id for v in vertices}:
            raise ParseError('sign lines must cover every vertex')
        sign_tuple = tuple(signs[v.id] for v in vertices)

    g = PlanarStateGraph(tuple(vertices), tuple(edges), outer, sign_tuple)
    if check:
        validate(g)
    return g


def serialize_graph(g: PlanarStateGraph) -> str:
    lines = []
    for v in g.vertices:
        lines.append(' '.join([f'vertex {v.id} :'] + [str(d) for d in v.rotation]))
    for e in g.edges:
        lines.append(f'edge {e.id} {e.label.value} : {e.darts[0]} {e.darts[1]}')
    if g.outer is not None:
        lines.append(f'outer : {g.outer}')
    if g.signs is not None:
        for v, s in zip(g.vertices, g.signs):
            lines.append(f'sign {v.id} : {s.value}')
    return '\n'.join(lines) + '\n'


### Building graphs


class GraphBuilder:
    '''
    Mutable scratch space for constructing a PlanarStateGraph

    Dart ids are allocated as 2*edge and 2*edge+1; `corner` positions index into a vertex rotation
    '''
    def __init__(self):
        self.rotations: Dict[int, List[int]] = {}
        self.labels: Dict[int, EdgeLabel] = {}
        self._next_vertex = 0
        self._next_edge = 0

    def add_vertex(self) -> int:
        vid = self._next_vertex
        self._next_vertex += 1
        self.rotations[vid] = []
        return vid

    def add_edge(self, u: int, v: int, label: EdgeLabel) -> Tuple[int, int]:
        # appends both darts at the end of their rotations; use insert_dart for finer placement
        eid = self._next_edge
        self._next_edge += 1
        self.labels[eid] = label
        self.rotations[u].append(2 * eid)
        self.rotations[v].append(2 * eid + 1)
        return 2 * eid, 2 * eid + 1

    def new_edge(self, label: EdgeLabel) -> Tuple[int, int]:
        # darts not yet placed in any rotation
        eid = self._next_edge
        self._next_edge += 1
        self.labels[eid] = label
        return 2 * eid, 2 * eid + 1

    def build(self, outer: Optional[int] = None) -> PlanarStateGraph:
        vertices = tuple(Vertex(v, tuple(rot)) for v, rot in self.rotations.items())
        edges = tuple(Edge(e, label, (2 * e, 2 * e + 1)) for e, label in self.labels.items())
        return PlanarStateGraph(vertices, edges, outer)


def random_planar_graph(
    rng: random.Random, edges: int, bipartite: bool = True, label_bias: float = 0.5, chord_rate: float = 0.5
) -> PlanarStateGraph:
    '''
    Grow a connected plane multigraph by inserting edges into faces

    Each step either hangs a pendant edge in a random corner or joins two corners of one face by a chord.
    With `bipartite`, chords only join vertices of opposite colour, so the result is signable
    '''
    builder = GraphBuilder()
    colour = {builder.add_vertex(): 0}
    dart_vertex: Dict[int, int] = {}

    def twin(d: int) -> int:
        return d ^ 1

    def corners() -> List[Tuple[int, int]]:
        # (vertex, insert position) for every corner, grouped by face
        succ = {}
        for v, rot in builder.rotations.items():
            for i, d in enumerate(rot):
                succ[d] = rot[(i + 1) % len(rot)]
        seen, grouped = set(), []
        for start in sorted(dart_vertex):
            if start in seen:
                continue
            face, d = [], start
            while d not in seen:
                seen.add(d)
                face.append(d)
                d = succ[twin(d)]
            grouped.append(face)
        return grouped

    def place(v: int, after: Optional[int], dart: int) -> None:
        rot = builder.rotations[v]
        rot.insert(rot.index(after) + 1 if after is not None else len(rot), dart)
        dart_vertex[dart] = v

    for _ in range(edges):
        label = EdgeLabel.A if rng.random() < label_bias else EdgeLabel.B
        chord = None
        if dart_vertex and rng.random() < chord_rate:
            face = rng.choice(corners())
            pairs = [(x, y) for x in face for y in face
                     if x < y and (not bipartite or colour[dart_vertex[twin(x)]] != colour[dart_vertex[twin(y)]])]
            if pairs:
                chord = rng.choice(pairs)
        if chord is not None:
            x, y = chord
            d0, d1 = builder.new_edge(label)
            # a corner sits at the head of a face dart, right after its twin in the rotation
            place(dart_vertex[twin(x)], twin(x), d0)
            place(dart_vertex[twin(y)], twin(y), d1)
        else:
            v = rng.choice(list(builder.rotations))
            rot = builder.rotations[v]
            after = rng.choice(rot) if rot else None
            w = builder.add_vertex()
            colour[w] = 1 - colour[v]
            d0, d1 = builder.new_edge(label)
            place(v, after, d0)
            place(w, None, d1)

    return builder.build()
