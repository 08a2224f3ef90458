'''
PD codes, Kauffman states and the state graphs they resolve to

Convention: a crossing X[a,b,c,d] lists its four arcs counterclockwise, starting from the incoming
under-strand. The A-resolution joins a-b and c-d, the B-resolution joins a-d and b-c
'''
import logging
import re
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from .errors import ErrorCode, GraphError, ParseError
from .graph_model import EdgeLabel, PlanarStateGraph, Vertex, Edge, validate

logger = logging.getLogger(__name__)

# (crossing index, slot 0..3)
Occurrence = Tuple[int, int]

_CROSSING = re.compile(r'X\s*\[([^\]]*)\]')

# the two arcs joined by each resolution, as counterclockwise-consecutive slot pairs;
# the pair holding slot a comes first
_SMOOTHING = {
    EdgeLabel.A: ((0, 1), (2, 3)),
    EdgeLabel.B: ((3, 0), (1, 2)),
}


@dataclass(frozen=True)
class PDCode:
    crossings: Tuple[Tuple[int, int, int, int], ...]

    def __len__(self) -> int:
        return len(self.crossings)

    @property
    def arcs(self) -> List[int]:
        return sorted({a for x in self.crossings for a in x})

    def occurrences(self) -> Dict[int, List[Occurrence]]:
        where: Dict[int, List[Occurrence]] = {}
        for i, crossing in enumerate(self.crossings):
            for slot, arc in enumerate(crossing):
                where.setdefault(arc, []).append((i, slot))
        return where

    def arc_at(self, occurrence: Occurrence) -> int:
        i, slot = occurrence
        return self.crossings[i][slot]

    def __str__(self) -> str:
        return ' '.join(f'X[{a},{b},{c},{d}]' for a, b, c, d in self.crossings)


@dataclass(frozen=True)
class KauffmanState:
    choices: Tuple[EdgeLabel, ...]

    def __len__(self) -> int:
        return len(self.choices)

    def __getitem__(self, i: int) -> EdgeLabel:
        return self.choices[i]

    def __str__(self) -> str:
        return ''.join(c.value for c in self.choices)


@dataclass(frozen=True)
class StateCircle:
    # arcs in counterclockwise order around the circle
    arcs: Tuple[int, ...]
    # band ends (2 * crossing + side) met on the outside, counterclockwise
    outside: Tuple[int, ...]
    # band ends on the inside, counterclockwise
    inside: Tuple[int, ...]

    @property
    def attachments(self) -> Tuple[int, ...]:
        return self.outside + self.inside


@dataclass(frozen=True)
class StateCircles:
    circles: Tuple[StateCircle, ...]

    def __len__(self) -> int:
        return len(self.circles)

    def circle_of(self, band_end: int) -> int:
        for i, circle in enumerate(self.circles):
            if band_end in circle.outside or band_end in circle.inside:
                return i
        raise KeyError(band_end)


### Parsing


def parse_pd(text: str) -> PDCode:
    '''
    Parse whitespace or comma separated `X[i,j,k,l]` tokens, optionally wrapped in `PD[...]`
    '''
    crossings = []
    for token in _CROSSING.findall(text):
        parts = [p.strip() for p in token.split(',')]
        if len(parts) != 4 or not all(p.isdigit() and int(p) > 0 for p in parts):
            raise ParseError(f'crossing X[{token}] needs four positive arc ids')
        crossings.append(tuple(int(p) for p in parts))

    leftover = _CROSSING.sub(' ', text)
    leftover = re.sub(r'^\s*PD\s*\[', ' ', leftover)
    leftover = re.sub(r'\]\s*$', ' ', leftover) if 'PD' in text else leftover
    if leftover.replace(',', ' ').strip():
        raise ParseError(f'unexpected text {leftover.strip()!r} in PD code')
    if not crossings:
        raise ParseError('PD code has no crossings')

    pd = PDCode(tuple(crossings))
    for arc, seen in pd.occurrences().items():
        if len(seen) != 2:
            raise ParseError(f'arc {arc} appears {len(seen)} times, expected 2', ErrorCode.ARC_COUNT)
    return pd


def parse_state(text: str, crossings: int) -> KauffmanState:
    letters = ''.join(text.split()).upper()
    if not letters or set(letters) - {'A', 'B'}:
        raise ParseError(f'state {text!r} must be a string over A and B')
    if len(letters) != crossings:
        raise ParseError(f'state has {len(letters)} choices for {crossings} crossings', ErrorCode.STATE_LENGTH)
    return KauffmanState(tuple(EdgeLabel(c) for c in letters))


def all_state(pd: PDCode, label: EdgeLabel) -> KauffmanState:
    return KauffmanState((label, ) * len(pd))


### Orientation and the Seifert state


@dataclass(frozen=True)
class DirectedArc:
    arc: int
    tail: Occurrence
    head: Occurrence


def _walk(pd: PDCode, where: Dict[int, List[Occurrence]], arc: int, head: Occurrence) -> List[DirectedArc]:
    # follow a strand straight through each crossing until it closes up
    path = []
    tail = where[arc][0] if where[arc][1] == head else where[arc][1]
    start = (arc, head)
    while True:
        path.append(DirectedArc(arc, tail, head))
        tail = (head[0], (head[1] + 2) % 4)
        arc = pd.arc_at(tail)
        first, second = where[arc]
        head = second if first == tail else first
        if (arc, head) == start:
            return path


def components(pd: PDCode) -> Dict[int, List[DirectedArc]]:
    '''
    Link components keyed by their smallest arc, each walked in its base direction

    The base direction leaves the smallest arc towards its smaller-numbered neighbour
    '''
    where = pd.occurrences()
    found: Dict[int, List[DirectedArc]] = {}
    done = set()
    for arc in pd.arcs:
        if arc in done:
            continue
        first, second = where[arc]
        ahead = pd.arc_at((first[0], (first[1] + 2) % 4))
        behind = pd.arc_at((second[0], (second[1] + 2) % 4))
        path = _walk(pd, where, arc, second if behind < ahead else first)
        found[arc] = path
        done.update(step.arc for step in path)
    return found


def _reverse(path: List[DirectedArc]) -> List[DirectedArc]:
    return [DirectedArc(step.arc, step.head, step.tail) for step in reversed(path)]


def seifert_state(pd: PDCode, orientation: Optional[Mapping[int, int]] = None) -> KauffmanState:
    '''
    The orientation-respecting resolution at every crossing

    `orientation` maps a component (its smallest arc) to +1 or -1 relative to its base direction.
    Components left out follow their under-crossings, which the PD convention orients from slot a to
    slot c. Any disagreement raises INCONSISTENT_ORIENTATION
    '''
    orientation = dict(orientation or {})
    paths = components(pd)
    unknown = set(orientation) - set(paths)
    if unknown:
        raise ParseError(f'no component starts at arcs {sorted(unknown)}', ErrorCode.INCONSISTENT_ORIENTATION)

    over_head: Dict[int, int] = {}
    for key, path in paths.items():
        under = {step.head[1] for step in path if step.head[1] in (0, 2)}
        if len(under) > 1:
            raise ParseError(f'component {key} runs both ways through under-crossings',
                             ErrorCode.INCONSISTENT_ORIENTATION)
        forced = None if not under else (1 if under == {0} else -1)
        wanted = orientation.get(key, forced or 1)
        if wanted not in (1, -1):
            raise ParseError(f'orientation of component {key} must be +1 or -1', ErrorCode.INCONSISTENT_ORIENTATION)
        if forced is not None and wanted != forced:
            raise ParseError(f'component {key} is oriented against its under-crossings',
                             ErrorCode.INCONSISTENT_ORIENTATION)
        for step in (path if wanted == 1 else _reverse(path)):
            if step.head[1] in (1, 3):
                over_head[step.head[0]] = step.head[1]

    # over-strand entering at d and leaving at b gives the A-resolution
    return KauffmanState(tuple(EdgeLabel.A if over_head[i] == 3 else EdgeLabel.B for i in range(len(pd))))


### Circles and the resolved graph


class _SmoothedDiagram:
    '''
    The resolved diagram as a planar trivalent map

    Every crossing i becomes two band ends 2i (on the smoothing arc through slot a) and 2i+1, joined
    by a band. Darts: 4i+s for the arc leaving slot s of crossing i, 4n+2i+k for band end 2i+k
    '''
    def __init__(self, pd: PDCode, state: KauffmanState):
        n = len(pd)
        self.n = n
        self.rotation: Dict[int, Tuple[int, int, int]] = {}
        self.vertex_of: Dict[int, int] = {}
        self.twin: Dict[int, int] = {}
        self.arc_of: Dict[int, int] = {}

        for i, label in enumerate(state.choices):
            for k, (s, t) in enumerate(_SMOOTHING[label]):
                end = 2 * i + k
                band = 4 * n + end
                self.rotation[end] = (4 * i + s, 4 * i + t, band)
                for dart in self.rotation[end]:
                    self.vertex_of[dart] = end
            self.twin[4 * n + 2 * i] = 4 * n + 2 * i + 1
            self.twin[4 * n + 2 * i + 1] = 4 * n + 2 * i

        for arc, ((i, s), (j, t)) in pd.occurrences().items():
            self.twin[4 * i + s] = 4 * j + t
            self.twin[4 * j + t] = 4 * i + s
            self.arc_of[4 * i + s] = arc
            self.arc_of[4 * j + t] = arc

        self.succ: Dict[int, int] = {}
        for rot in self.rotation.values():
            for k in range(3):
                self.succ[rot[k]] = rot[(k + 1) % 3]

        self.face_of: Dict[int, int] = {}
        self.faces: List[List[int]] = []
        for start in sorted(self.twin):
            if start in self.face_of:
                continue
            face, dart = [], start
            while dart not in self.face_of:
                self.face_of[dart] = len(self.faces)
                face.append(dart)
                dart = self.succ[self.twin[dart]]
            self.faces.append(face)

    def is_band(self, dart: int) -> bool:
        return dart >= 4 * self.n

    def euler_characteristic(self) -> int:
        return 2 * self.n - 3 * self.n + len(self.faces)

    def infinity(self) -> int:
        # the point at infinity sits in the longest face
        return max(range(len(self.faces)), key=lambda f: (len(self.faces[f]), -f))

    def side_reaches(self, face: int, target: int, fence: set) -> bool:
        # can `face` reach `target` without crossing an arc in `fence`
        seen = {face}
        queue = deque([face])
        while queue:
            f = queue.popleft()
            if f == target:
                return True
            for dart in self.faces[f]:
                if dart in fence:
                    continue
                g = self.face_of[self.twin[dart]]
                if g not in seen:
                    seen.add(g)
                    queue.append(g)
        return False


def _check_connected(pd: PDCode) -> None:
    parent = list(range(len(pd)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (i, _), (j, _) in pd.occurrences().values():
        parent[find(i)] = find(j)
    if len({find(i) for i in range(len(pd))}) != 1:
        raise GraphError('diagram is split', ErrorCode.DISCONNECTED)


def trace_circles(pd: PDCode, state: KauffmanState) -> StateCircles:
    '''
    Trace the state circles and record, for each, the band ends on either side

    "Outside" is the side holding the point at infinity (placed in the longest face of the resolved
    diagram); both sequences are counterclockwise
    '''
    if len(state) != len(pd):
        raise ParseError(f'state has {len(state)} choices for {len(pd)} crossings', ErrorCode.STATE_LENGTH)
    _check_connected(pd)
    diagram = _SmoothedDiagram(pd, state)
    if diagram.euler_characteristic() != 2:
        raise GraphError(f'PD code is not planar (Euler characteristic {diagram.euler_characteristic()})',
                         ErrorCode.NON_SPHERICAL)
    infinity = diagram.infinity()

    circles = []
    used = set()
    where = pd.occurrences()
    for arc in sorted(where):
        if arc in used:
            continue
        i, s = where[arc][0]
        start = 4 * i + s
        arcs, ends, sides, fence = [], [], [], set()
        dart = start
        while True:
            arcs.append(diagram.arc_of[dart])
            fence.update((dart, diagram.twin[dart]))
            arrive = diagram.twin[dart]
            end = diagram.vertex_of[arrive]
            first, second, band = diagram.rotation[end]
            leave = second if arrive == first else first
            # entering on the first slot and leaving on the second keeps the band on the left
            ends.append(end)
            sides.append('left' if arrive == first else 'right')
            dart = leave
            if dart == start:
                break
        used.update(arcs)

        right_is_outside = diagram.side_reaches(diagram.face_of[start], infinity, fence)
        if right_is_outside:
            order = list(zip(ends, sides))
            outside_side = 'right'
        else:
            order = list(reversed(list(zip(ends, sides))))
            arcs = list(reversed(arcs))
            outside_side = 'left'
        outside = tuple(e for e, side in order if side == outside_side)
        inside = tuple(e for e, side in order if side != outside_side)
        circles.append(StateCircle(tuple(arcs), outside, inside))

    logger.debug('state %s has %d circles', state, len(circles))
    return StateCircles(tuple(circles))


def resolve(pd: PDCode, state: KauffmanState) -> PlanarStateGraph:
    '''
    One vertex per state circle, one labeled edge per crossing

    The rotation at a circle lists its outside band ends counterclockwise, then its inside band ends
    clockwise. Collapsing the circle to a point turns its inside into a sphere glued at that point, which
    reverses the order there; the inner block then sits in one corner of the outer one
    '''
    circles = trace_circles(pd, state)
    vertices = []
    for vid, circle in enumerate(circles.circles):
        vertices.append(Vertex(vid, circle.outside + tuple(reversed(circle.inside))))
    edges = tuple(Edge(i, label, (2 * i, 2 * i + 1)) for i, label in enumerate(state.choices))
    g = PlanarStateGraph(tuple(vertices), edges)
    validate(g)
    return g
