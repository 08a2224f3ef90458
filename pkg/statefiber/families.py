'''
Families of state graphs with closed-form answers: cycles, generalized theta graphs (pretzel links) and the
checkerboard graphs of 2-bridge links

Each family has a generator and a decider; the deciders are independent of the folding test and serve as
oracles for it
'''
import itertools
import logging
import random
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import ErrorCode, FamilyError, InternalMismatch
from .graph_model import (EdgeLabel, GraphBuilder, PlanarStateGraph, assign_signs, faces, random_planar_graph,
                          validate)
from .stallings import FreeWord, generators, label_edges, phi

logger = logging.getLogger(__name__)


def _sign(label: EdgeLabel) -> int:
    return 1 if label is EdgeLabel.A else -1


def _label(value: int) -> EdgeLabel:
    return EdgeLabel.A if value > 0 else EdgeLabel.B


### Cycles and trees


def cycle_graph(labels: Sequence[EdgeLabel]) -> PlanarStateGraph:
    '''
    Vertices 0..k-1 with edge i joining i to i+1
    '''
    if len(labels) < 2 or len(labels) % 2:
        raise FamilyError(f'a cycle needs an even length of at least 2, got {len(labels)}', ErrorCode.ODD_CYCLE)
    builder = GraphBuilder()
    vertices = [builder.add_vertex() for _ in labels]
    for i, label in enumerate(labels):
        builder.add_edge(vertices[i], vertices[(i + 1) % len(labels)], label)
    return builder.build()


def cycle_fiber(labels: Sequence[EdgeLabel]) -> bool:
    if len(labels) < 2 or len(labels) % 2:
        raise FamilyError(f'a cycle needs an even length of at least 2, got {len(labels)}', ErrorCode.ODD_CYCLE)
    return abs(sum(_sign(label) for label in labels)) == 2


def tree_graph(rng: random.Random, edges: int, label_bias: float = 0.5) -> PlanarStateGraph:
    return random_planar_graph(rng, edges, label_bias=label_bias, chord_rate=0.0)


def parse_labels(text: str) -> List[EdgeLabel]:
    try:
        return [EdgeLabel(c) for c in text.strip().upper()]
    except ValueError:
        raise FamilyError(f'labels {text!r} must be a string over A and B', ErrorCode.SYNTAX)


### Theta graphs and pretzel links


@dataclass(frozen=True)
class Strand:
    # edge labels from the first pole to the second
    labels: Tuple[EdgeLabel, ...]

    @classmethod
    def uniform(cls, vertices: int, label: EdgeLabel) -> 'Strand':
        return cls((label, ) * (vertices + 1))

    @classmethod
    def parse(cls, text: str) -> 'Strand':
        '''
        `3A` is a strand with three inner vertices labeled A throughout, `ABBA` lists every edge
        '''
        text = text.strip().upper()
        if text[:-1].isdigit() and text[-1:] in ('A', 'B'):
            return cls.uniform(int(text[:-1]), EdgeLabel(text[-1]))
        if text and set(text) <= {'A', 'B'}:
            return cls(tuple(EdgeLabel(c) for c in text))
        raise FamilyError(f'cannot read strand {text!r}', ErrorCode.SYNTAX)

    @property
    def vertices(self) -> int:
        return len(self.labels) - 1

    @property
    def label(self) -> Optional[EdgeLabel]:
        # None when the strand mixes labels
        return self.labels[0] if len(set(self.labels)) == 1 else None

    def __str__(self) -> str:
        if self.label is not None:
            return f'{self.vertices}{self.label.value}'
        return ''.join(label.value for label in self.labels)


@dataclass(frozen=True)
class ThetaSpec:
    strands: Tuple[Strand, ...]

    def __post_init__(self):
        if len(self.strands) < 3:
            raise FamilyError(f'a theta graph needs at least 3 strands, got {len(self.strands)}',
                              ErrorCode.TOO_FEW_STRANDS)
        if len({s.vertices % 2 for s in self.strands}) != 1:
            raise FamilyError('strand vertex counts must be all even or all odd', ErrorCode.PARITY)

    @classmethod
    def parse(cls, text: str) -> 'ThetaSpec':
        return cls(tuple(Strand.parse(part) for part in text.split(',')))

    def __str__(self) -> str:
        return ','.join(str(s) for s in self.strands)


def theta_graph(spec: ThetaSpec) -> PlanarStateGraph:
    '''
    Poles 0 and 1 joined by the strands, listed counterclockwise around pole 0

    The outer face is the one between the last and the first strand
    '''
    builder = GraphBuilder()
    north, south = builder.add_vertex(), builder.add_vertex()
    first_darts, last_darts = [], []
    for strand in spec.strands:
        at = north
        for i, label in enumerate(strand.labels):
            nxt = south if i == strand.vertices else builder.add_vertex()
            d0, d1 = builder.new_edge(label)
            builder.rotations[at].append(d0)
            if i == 0:
                first_darts.append(d0)
            if nxt == south:
                last_darts.append(d1)
            else:
                builder.rotations[nxt].append(d1)
            at = nxt
    builder.rotations[south].extend(reversed(last_darts))
    g = builder.build(outer=first_darts[0])
    validate(g)
    return g


def theta_to_pretzel(spec: ThetaSpec) -> List[int]:
    '''
    A strand with v inner vertices labeled A is v+1 crossings of one sign, labeled B of the other
    '''
    coefficients = []
    for strand in spec.strands:
        if strand.label is None:
            raise FamilyError(f'strand {strand} mixes labels', ErrorCode.UNREDUCED)
        coefficients.append(_sign(strand.label) * (strand.vertices + 1))
    return coefficients


def _arrangements(items: Sequence) -> Iterator[Tuple]:
    # every cyclic rotation of the sequence and of its reverse
    for seq in (tuple(items), tuple(reversed(items))):
        for i in range(len(seq)):
            yield seq[i:] + seq[:i]


def _alternating(values: Sequence[int], start: int) -> bool:
    return all(v == start * (-1)**i for i, v in enumerate(values))


def pretzel_fiber(p: Sequence[int]) -> bool:
    '''
    Whether the bounded checkerboard surface of the pretzel link P(p) is a fiber

    Either every entry is e or -3e with some entry e (e = +-1), or up to sign the entries read
    2, -2, ..., 2, -2, l with an odd count, or 2, -2, ..., -2, 2, -4 with an even count
    '''
    if not p or any(x == 0 for x in p):
        raise FamilyError(f'pretzel coefficients must be non-zero, got {list(p)}', ErrorCode.SYNTAX)
    for e in (1, -1):
        if all(x in (e, -3 * e) for x in p) and e in p:
            return True
    n = len(p)
    for seq in _arrangements(p):
        for e in (1, -1):
            head = [e * x for x in seq[:-1]]
            if n % 2 == 1 and _alternating(head, 2):
                return True
            if n % 2 == 0 and _alternating(head, 2) and e * seq[-1] == -4:
                return True
    return False


def theta_fiber(spec: ThetaSpec) -> bool:
    '''
    Fibering read off the strands of a reduced theta graph

    Either strands have 0 or 2 inner vertices, some have 0, and the two kinds carry opposite labels; or, in
    some arrangement, every strand but the last has one vertex with alternating labels and the last strand
    is free when the alternating run is even, or has 3 vertices and continues the alternation when it is odd
    '''
    kinds = []
    for strand in spec.strands:
        if strand.label is None:
            raise FamilyError(f'strand {strand} mixes labels, reduce it first', ErrorCode.UNREDUCED)
        kinds.append((strand.vertices, strand.label))

    zeros = {label for v, label in kinds if v == 0}
    twos = {label for v, label in kinds if v == 2}
    if all(v in (0, 2) for v, _ in kinds) and len(zeros) == 1 and (not twos or twos == {zeros.pop().other}):
        return True

    for seq in _arrangements(kinds):
        run, (last_vertices, last_label) = seq[:-1], seq[-1]
        if any(v != 1 for v, _ in run):
            continue
        labels = [label for _, label in run]
        if any(a == b for a, b in zip(labels, labels[1:])):
            continue
        if len(run) % 2 == 0:
            return True
        if last_vertices == 3 and last_label != labels[-1]:
            return True
    return False


### 2-bridge links


@dataclass(frozen=True)
class ContinuedFraction:
    '''
    Coefficients written a_{n-1}, ..., a_1, as in [a_{n-1}, ..., a_1]

    Odd-indexed coefficients become groups of parallel edges at the basepoint, even-indexed ones strands
    between them, and for n odd the leading coefficient closes the graph up
    '''
    coefficients: Tuple[int, ...]

    def __post_init__(self):
        a = self.coefficients
        if not a or any(x == 0 for x in a):
            raise FamilyError(f'coefficients must be non-zero, got {list(a)}')
        if abs(a[0]) < 2 or abs(a[-1]) < 2:
            raise FamilyError(f'first and last coefficients need |a| >= 2, got {list(a)}')
        for i in range(2, len(a) + 1, 2):
            closing = i == len(a)
            if closing and self[i] % 2 == 0:
                raise FamilyError(f'closing coefficient a_{i} = {self[i]} must be odd')
            if not closing and self[i] % 2:
                raise FamilyError(f'a_{i} = {self[i]} must be even')

    @classmethod
    def parse(cls, text: str) -> 'ContinuedFraction':
        try:
            return cls(tuple(int(x) for x in text.replace('[', '').replace(']', '').split(',')))
        except ValueError:
            raise FamilyError(f'cannot read continued fraction {text!r}', ErrorCode.SYNTAX)

    def __getitem__(self, i: int) -> int:
        # a_i, 1-based from the right
        return self.coefficients[len(self.coefficients) - i]

    def __len__(self) -> int:
        return len(self.coefficients)

    @property
    def k(self) -> int:
        return (len(self) - 1) // 2

    @property
    def closes(self) -> bool:
        # n odd: an even number of coefficients, the leading one a closing strand
        return len(self) % 2 == 0

    @property
    def regions(self) -> int:
        return self.k + 1 if self.closes else self.k

    def __str__(self) -> str:
        return ','.join(str(x) for x in self.coefficients)


@dataclass(frozen=True)
class TridiagonalMatrix:
    '''
    A tridiagonal matrix whose off-diagonal pairs hold a single +-1, so its determinant is the product of
    the diagonal
    '''
    diagonal: Tuple[int, ...]
    upper: Tuple[int, ...]
    lower: Tuple[int, ...]

    def __post_init__(self):
        if len(self.upper) != max(len(self.diagonal) - 1, 0) or len(self.lower) != len(self.upper):
            raise FamilyError('off-diagonals must be one shorter than the diagonal')
        for j, (q, r) in enumerate(zip(self.upper, self.lower)):
            if abs(q) + abs(r) != 1:
                raise FamilyError(f'off-diagonal pair {j} is ({q}, {r}): one entry must be +-1 and the other 0')

    def rows(self) -> List[List[int]]:
        m = len(self.diagonal)
        rows = [[0] * m for _ in range(m)]
        for j in range(m):
            rows[j][j] = self.diagonal[j]
            if j + 1 < m:
                rows[j][j + 1] = self.upper[j]
                rows[j + 1][j] = self.lower[j]
        return rows

    def determinant(self) -> int:
        # three-term recurrence
        before, current = 1, 1
        for j, p in enumerate(self.diagonal):
            if j == 0:
                before, current = 1, p
            else:
                before, current = current, p * current - self.upper[j - 1] * self.lower[j - 1] * before
        return current


def two_bridge_graph(cf: ContinuedFraction, reduced: bool = False) -> PlanarStateGraph:
    '''
    The checkerboard state graph of K[a_{n-1}, ..., a_1]

    Vertex 0 is the basepoint x, vertices 1..k+1 are y_0..y_k. Edge group e_{j+1} joins x to y_j with |a_{2j+1}|
    parallel edges (one with `reduced`), strand j joins y_{j-1} to y_j with |a_{2j}| edges, and when n is odd a
    closing strand of |a_{2k+2}| edges runs from y_k back to x. Counterclockwise, x sees the closing strand
    and then e_{k+1} down to e_1; y_j sees strand j, e_{j+1}, strand j+1
    '''
    k = cf.k
    builder = GraphBuilder()
    x = builder.add_vertex()
    ys = [builder.add_vertex() for _ in range(k + 1)]
    at_x = {}
    up, group, down = {}, {}, {}

    for j in range(k + 1):
        a = cf[2 * j + 1]
        x_side, y_side = [], []
        for _ in range(1 if reduced else abs(a)):
            d0, d1 = builder.new_edge(_label(a))
            x_side.append(d0)
            y_side.append(d1)
        at_x[j] = x_side
        group[j] = list(reversed(y_side))

    def strand(start: int, end: int, a: int) -> Tuple[int, int]:
        # lays |a| edges from start to end, returns the darts at the two ends
        at, first = start, None
        for i in range(abs(a)):
            nxt = end if i == abs(a) - 1 else builder.add_vertex()
            d0, d1 = builder.new_edge(_label(a))
            if first is None:
                first = d0
            else:
                builder.rotations[at].append(d0)
            if nxt != end:
                builder.rotations[nxt].append(d1)
            at, last = nxt, d1
        return first, last

    for j in range(1, k + 1):
        down[j - 1], up[j] = strand(ys[j - 1], ys[j], cf[2 * j])
    closing = strand(ys[k], x, cf[2 * k + 2]) if cf.closes else None

    rotation_x = [closing[1]] if closing else []
    for j in range(k, -1, -1):
        rotation_x += at_x[j]
    builder.rotations[x] = rotation_x + builder.rotations[x]
    for j in range(k + 1):
        rot = ([up[j]] if j in up else []) + group[j] + ([down[j]] if j in down else [])
        if j == k and closing:
            rot.append(closing[0])
        builder.rotations[ys[j]] = rot + builder.rotations[ys[j]]

    g = builder.build(outer=rotation_x[0])
    validate(g)
    return g


def two_bridge_words(cf: ContinuedFraction) -> List[FreeWord]:
    '''
    The loops of the reduced graph around each bounded region, read through the Stallings map
    '''
    g = assign_signs(two_bridge_graph(cf, reduced=True), 0)
    f = faces(g)
    labeling = label_edges(g, f)
    return [phi(path, labeling, 0) for path in generators(g, 0, 'regions', f=f)]


def two_bridge_matrix(cf: ContinuedFraction) -> Tuple[TridiagonalMatrix, int]:
    '''
    The exponent-sum matrix of the region words, which is tridiagonal with determinant the product of the
    diagonal

    Region j is bounded by e_j, strand j and e_{j+1}. Its diagonal entry counts [e_{j+1} = A], then half the
    strand signed by its label, then -[e_j = B]; a closing strand of b edges contributes [A] + s(b-1)/2
    instead. Off the diagonal, e_{j+1} links regions j and j+1 through its label
    '''
    m = cf.regions
    diagonal, upper, lower = [], [], []
    for j in range(1, m + 1):
        e_before, e_after = _label(cf[2 * j - 1]), _label(cf[2 * j + 1]) if 2 * j + 1 <= len(cf) else None
        a = cf[2 * j]
        s = 1 if a > 0 else -1
        before_b = 1 if e_before is EdgeLabel.B else 0
        if cf.closes and j == m:
            diagonal.append((1 if s > 0 else 0) + s * (abs(a) - 1) // 2 - before_b)
        else:
            diagonal.append((1 if e_after is EdgeLabel.A else 0) + s * abs(a) // 2 - before_b)
        if j < m:
            upper.append(1 if e_after is EdgeLabel.B else 0)
            lower.append(-1 if e_after is EdgeLabel.A else 0)
    matrix = TridiagonalMatrix(tuple(diagonal), tuple(upper), tuple(lower))
    det = 1
    for p in diagonal:
        det *= p
    return matrix, det


def _table(cf: ContinuedFraction) -> bool:
    for j in range(1, cf.k + 1):
        before, after, a = cf[2 * j - 1] > 0, cf[2 * j + 1] > 0, cf[2 * j]
        if before and after and a != -4:
            return False
        if not before and not after and a != 4:
            return False
        if before != after and abs(a) != 2:
            return False
    if cf.closes:
        last, closing = cf[2 * cf.k + 1], cf[2 * cf.k + 2]
        if not ((last > 0 and closing == -3) or (last < 0 and closing == 3)):
            return False
    return True


def two_bridge_fiber(cf: ContinuedFraction) -> bool:
    '''
    The sign table for the even coefficients, checked against the determinant of the region matrix
    '''
    verdict = _table(cf)
    _, det = two_bridge_matrix(cf)
    if verdict != (abs(det) == 1):
        raise InternalMismatch(f'table says {verdict} but det = {det} for [{cf}]')
    logger.debug('2-bridge [%s]: table %s, det %d', cf, verdict, det)
    return verdict


### Enumerators


def enumerate_cycles(max_length: int = 12) -> Iterator[Tuple[EdgeLabel, ...]]:
    for length in range(2, max_length + 1, 2):
        yield from itertools.product((EdgeLabel.A, EdgeLabel.B), repeat=length)


def enumerate_theta(max_strands: int = 5, max_vertices: int = 3, distinct: bool = False) -> Iterator[ThetaSpec]:
    '''
    Theta specs of uniform strands; with `distinct`, only the least of each set of strand orders that are
    rotations or reversals of one another
    '''
    for count in range(3, max_strands + 1):
        for parity in (0, 1):
            kinds = [Strand.uniform(v, label) for v in range(parity, max_vertices + 1, 2)
                     for label in (EdgeLabel.A, EdgeLabel.B)]
            for strands in itertools.product(kinds, repeat=count):
                if distinct:
                    key = tuple(tuple(label.value for label in s.labels) for s in strands)
                    if key != min(_arrangements(key)):
                        continue
                yield ThetaSpec(strands)


def enumerate_continued_fractions(max_length: int = 5, max_abs: int = 4) -> Iterator[ContinuedFraction]:
    values = [x for x in range(-max_abs, max_abs + 1) if x != 0]
    for length in range(1, max_length + 1):
        for coefficients in itertools.product(values, repeat=length):
            try:
                yield ContinuedFraction(coefficients)
            except FamilyError:
                continue


def sample_continued_fractions(rng: random.Random, count: int, max_length: int = 7,
                               max_abs: int = 6) -> Iterator[ContinuedFraction]:
    '''
    `count` draws, uniform over what `enumerate_continued_fractions` gives for the same bounds
    '''
    values = [x for x in range(-max_abs, max_abs + 1) if x != 0]
    lengths = list(range(1, max_length + 1))
    weights = [len(values)**length for length in lengths]
    drawn = 0
    while drawn < count:
        length = rng.choices(lengths, weights)[0]
        try:
            cf = ContinuedFraction(tuple(rng.choice(values) for _ in range(length)))
        except FamilyError:
            continue
        drawn += 1
        yield cf
