"""
Grid Realizations: finite pieces of the Manhattan grid Z^n and its quotients.

Implements:
- Words, weights and word types of the local structure around a vertex
- Caps and metric intervals between 0 and a word
- Ball subgraphs with their interior (full degree) vertices
- Tori, Hamming graphs and the triangular torus as regular quotient graphs
- The Gray map torus(n,4) -> H(2n,2) and the covering Z^3 -> triangular grid
- Multi-source distance partitions
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx
import numpy as np

from app.core.errors import EmptyCap, EmptySeed, InvalidArgument, UnsupportedWeight

Word = Tuple[int, ...]

GRAY_MAP: Dict[int, Tuple[int, int]] = {0: (0, 0), 1: (1, 0), 2: (1, 1), 3: (0, 1)}
GRAY_INVERSE: Dict[Tuple[int, int], int] = {bits: r for r, bits in GRAY_MAP.items()}

# Generators of the triangular grid on Z^2
TRIANGULAR_STEPS: Tuple[Tuple[int, int], ...] = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1))


def as_word(coords: Iterable[int], n: Optional[int] = None) -> Word:
    """Normalize coordinates into a Word, checking the dimension when given."""
    word = tuple(int(c) for c in coords)
    if not word:
        raise InvalidArgument("A word needs dimension n >= 1")
    if n is not None and len(word) != n:
        raise InvalidArgument(f"Expected a word of length {n}, got {len(word)}")
    return word


def unit(n: int, axis: int, sign: int = 1) -> Word:
    """sign * e_axis, axis counted from 1."""
    return tuple(sign if i == axis - 1 else 0 for i in range(n))


def weight(w: Sequence[int]) -> int:
    return sum(abs(c) for c in w)


def distance(x: Sequence[int], y: Sequence[int]) -> int:
    return sum(abs(a - b) for a, b in zip(x, y))


def word_type(w: Sequence[int]) -> str:
    """Absolute values in descending order, padded to four digits (weight <= 4 only)."""
    if weight(w) > 4:
        raise UnsupportedWeight(f"Word types are defined up to weight 4, got {weight(w)}")
    digits = sorted((abs(c) for c in w if c), reverse=True)
    return "".join(str(d) for d in digits).ljust(4, "0")


def layer_types(n: int, w: int) -> List[str]:
    """Word types occurring among words of weight w in Z^n, most concentrated first."""
    if w > 4:
        raise UnsupportedWeight(f"Word types are defined up to weight 4, got {w}")
    types = set()
    for parts in _partitions(w):
        if len(parts) <= n:
            types.add("".join(str(p) for p in parts).ljust(4, "0"))
    return sorted(types, reverse=True)


def _partitions(total: int, largest: Optional[int] = None) -> Iterable[Tuple[int, ...]]:
    largest = total if largest is None else largest
    if total == 0:
        yield ()
        return
    for head in range(min(total, largest), 0, -1):
        for tail in _partitions(total - head, head):
            yield (head,) + tail


def cap(n: int, axis: int, sign: int) -> Set[Word]:
    """The 2(n-1) weight-4 words 3*sign*e_axis +- e_j, j != axis."""
    if n < 2:
        raise EmptyCap("Caps need n >= 2")
    if not 1 <= axis <= n or sign not in (1, -1):
        raise InvalidArgument(f"Bad cap position axis={axis} sign={sign}")
    base = [3 * c for c in unit(n, axis, sign)]
    words = set()
    for j in range(1, n + 1):
        if j == axis:
            continue
        for s in (1, -1):
            words.add(tuple(b + e for b, e in zip(base, unit(n, j, s))))
    return words


def cap_union(n: int) -> Set[Word]:
    """Disjoint union of all 2n caps."""
    words: Set[Word] = set()
    for axis in range(1, n + 1):
        for sign in (1, -1):
            words |= cap(n, axis, sign)
    return words


def interval_graph(x: Sequence[int]) -> nx.Graph:
    """Subgraph of G_n induced by {y : d(y,x) + d(y,0) = d(x,0)}."""
    x = as_word(x)
    ranges = [range(min(0, c), max(0, c) + 1) for c in x]
    graph = nx.Graph()
    graph.add_nodes_from(itertools.product(*ranges))
    for y in list(graph.nodes):
        for i in range(len(x)):
            z = y[:i] + (y[i] + 1,) + y[i + 1:]
            if z in graph:
                graph.add_edge(y, z)
    return graph


def ball_volume(n: int, radius: int) -> int:
    """Closed-form size of the Lee ball of the given radius in Z^n."""
    return sum(2**k * comb(n, k) * comb(radius, k) for k in range(min(n, radius) + 1))


def walk_ball(n: int, radius: int) -> Set[Word]:
    """Breadth-first walk from 0 truncated at the radius (independent oracle)."""
    origin = (0,) * n
    seen = {origin}
    queue = deque([(origin, 0)])
    while queue:
        word, d = queue.popleft()
        if d == radius:
            continue
        for i in range(n):
            for s in (1, -1):
                nxt = word[:i] + (word[i] + s,) + word[i + 1:]
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append((nxt, d + 1))
    return seen


@dataclass(frozen=True, eq=False)
class BallGraph:
    """Words of weight <= radius with inherited grid adjacency."""
    n: int
    radius: int
    vertices: Tuple[Word, ...]
    adjacency: Tuple[Tuple[int, ...], ...]
    interior: np.ndarray
    index: Dict[Word, int] = field(repr=False)

    kind = "ball"

    @property
    def valency(self) -> int:
        return 2 * self.n

    def __len__(self) -> int:
        return len(self.vertices)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def word(self, v: int) -> Word:
        return self.vertices[v]

    def arcs(self) -> Tuple[np.ndarray, np.ndarray]:
        src = np.repeat(np.arange(len(self)), [len(nbrs) for nbrs in self.adjacency])
        dst = np.fromiter(itertools.chain.from_iterable(self.adjacency), dtype=np.int64, count=len(src))
        return src, dst

    def to_networkx(self) -> nx.Graph:
        return _adjacency_to_networkx(self.vertices, self.adjacency)

    def to_json(self) -> Dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "R": self.radius,
            "vertices": [list(v) for v in self.vertices],
            "adjacency": [list(nbrs) for nbrs in self.adjacency],
        }


def ball_graph(n: int, radius: int) -> BallGraph:
    """Canonical ball subgraph: vertices ordered by weight, then lexicographically."""
    if n < 1 or radius < 1:
        raise InvalidArgument(f"Ball needs n >= 1 and R >= 1, got n={n}, R={radius}")

    words: List[Word] = []
    for coords in itertools.product(range(-radius, radius + 1), repeat=n):
        if weight(coords) <= radius:
            words.append(coords)
    words.sort(key=lambda w: (weight(w), w))
    index = {w: i for i, w in enumerate(words)}

    adjacency = []
    for w in words:
        nbrs = []
        for i in range(n):
            for s in (-1, 1):
                nxt = w[:i] + (w[i] + s,) + w[i + 1:]
                j = index.get(nxt)
                if j is not None:
                    nbrs.append(j)
        adjacency.append(tuple(sorted(nbrs)))

    interior = np.array([len(nbrs) == 2 * n for nbrs in adjacency], dtype=bool)
    return BallGraph(n, radius, tuple(words), tuple(adjacency), interior, index)


@dataclass(frozen=True, eq=False)
class QuotientGraph:
    """
    A regular quotient of a grid-like Cayley graph.

    Vertices are residue words in product (row-major) order over `periods`;
    `neighbors[v]` lists the images of v under every generator.
    """
    kind: str
    n: int
    periods: Tuple[int, ...]
    neighbors: np.ndarray

    @property
    def q(self) -> Union[int, Tuple[int, ...]]:
        if len(set(self.periods)) == 1:
            return self.periods[0]
        return self.periods

    @property
    def valency(self) -> int:
        return int(self.neighbors.shape[1])

    def __len__(self) -> int:
        return int(self.neighbors.shape[0])

    @cached_property
    def coords(self) -> np.ndarray:
        """(N, n) array of residue words."""
        return np.indices(self.periods).reshape(len(self.periods), -1).T

    @cached_property
    def strides(self) -> np.ndarray:
        return _strides(self.periods)

    @cached_property
    def vertices(self) -> Tuple[Word, ...]:
        return tuple(tuple(int(c) for c in row) for row in self.coords)

    @cached_property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(sorted(int(u) for u in row)) for row in self.neighbors)

    def word(self, v: int) -> Word:
        return tuple(int(c) for c in self.coords[v])

    def index_of(self, word: Sequence[int]) -> int:
        residues = [int(c) % q for c, q in zip(word, self.periods)]
        return int(np.dot(residues, self.strides))

    def arcs(self) -> Tuple[np.ndarray, np.ndarray]:
        src = np.repeat(np.arange(len(self)), self.valency)
        return src, self.neighbors.ravel()

    def to_networkx(self) -> nx.Graph:
        return _adjacency_to_networkx(self.vertices, self.adjacency)

    def to_json(self) -> Dict:
        q = self.q
        return {
            "kind": self.kind,
            "n": self.n,
            "q": list(q) if isinstance(q, tuple) else q,
            "vertices": [list(v) for v in self.vertices],
            "adjacency": [list(nbrs) for nbrs in self.adjacency],
        }


Graph = Union[BallGraph, QuotientGraph]


def _strides(periods: Sequence[int]) -> np.ndarray:
    strides = np.ones(len(periods), dtype=np.int64)
    for i in range(len(periods) - 2, -1, -1):
        strides[i] = strides[i + 1] * periods[i + 1]
    return strides


def _shift_neighbors(periods: Tuple[int, ...], steps: Sequence[Sequence[int]]) -> np.ndarray:
    """Neighbor table of the Cayley graph of prod Z_q with the given steps."""
    coords = np.indices(periods).reshape(len(periods), -1).T
    strides = _strides(periods)
    base = coords @ strides
    mods = np.array(periods)
    columns = []
    for step in steps:
        moved = (coords + np.array(step)) % mods
        columns.append(base + (moved - coords) @ strides)
    return np.stack(columns, axis=1)


def torus_graph(n: int, q: Union[int, Sequence[int]]) -> QuotientGraph:
    """G_{n,q}; q may be one length or a length per axis (each >= 3)."""
    periods = tuple([q] * n) if isinstance(q, (int, np.integer)) else tuple(int(p) for p in q)
    if len(periods) != n:
        raise InvalidArgument(f"Need {n} axis lengths, got {len(periods)}")
    if min(periods) < 3:
        raise InvalidArgument(f"Torus axes must have length >= 3, got {periods}")
    steps = [unit(n, i, s) for i in range(1, n + 1) for s in (1, -1)]
    return QuotientGraph("torus", n, periods, _shift_neighbors(periods, steps))


def hamming_graph(n: int, q: int) -> QuotientGraph:
    """H(n,q): words over Z_q adjacent when they differ in exactly one coordinate."""
    if n < 1 or q < 2:
        raise InvalidArgument(f"Hamming graph needs n >= 1 and q >= 2, got n={n}, q={q}")
    steps = [tuple(s * c for c in unit(n, i)) for i in range(1, n + 1) for s in range(1, q)]
    return QuotientGraph("hamming", n, (q,) * n, _shift_neighbors((q,) * n, steps))


def triangular_torus(q: int) -> QuotientGraph:
    """Triangular grid modulo q on both axes."""
    if q < 3:
        raise InvalidArgument(f"Triangular torus needs q >= 3, got {q}")
    return QuotientGraph("triangular-torus", 2, (q, q), _shift_neighbors((q, q), TRIANGULAR_STEPS))


def gray_word(residues: Sequence[int]) -> Tuple[int, ...]:
    """Componentwise Gray image of a word over Z_4."""
    bits: List[int] = []
    for r in residues:
        if r not in GRAY_MAP:
            raise InvalidArgument(f"Gray map is defined on residues 0..3, got {r}")
        bits.extend(GRAY_MAP[r])
    return tuple(bits)


def gray_inverse(bits: Sequence[int]) -> Word:
    if len(bits) % 2:
        raise InvalidArgument(f"Gray preimage needs an even number of bits, got {len(bits)}")
    residues = []
    for i in range(0, len(bits), 2):
        pair = (int(bits[i]), int(bits[i + 1]))
        if pair not in GRAY_INVERSE:
            raise InvalidArgument(f"Not a binary pair: {pair}")
        residues.append(GRAY_INVERSE[pair])
    return tuple(residues)


def triangular_covering(x: Sequence[int]) -> Tuple[int, int]:
    """(x1 - x2, x3 - x2): maps G_3 onto the triangular grid."""
    if len(x) != 3:
        raise InvalidArgument(f"Triangular covering is defined on Z^3, got length {len(x)}")
    return (x[0] - x[1], x[2] - x[1])


def distance_partition(graph: Graph, seeds: Union[np.ndarray, Iterable[int]]) -> np.ndarray:
    """
    Multi-source BFS labels; label 0 exactly on the seeds, -1 if unreachable.

    Seeds are a boolean mask over the vertices or an iterable of vertex indices.
    """
    size = len(graph)
    if isinstance(seeds, np.ndarray) and seeds.dtype == bool:
        frontier = np.flatnonzero(seeds)
    else:
        frontier = np.unique(np.fromiter((int(s) for s in seeds), dtype=np.int64))
    if frontier.size == 0:
        raise EmptySeed("Distance partition needs a nonempty seed set")
    if frontier.min() < 0 or frontier.max() >= size:
        raise InvalidArgument("Seed index outside the graph")

    labels = np.full(size, -1, dtype=np.int64)
    labels[frontier] = 0

    if isinstance(graph, QuotientGraph):
        depth = 0
        while frontier.size:
            depth += 1
            reached = graph.neighbors[frontier].ravel()
            reached = np.unique(reached[labels[reached] < 0])
            labels[reached] = depth
            frontier = reached
        return labels

    queue = deque(int(v) for v in frontier)
    while queue:
        v = queue.popleft()
        for u in graph.adjacency[v]:
            if labels[u] < 0:
                labels[u] = labels[v] + 1
                queue.append(u)
    return labels


def _adjacency_to_networkx(vertices: Sequence[Word], adjacency: Sequence[Sequence[int]]) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(vertices)
    for v, nbrs in enumerate(adjacency):
        for u in nbrs:
            if v < u:
                graph.add_edge(vertices[v], vertices[u])
    return graph
