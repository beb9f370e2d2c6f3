"""
Code Constructions: periodic completely regular codes in Z^n.

Implements:
- Lifting codes from tori, ternary and binary Hamming graphs, and the triangular grid
- Block-sum multiplication (grid and Hamming versions)
- Perfect codes, halved perfect codes, diameter perfect lattices and unions of their cosets
- Distance, distance-anticode and all-ones codes of period 4
- A catalog addressable by kind + parameters, with claimed matrices
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from app.core.errors import InvalidArgument, UnknownConstruction, UnverifiableConstruction
from app.grid.codes import PeriodicCode, inflate_periods, verify_coloring
from app.grid.lattice import (
    QuotientGraph, Word, distance_partition, gray_inverse, hamming_graph,
    torus_graph, triangular_torus, weight,
)
from app.grid.matrix import ParamMatrix, format_compact

DATA_DIR = Path(__file__).parent / "data"
DIAMETER_TABLE = DATA_DIR / "diameter_lattices.json"
SOURCES_DIR = DATA_DIR / "sources"


# ---------------------------------------------------------------------------
# Lifting from quotients
# ---------------------------------------------------------------------------

def _check_words(words: Iterable[Sequence[int]], length: int, q: int) -> FrozenSet[Word]:
    checked = set()
    for w in words:
        w = tuple(int(c) for c in w)
        if len(w) != length or any(not 0 <= c < q for c in w):
            raise InvalidArgument(f"Word {w} is not in Z_{q}^{length}")
        checked.add(w)
    if not checked:
        raise InvalidArgument("Source code is empty")
    return frozenset(checked)


def from_quotient(n: int, q: int, residues: Iterable[Sequence[int]]) -> PeriodicCode:
    """Preimage in Z^n of a code in the torus G_{n,q}."""
    if q < 3:
        raise InvalidArgument(f"Torus quotients need q >= 3, got {q}")
    return PeriodicCode(n, (q,) * n, _check_words(residues, n, q))


def from_ternary_hamming(n: int, words: Iterable[Sequence[int]]) -> PeriodicCode:
    """H(n,3) is G_{n,3}."""
    return from_quotient(n, 3, words)


def from_binary_hamming(n: int, words: Iterable[Sequence[int]]) -> PeriodicCode:
    """Gray preimage of a code in H(2n,2); periods 4."""
    words = _check_words(words, 2 * n, 2)
    if len(words) == 2 ** (2 * n):
        raise InvalidArgument("Binary source code must be a proper subset of H(2n,2)")
    return PeriodicCode(n, (4,) * n, frozenset(gray_inverse(w) for w in words))


def from_triangular(q: int, points: Iterable[Sequence[int]]) -> PeriodicCode:
    """Preimage under (x1-x2, x3-x2) of a q-periodic set in the triangular grid."""
    if q < 1:
        raise InvalidArgument(f"Period must be positive, got {q}")
    target = np.zeros((q, q), dtype=bool)
    for p in _check_words(points, 2, q):
        target[p] = True
    x = np.indices((q, q, q))
    mask = target[(x[0] - x[1]) % q, (x[2] - x[1]) % q]
    return PeriodicCode.from_mask(mask)


def multiply(code: PeriodicCode, k: int) -> PeriodicCode:
    """Words of Z^{kn} whose k-blocks sum to a word of the code."""
    if k < 1:
        raise InvalidArgument(f"Multiplier must be >= 1, got {k}")
    if k == 1:
        return code
    periods = tuple(q for q in code.periods for _ in range(k))
    coords = np.indices(periods).reshape(len(periods), -1).T
    sums = coords.reshape(-1, code.n, k).sum(axis=2) % np.array(code.periods)
    mask = code.box_mask()[tuple(sums.T)]
    return PeriodicCode.from_mask(mask.reshape(periods))


def multiply_words(words: Iterable[Sequence[int]], q: int, k: int) -> FrozenSet[Word]:
    """Block-sum construction on Hamming graphs: H(m,q) -> H(km,q)."""
    words = frozenset(tuple(w) for w in words)
    length = len(next(iter(words)))
    result = set()
    for x in itertools.product(range(q), repeat=k * length):
        sums = tuple(sum(x[i * k:(i + 1) * k]) % q for i in range(length))
        if sums in words:
            result.add(x)
    return frozenset(result)


# ---------------------------------------------------------------------------
# Grid families
# ---------------------------------------------------------------------------

def _linear_code(weights: Sequence[int], modulus: int, values: Iterable[int] = (0,)) -> PeriodicCode:
    n = len(weights)
    x = np.indices((modulus,) * n).reshape(n, -1).T
    mask = np.isin((x @ np.array(weights)) % modulus, list(values))
    return PeriodicCode.from_mask(mask.reshape((modulus,) * n))


def line_code(p: int) -> PeriodicCode:
    """pZ in G_1."""
    if p < 2:
        raise InvalidArgument(f"Line codes need period >= 2, got {p}")
    return PeriodicCode(1, (p,), frozenset({(0,)}))


def golomb_welch_perfect(n: int) -> PeriodicCode:
    """{x : sum i*x_i = 0 mod 2n+1}."""
    return _linear_code(range(1, n + 1), 2 * n + 1)


def halved_perfect(n: int) -> PeriodicCode:
    return golomb_welch_perfect(n).even_weight_subcode()


def even_weight_code(n: int) -> PeriodicCode:
    return _linear_code((1,) * n, 2)


@lru_cache(maxsize=1)
def load_diameter_table() -> Dict[int, Tuple[int, Tuple[int, ...]]]:
    """n -> (modulus, weights) from the versioned lattice table."""
    with open(DIAMETER_TABLE, "r") as f:
        data = json.load(f)
    table = {
        entry["n"]: (entry["modulus"], tuple(entry["weights"]))
        for entry in data["lattices"]
    }
    logger.debug(f"📦 Loaded diameter lattice table v{data['version']} for n={sorted(table)}")
    return table


def diameter_lattice(n: int) -> PeriodicCode:
    table = load_diameter_table()
    if n not in table:
        raise UnknownConstruction(f"No diameter perfect lattice configured for n={n}")
    modulus, weights = table[n]
    return _linear_code(weights, modulus)


def diameter_union(n: int, t: int) -> PeriodicCode:
    """Union of t even-weight cosets of the diameter perfect lattice."""
    table = load_diameter_table()
    if n not in table:
        raise UnknownConstruction(f"No diameter perfect lattice configured for n={n}")
    if t < 1:
        raise InvalidArgument(f"Need at least one coset, got t={t}")
    if t > 2 * n:
        raise UnverifiableConstruction(f"Only {2 * n} disjoint even-weight cosets exist, asked for {t}")
    modulus, weights = table[n]
    return _linear_code(weights, modulus, values=range(0, 2 * t, 2))


def _congruence_code(n: int, allowed: Sequence[Sequence[int]]) -> PeriodicCode:
    """Period-4 code with per-axis allowed residues, given as alternatives."""
    residues = set()
    for choice in allowed:
        residues.update(itertools.product(*choice))
    return PeriodicCode(n, (4,) * n, frozenset(residues))


def distance_code(n: int) -> PeriodicCode:
    """(4Z)^n."""
    return _congruence_code(n, [[(0,)] * n])


def distance_anticode(n: int) -> PeriodicCode:
    return PeriodicCode(n, (4,) * n, frozenset({(0,) * n, (2,) * n}))


def all_ones_code(n: int) -> PeriodicCode:
    return _congruence_code(n, [[(0,)] * (n - 1) + [(0, 3)]])


# ---------------------------------------------------------------------------
# Diameter perfect lattice search
# ---------------------------------------------------------------------------

def is_diameter_perfect(code: PeriodicCode) -> bool:
    """
    Every union of two radius-1 balls with adjacent centers meets the code
    exactly once, and every codeword has even weight.
    """
    if any(q % 2 for q in code.periods) or any(sum(r) % 2 for r in code.residues):
        return False
    periods = inflate_periods(code.periods, 3)
    torus = torus_graph(code.n, periods)
    mask = code.mask_on(periods).astype(np.int64)
    ball = mask + mask[torus.neighbors].sum(axis=1)
    src, dst = torus.arcs()
    union = ball[src] + ball[dst] - mask[src] - mask[dst]
    return bool(np.all(union == 1))


def _small_words(n: int, max_weight: int) -> List[Word]:
    words = []
    for x in itertools.product(range(-max_weight, max_weight + 1), repeat=n):
        if 0 < weight(x) <= max_weight:
            words.append(x)
    return words


def search_diameter_weights(n: int) -> Optional[Tuple[int, ...]]:
    """
    First weight vector (w_1 = 1, lexicographic) whose lattice mod 4n is
    diameter perfect with all words of even weight.
    """
    modulus = 4 * n
    short = np.array(_small_words(n, 3))
    for tail in itertools.product(range(1, modulus), repeat=n - 1):
        weights = (1,) + tail
        values = (short @ np.array(weights)) % modulus
        if np.any(values == 0):
            continue
        code = _linear_code(weights, modulus)
        if is_diameter_perfect(code):
            logger.info(f"✅ Diameter perfect lattice for n={n}: weights {weights} mod {modulus}")
            return weights
    return None


# ---------------------------------------------------------------------------
# Classical source codes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SourceCode:
    """A code in a Hamming graph H(n,q)."""
    name: str
    n: int
    q: int
    words: FrozenSet[Word]
    description: str = ""


def load_source(name: str) -> SourceCode:
    path = SOURCES_DIR / f"{name}.json"
    if not path.exists():
        raise UnknownConstruction(f"No shipped source code named {name!r}")
    with open(path, "r") as f:
        data = json.load(f)
    return SourceCode(
        data["name"], data["n"], data["q"],
        frozenset(tuple(w) for w in data["words"]), data.get("description", ""),
    )


def ternary_source(name: str, n: int) -> FrozenSet[Word]:
    if name == "singleton":
        return frozenset({(0,) * n})
    if name == "repetition":
        if n == 3:
            return load_source("h33-repetition").words
        return frozenset({(i,) * n for i in range(3)})
    raise UnknownConstruction(f"Unknown ternary source {name!r}")


def binary_source(name: str, n: int) -> FrozenSet[Word]:
    """Codes in H(2n,2)."""
    length = 2 * n
    if name == "singleton":
        return frozenset({(0,) * length})
    if name == "antipodal-pair":
        if n == 3:
            return load_source("h62-antipodal-pair").words
        return frozenset({(0,) * length, (1,) * length})
    if name == "shortened-perfect" and n == 3:
        return load_source("h62-shortened-perfect").words
    if name == "doubled-repetition" and n == 3:
        return multiply_words(load_source("h32-repetition").words, 2, 2)
    if name == "doubled-singleton" and n == 3:
        return multiply_words({(0, 0, 0)}, 2, 2)
    raise UnknownConstruction(f"Unknown binary source {name!r} for n={n}")


def triangular_source(name: str) -> Tuple[int, FrozenSet[Word]]:
    """Built-in triangular-grid codes: (period, points)."""
    if name == "perfect":
        points = frozenset((u, v) for u in range(7) for v in range(7) if (u + 2 * v) % 7 == 0)
        return 7, points
    raise UnknownConstruction(f"Unknown triangular source {name!r}")


def g1_source(name: str) -> PeriodicCode:
    """G_1 codes by name: g1-perfect (3Z), g1-even (2Z), g1-period-<p> (pZ)."""
    if name == "g1-perfect":
        return line_code(3)
    if name == "g1-even":
        return line_code(2)
    if name.startswith("g1-period-"):
        try:
            return line_code(int(name.rsplit("-", 1)[1]))
        except ValueError:
            pass
    raise UnknownConstruction(f"Unknown G_1 source {name!r}")


# ---------------------------------------------------------------------------
# Claimed matrices
# ---------------------------------------------------------------------------

def _matrix(rows: Sequence[Tuple[int, int, int]]) -> ParamMatrix:
    """From (c_i, a_i, b_i) rows."""
    return ParamMatrix(
        a=tuple(r[1] for r in rows),
        b=tuple(r[2] for r in rows[:-1]),
        c=tuple(r[0] for r in rows[1:]),
        valency=sum(rows[0]),
    )


def perfect_matrix(n: int) -> ParamMatrix:
    return _matrix([(0, 0, 2 * n), (1, 2 * n - 1, 0)])


def halved_perfect_matrix(n: int) -> ParamMatrix:
    v = 2 * n
    return _matrix([(0, 0, v), (1, 0, v - 1), (v - 1, 0, 1), (v, 0, 0)])


def diameter_union_matrix(n: int, t: int) -> ParamMatrix:
    v = 2 * n
    if t == v:
        return _matrix([(0, 0, v), (v, 0, 0)])
    return _matrix([(0, 0, v), (t, 0, v - t), (v, 0, 0)])


def distance_matrix(n: int) -> ParamMatrix:
    v = 2 * n
    return _matrix([(i, 0, v - i) for i in range(v)] + [(v, 0, 0)])


def distance_anticode_matrix(n: int) -> ParamMatrix:
    v = 2 * n
    return _matrix([(i, 0, v - i) for i in range(n)] + [(v, 0, 0)])


def all_ones_matrix(n: int) -> ParamMatrix:
    v = 2 * n
    return _matrix([(i, 1, v - 1 - i) for i in range(v)])


def even_weight_matrix(n: int) -> ParamMatrix:
    return diameter_union_matrix(n, 2 * n)


def line_matrix(p: int) -> ParamMatrix:
    rho = p // 2
    rows = [(0, 0, 2)] + [(1, 0, 1)] * (rho - 1)
    rows.append((2, 0, 0) if p % 2 == 0 else (1, 1, 0))
    return _matrix(rows)


def quotient_matrix(graph: QuotientGraph, words: Iterable[Sequence[int]]) -> ParamMatrix:
    """Verified matrix of a code on a finite quotient graph."""
    seeds = [graph.index_of(w) for w in words]
    verdict = verify_coloring(graph, distance_partition(graph, seeds))
    if not verdict.is_crc:
        raise UnverifiableConstruction(f"Source code on {graph.kind} is not completely regular: {verdict.reason}")
    return verdict.matrix


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstructionSpec:
    kind: str
    parameters: Tuple[Tuple[str, Any], ...]
    claimed_matrix: ParamMatrix

    @property
    def identifier(self) -> str:
        args = ",".join(f"{k}={v}" for k, v in self.parameters)
        return f"{self.kind}({args})"


def _n(params: Dict[str, Any]) -> int:
    if "n" not in params:
        raise InvalidArgument("This construction needs n")
    return int(params["n"])


def _build_perfect(p):
    n = _n(p)
    return golomb_welch_perfect(n), perfect_matrix(n)


def _build_halved(p):
    n = _n(p)
    return halved_perfect(n), halved_perfect_matrix(n)


def _build_diameter_lattice(p):
    n = _n(p)
    return diameter_lattice(n), diameter_union_matrix(n, 1)


def _build_diameter_union(p):
    n, t = _n(p), int(p.get("t", 1))
    return diameter_union(n, t), diameter_union_matrix(n, t)


def _build_distance(p):
    n = _n(p)
    return distance_code(n), distance_matrix(n)


def _build_anticode(p):
    n = _n(p)
    return distance_anticode(n), distance_anticode_matrix(n)


def _build_all_ones(p):
    n = _n(p)
    return all_ones_code(n), all_ones_matrix(n)


def _build_even_weight(p):
    n = _n(p)
    return even_weight_code(n), even_weight_matrix(n)


def _build_line(p):
    period = int(p.get("p", 3))
    return line_code(period), line_matrix(period)


def _build_multiply(p):
    k = int(p.get("k", 1))
    source = str(p.get("source", "g1-perfect"))
    if source.startswith("g1-"):
        base = g1_source(source)
        matrix = line_matrix(base.periods[0])
    else:
        base_spec, base = build(source, **{key: v for key, v in p.items() if key not in ("k", "source")})
        matrix = base_spec.claimed_matrix
    return multiply(base, k), matrix.scale(k)


def _build_ternary(p):
    n = _n(p)
    words = p.get("words") or ternary_source(str(p.get("source", "singleton")), n)
    return from_ternary_hamming(n, words), quotient_matrix(hamming_graph(n, 3), words)


def _build_binary(p):
    n = _n(p)
    words = p.get("words") or binary_source(str(p.get("source", "singleton")), n)
    return from_binary_hamming(n, words), quotient_matrix(hamming_graph(2 * n, 2), words)


def _build_triangular(p):
    if p.get("words"):
        q, points = int(p["q"]), p["words"]
    else:
        q, points = triangular_source(str(p.get("source", "perfect")))
    return from_triangular(q, points), quotient_matrix(triangular_torus(q), points)


def _build_quotient(p):
    n, q = _n(p), int(p["q"])
    words = p.get("words")
    if not words:
        raise InvalidArgument("Quotient construction needs residue words")
    return from_quotient(n, q, words), quotient_matrix(torus_graph(n, q), words)


BUILDERS: Dict[str, Callable[[Dict[str, Any]], Tuple[PeriodicCode, ParamMatrix]]] = {
    "perfect": _build_perfect,
    "halved-perfect": _build_halved,
    "diameter-lattice": _build_diameter_lattice,
    "diameter-union": _build_diameter_union,
    "distance": _build_distance,
    "distance-anticode": _build_anticode,
    "all-ones": _build_all_ones,
    "even-weight": _build_even_weight,
    "line": _build_line,
    "multiply": _build_multiply,
    "ternary": _build_ternary,
    "binary": _build_binary,
    "triangular": _build_triangular,
    "quotient": _build_quotient,
}


def build(kind: str, **params: Any) -> Tuple[ConstructionSpec, PeriodicCode]:
    """Build a catalog construction and its claimed matrix."""
    if kind not in BUILDERS:
        raise UnknownConstruction(f"Unknown construction {kind!r}; known: {sorted(BUILDERS)}")
    code, matrix = BUILDERS[kind](params)
    shown = tuple(sorted((k, v) for k, v in params.items() if k != "words" and v is not None))
    spec = ConstructionSpec(kind, shown, matrix)
    logger.debug(f"Built {spec.identifier}: {format_compact(matrix)}")
    return spec, code


def catalog_entries(n: int) -> List[Tuple[str, Dict[str, Any]]]:
    """Constructions realizing codes in G_n, in catalog order."""
    entries: List[Tuple[str, Dict[str, Any]]] = [
        ("perfect", {"n": n}),
        ("even-weight", {"n": n}),
        ("halved-perfect", {"n": n}),
        ("distance", {"n": n}),
        ("distance-anticode", {"n": n}),
        ("all-ones", {"n": n}),
    ]
    if n in load_diameter_table():
        entries += [("diameter-union", {"n": n, "t": t}) for t in range(1, 2 * n)]
    if n > 1:
        entries += [("multiply", {"k": n, "source": f"g1-period-{p}"}) for p in (3, 4, 5)]
        entries.append(("ternary", {"n": n, "source": "singleton"}))
    if n == 3:
        entries.append(("ternary", {"n": 3, "source": "repetition"}))
        entries += [
            ("binary", {"n": 3, "source": s})
            for s in ("antipodal-pair", "shortened-perfect", "doubled-repetition", "doubled-singleton")
        ]
    return entries


def realizations(n: int) -> List[ConstructionSpec]:
    """Claimed specs of every catalog construction for G_n."""
    specs = []
    for kind, params in catalog_entries(n):
        try:
            spec, _ = build(kind, **params)
        except UnverifiableConstruction as e:
            logger.warning(f"⚠️ Skipping {kind} {params}: {e}")
            continue
        specs.append(spec)
    return specs
