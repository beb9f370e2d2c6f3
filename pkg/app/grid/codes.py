"""
Periodic Codes: codes in Z^n given by residues modulo per-axis periods,
and exact verification of complete regularity on finite quotients.

A periodic code is realized on a torus whose axes are multiples of its
periods; the torus is a covering quotient of the grid, so the distance
partition and every neighbor count agree with the infinite grid.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from math import ceil, prod
from pathlib import Path
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field, TypeAdapter

from app.core.config import settings
from app.core.errors import InconsistentMatrix, InflationOverflow, InvalidArgument, MalformedMatrix
from app.grid.lattice import BallGraph, Graph, Word, distance_partition, torus_graph
from app.grid.matrix import ParamMatrix, format_compact


@dataclass(frozen=True)
class PeriodicCode:
    """Code {x in Z^n : (x_i mod q_i)_i in residues}."""
    n: int
    periods: Tuple[int, ...]
    residues: FrozenSet[Word]

    def __post_init__(self):
        if self.n < 1 or len(self.periods) != self.n:
            raise InvalidArgument(f"Need {self.n} periods, got {self.periods}")
        if min(self.periods) < 1:
            raise InvalidArgument(f"Periods must be positive, got {self.periods}")
        if not self.residues:
            raise InvalidArgument("A code needs at least one residue")
        for r in self.residues:
            if len(r) != self.n or any(not 0 <= c < q for c, q in zip(r, self.periods)):
                raise InvalidArgument(f"Residue {r} outside the box {self.periods}")

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "PeriodicCode":
        residues = frozenset(tuple(int(c) for c in idx) for idx in np.argwhere(mask))
        return cls(mask.ndim, tuple(int(q) for q in mask.shape), residues)

    @property
    def size(self) -> int:
        return len(self.residues)

    def contains(self, x: Sequence[int]) -> bool:
        return tuple(int(c) % q for c, q in zip(x, self.periods)) in self.residues

    @cached_property
    def _mask(self) -> np.ndarray:
        mask = np.zeros(self.periods, dtype=bool)
        for r in self.residues:
            mask[r] = True
        return mask

    def box_mask(self) -> np.ndarray:
        """Boolean array over the period box."""
        return self._mask.copy()

    def mask_on(self, periods: Sequence[int]) -> np.ndarray:
        """Flat membership mask on the torus with the given (multiple) axis lengths."""
        coords = np.indices(tuple(periods)).reshape(self.n, -1).T
        return self._mask[tuple((coords % np.array(self.periods)).T)]

    def lift(self, periods: Sequence[int]) -> "PeriodicCode":
        """Same code described on a larger box; each new period a multiple of the old."""
        periods = tuple(int(p) for p in periods)
        if len(periods) != self.n or any(p % q for p, q in zip(periods, self.periods)):
            raise InvalidArgument(f"{periods} are not multiples of {self.periods}")
        return PeriodicCode.from_mask(self.mask_on(periods).reshape(periods))

    def even_weight_subcode(self) -> "PeriodicCode":
        """Words of even weight; odd periods are doubled so parity is well defined."""
        lifted = self.lift(tuple(q if q % 2 == 0 else 2 * q for q in self.periods))
        return PeriodicCode(
            self.n, lifted.periods, frozenset(r for r in lifted.residues if sum(r) % 2 == 0),
        )


class CodeDocument(BaseModel):
    """On-disk form of a periodic code."""
    n: int = Field(ge=1)
    periods: List[int]
    residues: List[List[int]]
    kind: Optional[str] = None
    matrix: Optional[str] = None  # claimed compact matrix, if any


def code_to_document(code: PeriodicCode, kind: Optional[str] = None,
                     matrix: Optional[ParamMatrix] = None) -> CodeDocument:
    return CodeDocument(
        n=code.n,
        periods=list(code.periods),
        residues=[list(r) for r in sorted(code.residues)],
        kind=kind,
        matrix=format_compact(matrix) if matrix else None,
    )


def save_code(code: PeriodicCode, path: Path, kind: Optional[str] = None,
              matrix: Optional[ParamMatrix] = None):
    document = code_to_document(code, kind, matrix)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        f.write(document.model_dump_json(indent=2, exclude_none=True))
    logger.info(f"💾 Saved code ({code.size} residues, periods {code.periods}) to {path}")


def load_code(path: Path) -> Tuple[PeriodicCode, CodeDocument]:
    with open(path, "r") as f:
        document = CodeDocument.model_validate(json.load(f))
    code = PeriodicCode(
        document.n, tuple(document.periods), frozenset(tuple(r) for r in document.residues),
    )
    return code, document


_WORD_LIST = TypeAdapter(List[List[int]])


def load_words(path: Path) -> List[Word]:
    """Residue words from a JSON list such as [[0, 0], [1, 2]]."""
    with open(path, "r") as f:
        words = _WORD_LIST.validate_json(f.read())
    logger.debug(f"📦 Loaded {len(words)} words from {path}")
    return [tuple(w) for w in words]


@dataclass
class Witness:
    """A vertex whose neighbor color counts differ from its color class."""
    vertex: Word
    label: int
    counts: Tuple[int, ...]
    expected: Tuple[int, ...]


@dataclass
class Verdict:
    is_crc: bool
    covering_radius: int
    matrix: Optional[ParamMatrix] = None
    witness: Optional[Witness] = None
    reason: str = ""
    periods: Optional[Tuple[int, ...]] = None
    expected_matches: Optional[bool] = None

    def summary(self) -> str:
        if self.is_crc:
            return f"CRC rho={self.covering_radius} {format_compact(self.matrix)}"
        return f"not a CRC: {self.reason}"


def verify_coloring(graph: Graph, labels: Sequence[int]) -> Verdict:
    """
    Decide whether labels 0..rho form an equitable partition with a
    tridiagonal quotient matrix.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (len(graph),):
        raise InvalidArgument(f"Expected {len(graph)} labels, got {labels.shape}")
    if labels.min() < 0:
        return Verdict(False, -1, reason="some vertex is unlabelled")
    rho = int(labels.max())
    if rho == 0:
        return Verdict(False, 0, reason="covering radius 0 (the code is every vertex)")
    colors = rho + 1
    if np.unique(labels).size != colors:
        return Verdict(False, rho, reason="labels are not contiguous 0..rho")

    src, dst = graph.arcs()
    counts = np.zeros((len(graph), colors), dtype=np.int64)
    np.add.at(counts, (src, labels[dst]), 1)

    representatives = np.array([np.flatnonzero(labels == i)[0] for i in range(colors)])
    expected = counts[representatives[labels]]
    bad = np.flatnonzero(np.any(counts != expected, axis=1))
    if bad.size:
        v = int(bad[0])
        witness = Witness(
            graph.word(v), int(labels[v]),
            tuple(int(x) for x in counts[v]), tuple(int(x) for x in expected[v]),
        )
        return Verdict(False, rho, witness=witness, reason="neighbor counts depend on more than the label")

    quotient = counts[representatives]
    try:
        matrix = ParamMatrix.from_array(quotient)
    except MalformedMatrix:
        return Verdict(False, rho, reason="quotient matrix is not tridiagonal")
    except InconsistentMatrix:
        return Verdict(False, rho, reason="color classes have different degrees")
    return Verdict(True, rho, matrix=matrix)


def inflate_periods(periods: Sequence[int], minimum: int) -> Tuple[int, ...]:
    return tuple(q * ceil(minimum / q) for q in periods)


def _guard(periods: Tuple[int, ...], cap: int):
    if prod(periods) > cap:
        raise InflationOverflow(f"Verification torus {periods} exceeds {cap} vertices")


def verify_periodic(code: PeriodicCode, expected: Optional[ParamMatrix] = None,
                    max_vertices: Optional[int] = None) -> Verdict:
    """
    Verify a periodic code on a torus whose axes are >= max(3, 2*rho+2),
    rho being observed on a smaller torus first.
    """
    cap = max_vertices or settings.VERIFY_MAX_VERTICES

    scout_periods = inflate_periods(code.periods, 3)
    _guard(scout_periods, cap)
    scout = torus_graph(code.n, scout_periods)
    scout_labels = distance_partition(scout, code.mask_on(scout_periods))
    rho = int(scout_labels.max())

    periods = inflate_periods(code.periods, max(3, 2 * rho + 2))
    _guard(periods, cap)
    if periods == scout_periods:
        graph, labels = scout, scout_labels
    else:
        graph = torus_graph(code.n, periods)
        labels = distance_partition(graph, code.mask_on(periods))

    verdict = verify_coloring(graph, labels)
    verdict.periods = periods
    if expected is not None:
        verdict.expected_matches = verdict.is_crc and verdict.matrix == expected
        if not verdict.expected_matches:
            logger.warning(f"⚠️ Expected {format_compact(expected)}, verified {verdict.summary()}")
    logger.debug(f"Verified code with periods {code.periods} on torus {periods}: {verdict.summary()}")
    return verdict


def minimal_period(code: PeriodicCode, axis: int) -> int:
    """Smallest d | q_axis with the code invariant under +d e_axis (axis from 1)."""
    q = code.periods[axis - 1]
    mask = code.box_mask()
    for d in range(1, q + 1):
        if q % d == 0 and np.array_equal(np.roll(mask, d, axis=axis - 1), mask):
            return d
    return q


def coloring_on_ball(code: PeriodicCode, ball: BallGraph) -> np.ndarray:
    """Distance-to-code labels of the ball vertices."""
    periods = inflate_periods(code.periods, 3)
    torus = torus_graph(code.n, periods)
    labels = distance_partition(torus, code.mask_on(periods))
    return np.array([labels[torus.index_of(w)] for w in ball.vertices], dtype=np.int64)
