"""
Parameter Matrices: the tridiagonal intersection arrays of completely regular codes.

Compact notation lists the tridiagonal entries row by row:
    [a0,b0 | c1,a1,b1 | ... | c_rho,a_rho]

Partial matrices (the upper-left (rho+1) x rho block) are written as their
dense rows, e.g. "[0,6|2,0|0,3]"; the tridiagonal short form "[0,6|2,0|3]"
is accepted on input as well.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from app.core.errors import ExtensionError, InconsistentMatrix, MalformedMatrix


def _check_entries(*groups: Sequence[int]):
    for group in groups:
        for value in group:
            if value < 0:
                raise MalformedMatrix(f"Negative matrix entry {value}")


@dataclass(frozen=True)
class ParamMatrix:
    """Full (rho+1) x (rho+1) parameter matrix. `c` holds c_1..c_rho."""
    a: Tuple[int, ...]
    b: Tuple[int, ...]
    c: Tuple[int, ...]
    valency: int

    def __post_init__(self):
        if len(self.a) < 2 or len(self.b) != len(self.a) - 1 or len(self.c) != len(self.a) - 1:
            raise MalformedMatrix(
                f"Shape mismatch: |a|={len(self.a)}, |b|={len(self.b)}, |c|={len(self.c)}"
            )
        _check_entries(self.a, self.b, self.c)
        for i in range(self.rho + 1):
            total = sum(self.row(i))
            if total != self.valency:
                raise InconsistentMatrix(
                    f"Row {i} of {format_compact(self)} sums to {total}, expected {self.valency}"
                )

    @property
    def rho(self) -> int:
        return len(self.a) - 1

    def row(self, i: int) -> Tuple[int, int, int]:
        """(c_i, a_i, b_i) with c_0 = b_rho = 0."""
        c = self.c[i - 1] if i > 0 else 0
        b = self.b[i] if i < self.rho else 0
        return (c, self.a[i], b)

    def to_array(self) -> np.ndarray:
        size = self.rho + 1
        array = np.zeros((size, size), dtype=np.int64)
        for i in range(size):
            c, a, b = self.row(i)
            array[i, i] = a
            if i > 0:
                array[i, i - 1] = c
            if i < self.rho:
                array[i, i + 1] = b
        return array

    @classmethod
    def from_array(cls, array: np.ndarray) -> "ParamMatrix":
        array = np.asarray(array, dtype=np.int64)
        size = array.shape[0]
        if array.shape != (size, size) or size < 2:
            raise MalformedMatrix(f"Expected a square matrix of size >= 2, got {array.shape}")
        off_band = np.abs(np.subtract.outer(np.arange(size), np.arange(size))) > 1
        if np.any(array[off_band]):
            raise MalformedMatrix("Matrix is not tridiagonal")
        return cls(
            a=tuple(int(array[i, i]) for i in range(size)),
            b=tuple(int(array[i, i + 1]) for i in range(size - 1)),
            c=tuple(int(array[i, i - 1]) for i in range(1, size)),
            valency=int(array[0].sum()),
        )

    def is_r_null(self, r: int) -> bool:
        return all(v == 0 for v in self.a[:r])

    def is_all_nulls(self) -> bool:
        return all(v == 0 for v in self.a)

    def is_all_ones(self) -> bool:
        return all(v == 1 for v in self.a)

    def scale(self, k: int) -> "ParamMatrix":
        """kA: the matrix of the k-fold block-sum code."""
        return ParamMatrix(
            tuple(k * v for v in self.a), tuple(k * v for v in self.b),
            tuple(k * v for v in self.c), k * self.valency,
        )

    def plus_identity(self) -> "ParamMatrix":
        """A + E: the matrix of the same code in the graph with a loop at every vertex."""
        return ParamMatrix(tuple(v + 1 for v in self.a), self.b, self.c, self.valency + 1)

    def __str__(self) -> str:
        return format_compact(self)


@dataclass(frozen=True)
class PartialMatrix:
    """
    Upper-left (rho+1) x rho block of a would-be parameter matrix.

    Holds a_0..a_{rho-1}, b_0..b_{rho-2} and c_1..c_rho; row rho carries c_rho only.
    """
    a: Tuple[int, ...]
    b: Tuple[int, ...]
    c: Tuple[int, ...]
    valency: int

    def __post_init__(self):
        rho = len(self.c)
        if rho < 1 or len(self.a) != rho or len(self.b) != rho - 1:
            raise MalformedMatrix(
                f"Shape mismatch: |a|={len(self.a)}, |b|={len(self.b)}, |c|={len(self.c)}"
            )
        _check_entries(self.a, self.b, self.c)
        for i in range(rho + 1):
            if self.row_sum(i) > self.valency:
                raise InconsistentMatrix(
                    f"Row {i} of {format_partial(self)} exceeds valency {self.valency}"
                )

    @property
    def rho(self) -> int:
        return len(self.c)

    def row_sum(self, i: int) -> int:
        c = self.c[i - 1] if i > 0 else 0
        a = self.a[i] if i < self.rho else 0
        b = self.b[i] if i < self.rho - 1 else 0
        return c + a + b

    def complete_row(self, i: int) -> Tuple[int, int, int]:
        """(c_i, a_i, b_i) for i < rho, with b_{rho-1} implied by the valency."""
        if i >= self.rho:
            raise MalformedMatrix(f"Row {i} of a partial matrix with rho={self.rho} is not complete")
        c = self.c[i - 1] if i > 0 else 0
        b = self.b[i] if i < self.rho - 1 else self.valency - c - self.a[i]
        return (c, self.a[i], b)

    def to_array(self) -> np.ndarray:
        rho = self.rho
        array = np.zeros((rho + 1, rho), dtype=np.int64)
        for i in range(rho):
            array[i, i] = self.a[i]
            if i + 1 < rho:
                array[i, i + 1] = self.b[i]
        for i in range(1, rho + 1):
            array[i, i - 1] = self.c[i - 1]
        return array

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], valency: int) -> "PartialMatrix":
        """Build from the dense rows of the block, e.g. ((0,6),(1,0),(0,5))."""
        array = np.asarray(rows, dtype=np.int64)
        rho = array.shape[0] - 1
        if rho < 1 or array.shape != (rho + 1, rho):
            raise MalformedMatrix(f"Partial block must be (rho+1) x rho, got {array.shape}")
        for i in range(rho + 1):
            for j in range(rho):
                if abs(i - j) > 1 and array[i, j]:
                    raise MalformedMatrix(f"Entry ({i},{j}) lies off the tridiagonal band")
        return cls(
            a=tuple(int(array[i, i]) for i in range(rho)),
            b=tuple(int(array[i, i + 1]) for i in range(rho - 1)),
            c=tuple(int(array[i, i - 1]) for i in range(1, rho + 1)),
            valency=valency,
        )

    def is_r_null(self, r: int) -> bool:
        return all(v == 0 for v in self.a[:r])

    def __str__(self) -> str:
        return format_partial(self)


Matrix = Union[ParamMatrix, PartialMatrix]


@dataclass(frozen=True)
class Reduction:
    """Outcome of the repeating-row test: a G_1 matrix, or an inconsistency."""
    rows: Tuple[int, int]
    reduced: Optional[ParamMatrix]

    @property
    def consistent(self) -> bool:
        return self.reduced is not None


def _segments(text: str) -> List[List[int]]:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise MalformedMatrix(f"Expected '[...]', got {text!r}")
    segments = []
    for chunk in body[1:-1].split("|"):
        try:
            values = [int(tok) for tok in chunk.split(",")]
        except ValueError:
            raise MalformedMatrix(f"Non-integer entry in segment {chunk.strip()!r} of {text!r}")
        segments.append(values)
    return segments


def parse_compact(text: str, valency: Optional[int] = None) -> ParamMatrix:
    """Parse "[a0,b0|c1,a1,b1|...|c_rho,a_rho]"."""
    segments = _segments(text)
    if len(segments) < 2:
        raise MalformedMatrix(f"A parameter matrix needs rho >= 1: {text!r}")
    if len(segments[0]) != 2 or len(segments[-1]) != 2 or any(len(s) != 3 for s in segments[1:-1]):
        raise MalformedMatrix(f"Segment lengths must be 2,3,...,3,2: {text!r}")
    for seg in segments:
        _check_entries(seg)

    a = [segments[0][0]]
    b = [segments[0][1]]
    c = []
    for c_i, a_i, b_i in segments[1:-1]:
        c.append(c_i)
        a.append(a_i)
        b.append(b_i)
    c.append(segments[-1][0])
    a.append(segments[-1][1])

    inferred = a[0] + b[0]
    if valency is not None and valency != inferred:
        raise InconsistentMatrix(f"Row 0 of {text!r} sums to {inferred}, expected valency {valency}")
    return ParamMatrix(tuple(a), tuple(b), tuple(c), inferred)


def format_compact(matrix: ParamMatrix) -> str:
    segments = []
    for i in range(matrix.rho + 1):
        c, a, b = matrix.row(i)
        if i == 0:
            segments.append(f"{a},{b}")
        elif i == matrix.rho:
            segments.append(f"{c},{a}")
        else:
            segments.append(f"{c},{a},{b}")
    return "[" + "|".join(segments) + "]"


def parse_partial(text: str, valency: Optional[int] = None) -> PartialMatrix:
    """
    Parse a partial block in dense-row form "[0,6|1,0|0,5]" or
    tridiagonal short form "[0,6|1,0|5]".

    Without an explicit valency, row 0 is taken to be complete (a0 + b0).
    """
    segments = _segments(text)
    rho = len(segments) - 1
    if rho < 1:
        raise MalformedMatrix(f"A partial matrix needs rho >= 1: {text!r}")
    for seg in segments:
        _check_entries(seg)

    if all(len(seg) == rho for seg in segments):
        rows = segments
    else:
        expected = [min(2, rho)] + [3] * (rho - 2) + ([2] if rho >= 2 else []) + [1]
        if [len(seg) for seg in segments] != expected:
            raise MalformedMatrix(f"Cannot read {text!r} as a ({rho + 1})x{rho} partial block")
        rows = []
        for i, seg in enumerate(segments):
            row = [0] * rho
            start = max(0, i - 1)
            for offset, value in enumerate(seg):
                row[start + offset] = value
            rows.append(row)

    if valency is None:
        valency = sum(rows[0]) if rho >= 2 else None
        if valency is None:
            raise MalformedMatrix(f"Valency must be given for rho=1 partial matrices: {text!r}")
    return PartialMatrix.from_rows(rows, valency)


def format_partial(matrix: PartialMatrix) -> str:
    rows = matrix.to_array()
    return "[" + "|".join(",".join(str(int(v)) for v in row) for row in rows) + "]"


def extension(partial: PartialMatrix) -> ParamMatrix:
    """Append the column that completes every row to the valency."""
    rho = partial.rho
    for i in range(rho - 1):
        if partial.row_sum(i) != partial.valency:
            raise ExtensionError(
                f"Row {i} of {format_partial(partial)} would need an entry off the tridiagonal band"
            )
    b_last = partial.valency - partial.row_sum(rho - 1)
    a_last = partial.valency - partial.c[-1]
    if b_last < 0 or a_last < 0:
        raise ExtensionError(f"Extension of {format_partial(partial)} would be negative")
    return ParamMatrix(
        a=partial.a + (a_last,),
        b=partial.b + (b_last,),
        c=partial.c,
        valency=partial.valency,
    )


def opposite_matrix(matrix: ParamMatrix) -> ParamMatrix:
    """Matrix of the opposite code (the last cell taken as the new code)."""
    return ParamMatrix(
        a=matrix.a[::-1],
        b=matrix.c[::-1],
        c=matrix.b[::-1],
        valency=matrix.valency,
    )


def monotonicity_check(matrix: Matrix) -> bool:
    """c nondecreasing and b nonincreasing over the entries present."""
    c_ok = all(x <= y for x, y in zip(matrix.c, matrix.c[1:]))
    b_ok = all(x >= y for x, y in zip(matrix.b, matrix.b[1:]))
    return c_ok and b_ok


def reducible_check(matrix: ParamMatrix, n: int) -> Optional[Reduction]:
    """
    Look for two equal interior rows (c_i, a_i, b_i), 1 <= i < j <= rho-1.

    Such a code comes from a G_1 code by the block-sum construction, so the
    matrix must be n times a valency-2 matrix.
    """
    interior = [matrix.row(i) for i in range(1, matrix.rho)]
    for i in range(len(interior)):
        for j in range(i + 1, len(interior)):
            if interior[i] != interior[j]:
                continue
            rows = (i + 1, j + 1)
            entries = matrix.a + matrix.b + matrix.c
            if all(v % n == 0 for v in entries):
                reduced = ParamMatrix(
                    tuple(v // n for v in matrix.a), tuple(v // n for v in matrix.b),
                    tuple(v // n for v in matrix.c), matrix.valency // n,
                )
                return Reduction(rows, reduced)
            return Reduction(rows, None)
    return None
