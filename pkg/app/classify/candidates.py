"""
Candidate parameter matrices for the LP-driven classification.

A candidate of covering radius rho is a PartialMatrix: every row above
row rho-1 is complete, row rho-1 leaves room for b_{rho-1} >= 1, and row rho
carries only c_rho. Monotonicity (c ascending, b descending) and the
r-null prefix are enforced at enumeration time.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

from app.core.errors import InvalidArgument
from app.grid.matrix import (
    ParamMatrix,
    PartialMatrix,
    Reduction,
    extension,
    format_compact,
    opposite_matrix,
    reducible_check,
)


@dataclass
class CandidateSet:
    n: int
    rho: int
    r: int
    candidates: List[PartialMatrix] = field(default_factory=list)

    def __iter__(self) -> Iterator[PartialMatrix]:
        return iter(self.candidates)

    def __len__(self) -> int:
        return len(self.candidates)


def enumerate_partial(n: int, rho: int, r: int) -> CandidateSet:
    """All r-null (rho+1) x rho candidates in G_n."""
    if n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n}")
    if not 1 <= r <= rho:
        raise InvalidArgument(f"Need 1 <= r <= rho, got r={r}, rho={rho}")
    valency = 2 * n
    found: List[PartialMatrix] = []

    def rows(i: int, a: List[int], b: List[int], c: List[int]):
        # c holds c_1..c_i; choose a_i, then b_i and c_{i+1}
        c_i = c[-1] if c else 0
        for a_i in ([0] if i < r else range(valency - c_i)):
            if i == rho - 1:
                for c_last in range(max(c_i, 1), valency + 1):
                    found.append(PartialMatrix(tuple(a + [a_i]), tuple(b), tuple(c + [c_last]), valency))
                continue
            b_i = valency - c_i - a_i
            if b and b_i > b[-1]:
                continue
            # c_i = 2n below row rho would leave no room for b_i
            for c_next in range(max(c_i, 1), valency):
                rows(i + 1, a + [a_i], b + [b_i], c + [c_next])

    rows(0, [], [], [])
    return CandidateSet(n, rho, r, found)


def descendants(partial: PartialMatrix) -> List[PartialMatrix]:
    """
    (rho+2) x (rho+1) matrices with `partial` as upper-left block.

    Row rho-1 is completed with its implied b_{rho-1}; the new row rho gets
    a_rho and the new last row c_{rho+1} >= c_rho. Nothing follows c_rho = 2n.
    """
    valency = partial.valency
    rho = partial.rho
    c_rho = partial.c[-1]
    if c_rho >= valency:
        return []
    _, _, b_last = partial.complete_row(rho - 1)
    if b_last < 1 or (partial.b and b_last > partial.b[-1]):
        return []

    result = []
    for a_rho in range(valency - c_rho + 1):
        for c_next in range(c_rho, valency + 1):
            result.append(PartialMatrix(
                partial.a + (a_rho,), partial.b + (b_last,), partial.c + (c_next,), valency,
            ))
    return result


def viable(partial: PartialMatrix) -> bool:
    """Structural filter: the implied b_{rho-1} is positive and no cell below row rho has c_i = 2n."""
    _, _, b_last = partial.complete_row(partial.rho - 1)
    if b_last < 1:
        return False
    if any(c < 1 for c in partial.c):
        return False
    return all(c < partial.valency for c in partial.c[:-1])


def viable_descendants(partial: PartialMatrix) -> List[PartialMatrix]:
    return [d for d in descendants(partial) if viable(d)]


def repeating_rows(partial: PartialMatrix) -> Optional[Tuple[int, int]]:
    """First pair i < j of equal complete interior rows (c_i, a_i, b_i), 1 <= i < j <= rho-1."""
    interior = [partial.complete_row(i) for i in range(1, partial.rho)]
    for i in range(len(interior)):
        for j in range(i + 1, len(interior)):
            if interior[i] == interior[j]:
                return (i + 1, j + 1)
    return None


def family_reduction(partial: PartialMatrix, n: int) -> Optional[Reduction]:
    """Reduction of the extension when the candidate already repeats an interior row."""
    if repeating_rows(partial) is None:
        return None
    return reducible_check(extension(partial), n)


def canonicalize(matrix: ParamMatrix) -> ParamMatrix:
    """The smaller of A and its opposite in compact-string order."""
    opposite = opposite_matrix(matrix)
    return min(matrix, opposite, key=format_compact)
