"""
0-1 Feasibility Problems: perfect colorings of a ball subgraph as linear constraints.

Variables are chi_j[v] (vertex v has color j), numbered v * num_colors + j.
Interior vertices get equalities, boundary vertices the matching inequality,
every vertex a partition constraint, and vertex 0 is anchored to color 0.

Partial problems only constrain the colors 0..rho-1 and add a slack color F
(index rho+1) that collects every vertex at distance > rho.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from app.core.errors import InconsistentMatrix, InvalidArgument
from app.grid.lattice import BallGraph, Word
from app.grid.matrix import ParamMatrix, PartialMatrix, format_compact, format_partial


class Relation(str, Enum):
    EQ = "="
    LE = "<="
    GE = ">="


class Mode(str, Enum):
    """Which of the four LP problems a FeasibilityProblem encodes."""
    FULL = "full"
    GE = "ge"   # sum F >= 0
    EQ = "eq"   # sum F = 0
    GT = "gt"   # sum F >= 1


@dataclass(frozen=True)
class LinearConstraint:
    terms: Tuple[Tuple[int, int], ...]
    relation: Relation
    bound: int
    label: str = ""

    def activity(self, values: Sequence[int]) -> int:
        return sum(coef * values[var] for var, coef in self.terms)

    def satisfied(self, values: Sequence[int]) -> bool:
        total = self.activity(values)
        if self.relation == Relation.EQ:
            return total == self.bound
        if self.relation == Relation.LE:
            return total <= self.bound
        return total >= self.bound


@dataclass(frozen=True)
class Assignment:
    values: Tuple[int, ...]

    def flip(self, var: int) -> "Assignment":
        values = list(self.values)
        values[var] = 1 - values[var]
        return Assignment(tuple(values))


@dataclass(frozen=True, eq=False)
class FeasibilityProblem:
    """
    Immutable 0-1 feasibility instance.

    `num_colors` > 0 groups variables by vertex (coloring problems); 0 means
    a plain problem whose variables are branched on one at a time.
    """
    num_vars: int
    constraints: Tuple[LinearConstraint, ...]
    anchors: Tuple[Tuple[int, int], ...] = ()
    mode: Mode = Mode.FULL
    num_colors: int = 0
    vertices: Tuple[Word, ...] = field(default=(), repr=False)
    rho: int = 0
    n: int = 0
    radius: int = 0
    matrix: str = ""

    def __post_init__(self):
        for constraint in self.constraints:
            for var, coef in constraint.terms:
                if not 0 <= var < self.num_vars:
                    raise InvalidArgument(f"Variable {var} out of range in {constraint.label or constraint}")
                if coef == 0:
                    raise InvalidArgument(f"Zero coefficient in {constraint.label or constraint}")
        seen: Dict[int, int] = {}
        for var, value in self.anchors:
            if not 0 <= var < self.num_vars or value not in (0, 1):
                raise InvalidArgument(f"Bad anchor x{var}={value}")
            if seen.setdefault(var, value) != value:
                raise InvalidArgument(f"Variable {var} anchored to both 0 and 1")

    @property
    def num_vertices(self) -> int:
        return self.num_vars // self.num_colors if self.num_colors else 0

    @property
    def slack_color(self) -> Optional[int]:
        return self.rho + 1 if self.mode != Mode.FULL else None

    def var(self, vertex: int, color: int) -> int:
        return vertex * self.num_colors + color

    def var_map(self) -> Dict[Tuple[int, int], int]:
        return {
            (v, j): self.var(v, j)
            for v in range(self.num_vertices) for j in range(self.num_colors)
        }

    def describe(self) -> str:
        return (
            f"{self.mode.value} {self.matrix} n={self.n} R={self.radius}: "
            f"{self.num_vars} vars, {len(self.constraints)} constraints"
        )


def _coloring_problem(ball: BallGraph, columns: np.ndarray, num_colors: int, mode: Mode,
                      rho: int, matrix_text: str) -> Tuple[List[LinearConstraint], int]:
    """Partition + neighbor-count constraints for the given matrix columns."""
    size = len(ball)
    constraints: List[LinearConstraint] = []

    def var(v: int, j: int) -> int:
        return v * num_colors + j

    for v in range(size):
        constraints.append(LinearConstraint(
            tuple((var(v, j), 1) for j in range(num_colors)), Relation.EQ, 1, f"partition v={v}",
        ))

    rows, cols = columns.shape
    for v in range(size):
        relation = Relation.EQ if ball.interior[v] else Relation.LE
        for j in range(cols):
            terms = [(var(u, j), 1) for u in ball.adjacency[v]]
            terms += [(var(v, i), -int(columns[i, j])) for i in range(rows) if columns[i, j]]
            constraints.append(LinearConstraint(tuple(terms), relation, 0, f"count v={v} color={j}"))
    return constraints, size * num_colors


def _check_valency(ball: BallGraph, valency: int):
    if valency != ball.valency:
        raise InconsistentMatrix(f"Matrix valency {valency} does not match G_{ball.n} (valency {ball.valency})")


def build_lp_full(ball: BallGraph, matrix: ParamMatrix) -> FeasibilityProblem:
    """Colorings of the ball with exactly the matrix's rho+1 colors."""
    _check_valency(ball, matrix.valency)
    colors = matrix.rho + 1
    text = format_compact(matrix)
    constraints, num_vars = _coloring_problem(ball, matrix.to_array(), colors, Mode.FULL, matrix.rho, text)
    problem = FeasibilityProblem(
        num_vars, tuple(constraints), ((0, 1),), Mode.FULL, colors,
        ball.vertices, matrix.rho, ball.n, ball.radius, text,
    )
    logger.debug(f"Built {problem.describe()}")
    return problem


def build_lp_partial(ball: BallGraph, partial: PartialMatrix, mode: Union[Mode, str]) -> FeasibilityProblem:
    """Colorings constrained only through the columns of the partial block."""
    mode = Mode(mode)
    if mode == Mode.FULL:
        raise InvalidArgument("Partial problems use modes ge, eq or gt")
    _check_valency(ball, partial.valency)
    rho = partial.rho
    colors = rho + 2
    text = format_partial(partial)
    constraints, num_vars = _coloring_problem(ball, partial.to_array(), colors, mode, rho, text)

    slack = tuple((v * colors + rho + 1, 1) for v in range(len(ball)))
    if mode == Mode.EQ:
        constraints.append(LinearConstraint(slack, Relation.EQ, 0, "slack F empty"))
    elif mode == Mode.GT:
        constraints.append(LinearConstraint(slack, Relation.GE, 1, "slack F nonempty"))

    problem = FeasibilityProblem(
        num_vars, tuple(constraints), ((0, 1),), mode, colors,
        ball.vertices, rho, ball.n, ball.radius, text,
    )
    logger.debug(f"Built {problem.describe()}")
    return problem


def encode_coloring(problem: FeasibilityProblem, labels: Sequence[int]) -> Assignment:
    """0-1 assignment of a vertex coloring; labels above rho go to the slack color."""
    if len(labels) != problem.num_vertices:
        raise InvalidArgument(f"Expected {problem.num_vertices} labels, got {len(labels)}")
    values = [0] * problem.num_vars
    top = problem.num_colors - 1
    for v, label in enumerate(labels):
        values[problem.var(v, min(int(label), top))] = 1
    return Assignment(tuple(values))


def decode_assignment(problem: FeasibilityProblem, assignment: Assignment) -> np.ndarray:
    """Color index per vertex (-1 where no color variable is set)."""
    grid = np.array(assignment.values, dtype=np.int64).reshape(problem.num_vertices, problem.num_colors)
    labels = grid.argmax(axis=1)
    labels[grid.sum(axis=1) == 0] = -1
    return labels


def verify_assignment(problem: FeasibilityProblem, assignment: Assignment) -> bool:
    values = assignment.values
    if len(values) != problem.num_vars or any(v not in (0, 1) for v in values):
        return False
    if any(values[var] != value for var, value in problem.anchors):
        return False
    return all(c.satisfied(values) for c in problem.constraints)


def restrict_assignment(big: FeasibilityProblem, assignment: Assignment,
                        small: FeasibilityProblem) -> Assignment:
    """Restrict a coloring of a larger ball to the vertices of a smaller one."""
    if big.num_colors != small.num_colors:
        raise InvalidArgument("Problems use different color sets")
    index = {w: i for i, w in enumerate(big.vertices)}
    values = []
    for w in small.vertices:
        if w not in index:
            raise InvalidArgument(f"Vertex {w} is not in the larger ball")
        v = index[w]
        values.extend(assignment.values[big.var(v, j)] for j in range(big.num_colors))
    return Assignment(tuple(values))
