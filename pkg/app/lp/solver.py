"""
Complete 0-1 feasibility solver: depth-first search with linear bound
propagation over a trail.

Every constraint tracks the activity of its fixed variables plus the sums of
the positive and negative coefficients still free, which give its lower and
upper activity bounds. A constraint whose slack is smaller than a free
coefficient forces that variable. Coloring problems branch on the lowest
undecided vertex, trying its colors in ascending order.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from app.core.budget import SearchBudget, SearchMeter, SearchStats
from app.core.errors import ProblemTooLarge
from app.lp.problem import Assignment, FeasibilityProblem, Relation, verify_assignment

BRUTE_FORCE_MAX_VARS = 24
_CHUNK = 1 << 16
_FREE = -1


class SolveStatus(str, Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    TIMEOUT = "timeout"


@dataclass
class SolveResult:
    status: SolveStatus
    assignment: Optional[Assignment] = None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def feasible(self) -> bool:
        return self.status == SolveStatus.FEASIBLE

    @property
    def infeasible(self) -> bool:
        return self.status == SolveStatus.INFEASIBLE

    @property
    def timed_out(self) -> bool:
        return self.status == SolveStatus.TIMEOUT

    def to_dict(self, with_timing: bool = True) -> Dict:
        return {"status": self.status.value, "stats": self.stats.to_dict(with_timing)}


@dataclass
class _Frame:
    choices: List[Tuple[int, int]]
    mark: int
    next: int = 0


class PropagationSolver:
    """One search over one problem; not reusable."""

    def __init__(self, problem: FeasibilityProblem, meter: SearchMeter):
        self.problem = problem
        self.meter = meter
        m = len(problem.constraints)

        self.terms: List[Tuple[Tuple[int, int], ...]] = [c.terms for c in problem.constraints]
        self.bound = [c.bound for c in problem.constraints]
        self.check_le = [c.relation in (Relation.LE, Relation.EQ) for c in problem.constraints]
        self.check_ge = [c.relation in (Relation.GE, Relation.EQ) for c in problem.constraints]
        self.max_coef = [max((abs(k) for _, k in c.terms), default=0) for c in problem.constraints]

        self.fixed = [0] * m
        self.pos_free = [sum(k for _, k in t if k > 0) for t in self.terms]
        self.neg_free = [sum(k for _, k in t if k < 0) for t in self.terms]

        self.occurrences: List[List[Tuple[int, int]]] = [[] for _ in range(problem.num_vars)]
        for ci, t in enumerate(self.terms):
            for var, coef in t:
                self.occurrences[var].append((ci, coef))

        self.values = [_FREE] * problem.num_vars
        self.trail: List[int] = []
        self.queue: deque = deque()
        self.queued = [False] * m

    def _enqueue(self, ci: int):
        if not self.queued[ci]:
            self.queued[ci] = True
            self.queue.append(ci)

    def _assign(self, var: int, value: int) -> bool:
        current = self.values[var]
        if current != _FREE:
            return current == value
        self.values[var] = value
        self.trail.append(var)
        for ci, coef in self.occurrences[var]:
            if coef > 0:
                self.pos_free[ci] -= coef
            else:
                self.neg_free[ci] -= coef
            self.fixed[ci] += coef * value
            self._enqueue(ci)
        return True

    def _undo(self, mark: int):
        while len(self.trail) > mark:
            var = self.trail.pop()
            value = self.values[var]
            self.values[var] = _FREE
            for ci, coef in self.occurrences[var]:
                if coef > 0:
                    self.pos_free[ci] += coef
                else:
                    self.neg_free[ci] += coef
                self.fixed[ci] -= coef * value

    def _clear_queue(self):
        while self.queue:
            self.queued[self.queue.popleft()] = False

    def _propagate(self) -> bool:
        """Run to fixpoint. False on conflict."""
        while self.queue:
            ci = self.queue.popleft()
            self.queued[ci] = False
            self.meter.stats.propagations += 1

            lo = self.fixed[ci] + self.neg_free[ci]
            hi = self.fixed[ci] + self.pos_free[ci]
            bound = self.bound[ci]
            le, ge = self.check_le[ci], self.check_ge[ci]
            if (le and lo > bound) or (ge and hi < bound):
                self._clear_queue()
                return False

            le_slack = bound - lo if le else None
            ge_slack = hi - bound if ge else None
            smallest = min(s for s in (le_slack, ge_slack) if s is not None)
            if self.max_coef[ci] <= smallest:
                continue

            # Slacks are read once per visit; forcing re-queues the constraint.
            for var, coef in self.terms[ci]:
                if self.values[var] != _FREE:
                    continue
                size = abs(coef)
                if le_slack is not None and size > le_slack:
                    self._assign(var, 0 if coef > 0 else 1)
                elif ge_slack is not None and size > ge_slack:
                    self._assign(var, 1 if coef > 0 else 0)
        return True

    def _choices(self) -> Optional[List[Tuple[int, int]]]:
        """Branching alternatives at the first undecided variable group, or None when all are set."""
        values = self.values
        k = self.problem.num_colors
        if k > 1:
            for v in range(self.problem.num_vertices):
                base = v * k
                group = values[base:base + k]
                if 1 in group:
                    continue
                free = [base + j for j in range(k) if group[j] == _FREE]
                if free:
                    return [(var, 1) for var in free]
            return None
        for var, value in enumerate(values):
            if value == _FREE:
                return [(var, 0), (var, 1)]
        return None

    def _complete(self) -> Assignment:
        # Variables a coloring problem leaves free after every vertex is colored are 0.
        return Assignment(tuple(max(v, 0) for v in self.values))

    def run(self) -> Tuple[SolveStatus, Optional[Assignment]]:
        for ci in range(len(self.terms)):
            self._enqueue(ci)
        for var, value in self.problem.anchors:
            if not self._assign(var, value):
                return SolveStatus.INFEASIBLE, None
        if not self._propagate():
            return SolveStatus.INFEASIBLE, None

        stack: List[_Frame] = []
        while True:
            choices = self._choices()
            if choices is None:
                return SolveStatus.FEASIBLE, self._complete()
            stack.append(_Frame(choices, len(self.trail)))

            advanced = False
            while stack:
                frame = stack[-1]
                self._undo(frame.mark)
                if frame.next >= len(frame.choices):
                    stack.pop()
                    continue
                var, value = frame.choices[frame.next]
                frame.next += 1
                if not self.meter.record_node(len(stack)):
                    return SolveStatus.TIMEOUT, None
                if self._assign(var, value) and self._propagate():
                    advanced = True
                    break
                self._clear_queue()
            if not advanced:
                return SolveStatus.INFEASIBLE, None


def solve(problem: FeasibilityProblem, budget: Optional[SearchBudget] = None,
          label: Optional[str] = None) -> SolveResult:
    """Decide feasibility within the budget. A Feasible result is re-checked against every constraint."""
    meter = SearchMeter(budget, label or problem.matrix or "solve")
    status, assignment = PropagationSolver(problem, meter).run()
    stats = meter.finish()

    if status == SolveStatus.FEASIBLE and not verify_assignment(problem, assignment):
        raise AssertionError(f"Solver returned an assignment violating {problem.describe()}")

    logger.debug(
        f"{meter.label}: {status.value} after {stats.nodes} nodes, "
        f"{stats.propagations} propagations ({stats.elapsed:.2f}s)"
    )
    return SolveResult(status, assignment, stats)


def brute_force(problem: FeasibilityProblem) -> SolveResult:
    """Exhaustive check over all 2^N assignments; for cross-checking small problems."""
    n = problem.num_vars
    if n > BRUTE_FORCE_MAX_VARS:
        raise ProblemTooLarge(f"Brute force is limited to {BRUTE_FORCE_MAX_VARS} variables, got {n}")

    m = len(problem.constraints)
    coefs = np.zeros((m, n), dtype=np.int64)
    for ci, constraint in enumerate(problem.constraints):
        for var, coef in constraint.terms:
            coefs[ci, var] += coef
    bounds = np.array([c.bound for c in problem.constraints], dtype=np.int64)
    is_eq = np.array([c.relation == Relation.EQ for c in problem.constraints], dtype=bool)
    is_le = np.array([c.relation == Relation.LE for c in problem.constraints], dtype=bool)
    is_ge = np.array([c.relation == Relation.GE for c in problem.constraints], dtype=bool)
    shifts = np.arange(n, dtype=np.int64)

    stats = SearchStats()
    total = 1 << n
    for start in range(0, total, _CHUNK):
        ints = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        bits = (ints[:, None] >> shifts) & 1
        ok = np.ones(len(ints), dtype=bool)
        for var, value in problem.anchors:
            ok &= bits[:, var] == value
        if m:
            activity = bits @ coefs.T
            ok &= np.all(
                (~is_eq | (activity == bounds)) & (~is_le | (activity <= bounds)) & (~is_ge | (activity >= bounds)),
                axis=1,
            )
        stats.nodes += len(ints)
        hits = np.flatnonzero(ok)
        if hits.size:
            row = bits[hits[0]]
            return SolveResult(SolveStatus.FEASIBLE, Assignment(tuple(int(b) for b in row)), stats)
    return SolveResult(SolveStatus.INFEASIBLE, None, stats)
