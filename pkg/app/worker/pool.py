"""
Solve Pool: runs independent LP jobs, in-process or across joblib workers.

Results always come back in submission order, so reports do not depend on
which worker finished first.
"""
import sys
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, TypeVar

from joblib import Parallel, delayed
from loguru import logger

from app.core.budget import SearchBudget
from app.core.config import settings
from app.grid.lattice import BallGraph, ball_graph
from app.grid.matrix import parse_compact, parse_partial
from app.lp.opb import problem_hash
from app.lp.problem import FeasibilityProblem, Mode, build_lp_full, build_lp_partial
from app.lp.solver import SolveResult, solve
from app.classify.report import LpRecord

T = TypeVar("T")
R = TypeVar("R")


@lru_cache(maxsize=16)
def cached_ball(n: int, radius: int) -> BallGraph:
    return ball_graph(n, radius)


@dataclass(frozen=True)
class LpJob:
    """A picklable description of one LP instance."""
    n: int
    matrix: str
    mode: Mode
    radius: int

    def build(self) -> FeasibilityProblem:
        ball = cached_ball(self.n, self.radius)
        if self.mode == Mode.FULL:
            return build_lp_full(ball, parse_compact(self.matrix, 2 * self.n))
        return build_lp_partial(ball, parse_partial(self.matrix, 2 * self.n), self.mode)


def run_job(job: LpJob, budget: Optional[SearchBudget] = None) -> LpRecord:
    problem = job.build()
    result: SolveResult = solve(problem, budget, label=f"{job.mode.value} {job.matrix} R={job.radius}")
    if result.timed_out:
        logger.warning(f"⚠️ Timeout: {job.mode.value} {job.matrix} at R={job.radius}")
    return LpRecord(
        mode=job.mode.value,
        matrix=job.matrix,
        n=job.n,
        radius=job.radius,
        status=result.status.value,
        nodes=result.stats.nodes,
        propagations=result.stats.propagations,
        max_depth=result.stats.max_depth,
        problem_hash=problem_hash(problem),
    )


def _in_worker(func: Callable[[T], R], item: T, level: str) -> R:
    # loky workers start with loguru's default DEBUG sink
    logger.remove()
    logger.add(sys.stderr, level=level)
    return func(item)


class SolvePool:
    """
    Dispatches independent tasks.

    n_jobs == 1 runs everything in-process; larger values use joblib's
    process backend.
    """

    def __init__(self, n_jobs: Optional[int] = None):
        self.n_jobs = n_jobs or settings.N_JOBS

    def map(self, func: Callable[[T], R], items: Sequence[T]) -> List[R]:
        items = list(items)
        if self.n_jobs == 1 or len(items) <= 1:
            return [func(item) for item in items]
        logger.info(f"🚀 Dispatching {len(items)} tasks to {self.n_jobs} workers")
        return Parallel(n_jobs=self.n_jobs)(
            delayed(_in_worker)(func, item, settings.LOG_LEVEL) for item in items
        )
