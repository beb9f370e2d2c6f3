"""
Tests for LP jobs and the solve pool (in-process path).
"""
from app.core.budget import SearchBudget
from app.lp.problem import Mode
from app.worker.pool import LpJob, SolvePool, cached_ball, run_job


class TestLpJob:
    """Tests for rebuilding problems from picklable jobs."""

    def test_build_full(self):
        """Should build the full problem from its compact matrix."""
        problem = LpJob(1, "[0,2|1,1]", Mode.FULL, 3).build()
        assert problem.num_vars == 14
        assert problem.mode == Mode.FULL

    def test_build_partial(self):
        """A partial text with a partial mode builds a partial problem."""
        problem = LpJob(1, "[0|1]", Mode.GE, 3).build()
        assert problem.mode == Mode.GE

    def test_balls_are_cached(self):
        """Should reuse ball graphs within a worker."""
        assert cached_ball(2, 3) is cached_ball(2, 3)


class TestRunJob:
    """run_job turns a solve into a report record."""

    def test_record(self):
        """Should record status, mode, radius and hash."""
        record = run_job(LpJob(1, "[0,2|1,1]", Mode.FULL, 3))
        assert record.status == "feasible"
        assert record.mode == "full"
        assert record.radius == 3
        assert len(record.problem_hash) == 64

    def test_timeout_record(self):
        """An exhausted budget becomes a timeout record."""
        record = run_job(LpJob(2, "[0,4|1,3]", Mode.FULL, 3), SearchBudget(node_limit=1, time_limit=60.0))
        assert record.status == "timeout"


class TestSolvePool:
    """Tests for the joblib pool."""

    def test_defaults_to_settings(self):
        assert SolvePool().n_jobs == 1

    def test_map_keeps_order(self):
        """Should return records in job order."""
        jobs = [LpJob(1, m, Mode.FULL, 3) for m in ("[0,2|1,1]", "[0,2|2,0]", "[0,2|1,0,1|2,0]")]
        records = SolvePool(1).map(run_job, jobs)
        assert [r.matrix for r in records] == ["[0,2|1,1]", "[0,2|2,0]", "[0,2|1,0,1|2,0]"]
        assert [r.status for r in records] == ["feasible"] * 3
