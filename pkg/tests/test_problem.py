"""
Tests for building coloring problems from parameter matrices.
"""
import pytest

from app.core.errors import InconsistentMatrix, InvalidArgument
from app.grid.codes import coloring_on_ball
from app.grid.constructions import distance_code, golomb_welch_perfect
from app.grid.lattice import ball_graph
from app.grid.matrix import parse_compact, parse_partial
from app.lp.problem import (
    Assignment,
    FeasibilityProblem,
    LinearConstraint,
    Mode,
    Relation,
    build_lp_full,
    build_lp_partial,
    decode_assignment,
    encode_coloring,
    restrict_assignment,
    verify_assignment,
)
from app.lp.solver import solve


class TestProblemModel:
    """Tests for constraints and problem validation."""

    def test_constraint_relations(self):
        """Should evaluate EQ, LE and GE against a 0-1 vector."""
        values = (1, 0, 1)
        terms = ((0, 1), (1, 2), (2, -1))
        assert LinearConstraint(terms, Relation.EQ, 0).satisfied(values)
        assert LinearConstraint(terms, Relation.LE, 0).satisfied(values)
        assert not LinearConstraint(terms, Relation.GE, 1).satisfied(values)

    def test_rejects_out_of_range_variable(self):
        """Should reject a term whose variable index exceeds num_vars."""
        with pytest.raises(InvalidArgument):
            FeasibilityProblem(2, (LinearConstraint(((2, 1),), Relation.EQ, 1),))

    def test_rejects_zero_coefficient(self):
        with pytest.raises(InvalidArgument):
            FeasibilityProblem(2, (LinearConstraint(((0, 0),), Relation.EQ, 0),))

    def test_rejects_conflicting_anchors(self):
        """One variable cannot be anchored to both 0 and 1."""
        with pytest.raises(InvalidArgument):
            FeasibilityProblem(2, (), anchors=((0, 1), (0, 0)))

    def test_flip(self):
        assert Assignment((0, 1, 1)).flip(1).values == (0, 0, 1)


class TestBuilders:
    """Tests for the full and partial coloring problems."""

    def test_full_problem_shape(self, ball_1_3):
        """Should build one variable per vertex and color, with the origin anchored."""
        problem = build_lp_full(ball_1_3, parse_compact("[0,2|1,1]"))
        assert problem.num_colors == 2
        assert problem.num_vars == 14
        # one partition constraint per vertex, one count constraint per vertex and column
        assert len(problem.constraints) == 7 + 7 * 2
        assert problem.anchors == ((0, 1),)
        assert problem.mode == Mode.FULL
        assert problem.slack_color is None

    def test_boundary_constraints_are_inequalities(self, ball_1_3):
        """Interior vertices get equalities, boundary vertices upper bounds."""
        problem = build_lp_full(ball_1_3, parse_compact("[0,2|1,1]"))
        relations = {c.label: c.relation for c in problem.constraints}
        assert relations["count v=0 color=0"] == Relation.EQ
        # vertices 5 and 6 are -3 and 3, on the boundary
        assert relations["count v=5 color=1"] == Relation.LE

    def test_partial_problem_slack(self, ball_3_3):
        """EQ empties the slack color, GT forces it, GE leaves it free."""
        partial = parse_partial("[0,6|1,0|0,5]")
        eq = build_lp_partial(ball_3_3, partial, Mode.EQ)
        gt = build_lp_partial(ball_3_3, partial, "gt")
        ge = build_lp_partial(ball_3_3, partial, Mode.GE)
        assert eq.num_colors == 4
        assert eq.slack_color == 3
        assert eq.constraints[-1].label == "slack F empty"
        assert gt.constraints[-1].relation == Relation.GE
        assert gt.constraints[-1].bound == 1
        assert len(ge.constraints) == len(eq.constraints) - 1

    def test_var_map(self, ball_1_3):
        """Should map every (vertex, color) pair to a distinct index."""
        problem = build_lp_partial(ball_1_3, parse_partial("[0|1]", valency=2), Mode.GE)
        mapping = problem.var_map()
        assert len(mapping) == problem.num_vars == 21
        assert mapping[(0, 0)] == 0
        assert mapping[(2, problem.slack_color)] == 8
        assert sorted(mapping.values()) == list(range(21))

    def test_partial_rejects_full_mode(self, ball_3_3):
        with pytest.raises(InvalidArgument):
            build_lp_partial(ball_3_3, parse_partial("[0,6|1,0|0,5]"), Mode.FULL)

    def test_valency_must_match_grid(self, ball_2_3):
        """A G_3 matrix cannot be posed on a G_2 ball."""
        with pytest.raises(InconsistentMatrix):
            build_lp_full(ball_2_3, parse_compact("[0,6|1,5]"))

    def test_describe(self, ball_1_3):
        text = build_lp_full(ball_1_3, parse_compact("[0,2|1,1]")).describe()
        assert text.startswith("full [0,2|1,1] n=1 R=3")


class TestKnownCodes:
    """Colorings of real codes satisfy the problems built from their matrices."""

    def test_perfect_code_coloring(self, ball_3_3):
        """Should accept the perfect code and decode back to its labels."""
        problem = build_lp_full(ball_3_3, parse_compact("[0,6|1,5]"))
        labels = coloring_on_ball(golomb_welch_perfect(3), ball_3_3)
        assignment = encode_coloring(problem, labels)
        assert verify_assignment(problem, assignment)
        assert decode_assignment(problem, assignment).tolist() == labels.tolist()

    def test_distance_code_in_partial_modes(self, ball_3_3):
        """The distance code has vertices beyond rho=2, so only LP_> and LP_>= hold."""
        partial = parse_partial("[0,6|1,0|0,2]")
        labels = coloring_on_ball(distance_code(3), ball_3_3)
        for mode, expected in ((Mode.GE, True), (Mode.GT, True), (Mode.EQ, False)):
            problem = build_lp_partial(ball_3_3, partial, mode)
            assert verify_assignment(problem, encode_coloring(problem, labels)) is expected, mode

    def test_wrong_matrix_is_rejected(self, ball_3_3):
        """The perfect code does not satisfy [0,6|2,4]."""
        problem = build_lp_full(ball_3_3, parse_compact("[0,6|2,4]"))
        labels = coloring_on_ball(golomb_welch_perfect(3), ball_3_3)
        assert not verify_assignment(problem, encode_coloring(problem, labels))

    def test_encode_checks_length(self, ball_1_3):
        problem = build_lp_full(ball_1_3, parse_compact("[0,2|1,1]"))
        with pytest.raises(InvalidArgument):
            encode_coloring(problem, [0, 1])


RESTRICTION_CASES = [
    (Mode.FULL, 1, "[0,2|1,1]", 3),
    (Mode.FULL, 1, "[0,2|2,0]", 3),
    (Mode.FULL, 1, "[0,2|1,0,1|2,0]", 4),
    (Mode.FULL, 1, "[0,2|1,0,1|1,1]", 4),
    (Mode.FULL, 2, "[0,4|1,3]", 3),
    (Mode.FULL, 2, "[0,4|2,2]", 3),
    (Mode.FULL, 2, "[0,4|4,0]", 3),
    (Mode.FULL, 2, "[0,4|1,0,3|4,0]", 3),
    (Mode.FULL, 2, "[0,4|1,0,3|3,0,1|4,0]", 3),
    (Mode.FULL, 3, "[0,6|1,5]", 2),
    (Mode.FULL, 3, "[0,6|6,0]", 2),
    (Mode.EQ, 1, "[0|1]", 3),
    (Mode.EQ, 1, "[0|2]", 3),
    (Mode.EQ, 2, "[0|1]", 3),
    (Mode.EQ, 2, "[0|2]", 3),
    (Mode.EQ, 3, "[0|1]", 2),
    (Mode.GE, 2, "[0,4|1,0|0,3]", 3),
    (Mode.GE, 2, "[0,4|1,0|0,2]", 3),
    (Mode.GE, 3, "[0,6|1,0|0,2]", 3),
    (Mode.GE, 3, "[0,6|1,1|0,2]", 2),
]


def _problem(mode, n, text, radius):
    ball = ball_graph(n, radius)
    if mode == Mode.FULL:
        return build_lp_full(ball, parse_compact(text))
    return build_lp_partial(ball, parse_partial(text, valency=2 * n), mode)


class TestRestriction:
    """Feasibility on a ball implies feasibility on every smaller ball."""

    @pytest.mark.parametrize("mode,n,text,radius", RESTRICTION_CASES)
    def test_restriction_one_step(self, mode, n, text, radius, small_budget):
        """A solution at R+1 restricted to the ball of radius R satisfies the smaller problem."""
        big = _problem(mode, n, text, radius + 1)
        result = solve(big, small_budget)
        assert result.feasible
        small = _problem(mode, n, text, radius)
        assert verify_assignment(small, restrict_assignment(big, result.assignment, small))

    def test_partial_restriction(self, ball_2_3, small_budget):
        """Restriction holds across several radii at once."""
        partial = parse_partial("[0,4|1,0|0,3]")
        big = build_lp_partial(ball_graph(2, 5), partial, Mode.GE)
        result = solve(big, small_budget)
        assert result.feasible
        small = build_lp_partial(ball_2_3, partial, Mode.GE)
        assert verify_assignment(small, restrict_assignment(big, result.assignment, small))

    def test_restriction_needs_same_colors(self, ball_2_3):
        """Problems with different color counts cannot be compared."""
        big = build_lp_full(ball_graph(2, 4), parse_compact("[0,4|1,3]"))
        small = build_lp_full(ball_2_3, parse_compact("[0,4|1,0,3|4,0]"))
        with pytest.raises(InvalidArgument):
            restrict_assignment(big, Assignment((0,) * big.num_vars), small)
