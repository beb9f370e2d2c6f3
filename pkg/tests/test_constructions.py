"""
Tests for code constructions and the catalog.

Every construction is checked against its claimed matrix on a torus.
"""
import pytest

from app.core.errors import InvalidArgument, UnknownConstruction, UnverifiableConstruction
from app.grid.codes import verify_periodic
from app.grid.constructions import (
    BUILDERS,
    all_ones_matrix,
    binary_source,
    build,
    catalog_entries,
    diameter_lattice,
    diameter_union,
    diameter_union_matrix,
    distance_anticode_matrix,
    distance_matrix,
    even_weight_code,
    from_binary_hamming,
    from_triangular,
    golomb_welch_perfect,
    halved_perfect,
    halved_perfect_matrix,
    is_diameter_perfect,
    line_matrix,
    load_diameter_table,
    multiply,
    multiply_words,
    perfect_matrix,
    realizations,
    search_diameter_weights,
    triangular_source,
)
from app.grid.lattice import triangular_covering
from app.grid.matrix import format_compact, monotonicity_check


def _verifies(kind, **params):
    spec, code = build(kind, **params)
    verdict = verify_periodic(code, spec.claimed_matrix)
    return verdict.expected_matches


class TestClaimedMatrices:
    """Tests for the closed-form matrices of the grid families."""

    def test_small_cases(self):
        """Should print the closed forms in compact notation."""
        assert str(perfect_matrix(3)) == "[0,6|1,5]"
        assert str(halved_perfect_matrix(2)) == "[0,4|1,0,3|3,0,1|4,0]"
        assert str(distance_anticode_matrix(3)) == "[0,6|1,0,5|2,0,4|6,0]"
        assert str(all_ones_matrix(1)) == "[1,1|1,1]"
        assert str(line_matrix(5)) == "[0,2|1,0,1|1,1]"

    def test_distance_code_has_covering_radius_2n(self):
        assert distance_matrix(3).rho == 6
        assert str(distance_matrix(3)) == "[0,6|1,0,5|2,0,4|3,0,3|4,0,2|5,0,1|6,0]"

    @pytest.mark.parametrize("t", range(1, 6))
    def test_diameter_union_matrix(self, t):
        assert str(diameter_union_matrix(3, t)) == f"[0,6|{t},0,{6 - t}|6,0]"

    def test_full_union_is_even_weight(self):
        assert str(diameter_union_matrix(3, 6)) == "[0,6|6,0]"


class TestGridFamilies:
    """Every family verifies to its claimed matrix in G_1..G_4."""

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    @pytest.mark.parametrize("kind", [
        "perfect", "halved-perfect", "distance", "distance-anticode", "all-ones", "even-weight",
    ])
    def test_family(self, kind, n):
        """Should verify to the claimed matrix on an inflated torus."""
        assert _verifies(kind, n=n)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_diameter_unions(self, n):
        """Unions of 1..2n-1 cosets all verify."""
        for t in range(1, 2 * n):
            assert _verifies("diameter-union", n=n, t=t), f"t={t}"

    @pytest.mark.parametrize("p", [2, 3, 4, 5, 6])
    def test_line_codes(self, p):
        assert _verifies("line", p=p)

    def test_diameter_union_coset_limit(self):
        """t must lie in 1..2n and the table only goes that far."""
        with pytest.raises(UnverifiableConstruction):
            diameter_union(2, 5)
        with pytest.raises(InvalidArgument):
            diameter_union(2, 0)

    def test_even_weight_union(self):
        """All 2n even cosets together form the even-weight code."""
        assert set(diameter_union(2, 4).lift((8, 8)).residues) == set(even_weight_code(2).lift((8, 8)).residues)


class TestDiameterLattices:
    """Tests for the versioned lattice table and its search."""

    def test_table(self):
        """The shipped table covers G_1..G_4."""
        table = load_diameter_table()
        assert table[2] == (8, (1, 3))
        assert sorted(table) == [1, 2, 3, 4]

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_table_entries_are_diameter_perfect(self, n):
        assert is_diameter_perfect(diameter_lattice(n))

    def test_search_reproduces_table(self):
        """Should find the tabulated weights by search."""
        table = load_diameter_table()
        assert search_diameter_weights(2) == table[2][1]
        assert search_diameter_weights(3) == table[3][1]

    def test_perfect_code_is_not_diameter_perfect(self):
        spec, code = build("perfect", n=2)
        assert not is_diameter_perfect(code)


class TestMultiply:
    """Tests for the block-sum construction."""

    def test_line_code_times_three(self):
        """3Z in G_1 multiplied by 3 is a rho=1 code of G_3."""
        spec, code = build("multiply", k=3, source="g1-perfect")
        assert format_compact(spec.claimed_matrix) == "[0,6|3,3]"
        assert code.periods == (3, 3, 3)
        assert verify_periodic(code, spec.claimed_matrix).expected_matches

    @pytest.mark.parametrize("p", [4, 5])
    def test_other_line_periods(self, p):
        assert _verifies("multiply", k=3, source=f"g1-period-{p}")

    def test_multiply_by_one(self):
        spec, code = build("perfect", n=2)
        assert multiply(code, 1) is code

    def test_nested_source(self):
        """Multiplying a G_2 perfect code gives a G_4 code with a doubled matrix."""
        spec, code = build("multiply", k=2, source="perfect", n=2)
        assert code.n == 4
        assert format_compact(spec.claimed_matrix) == "[0,8|2,6]"

    def test_hamming_block_sum(self):
        """Each block of a multiplied binary word has even weight."""
        words = multiply_words({(0, 0, 0)}, 2, 2)
        assert len(words) == 8
        assert all(sum(w[i:i + 2]) % 2 == 0 for w in words for i in (0, 2, 4))


class TestLifts:
    """Tests for codes lifted from Hamming graphs and the triangular grid."""

    def test_ternary_singleton(self):
        """The singleton of H(3,3) lifts to the a1=1 code."""
        spec, code = build("ternary", n=3, source="singleton")
        assert format_compact(spec.claimed_matrix) == "[0,6|1,1,4|2,2,2|3,3]"
        assert verify_periodic(code, spec.claimed_matrix).expected_matches

    def test_ternary_repetition(self):
        spec, _ = build("ternary", n=3, source="repetition")
        assert format_compact(spec.claimed_matrix) == "[0,6|1,3,2|6,0]"
        assert _verifies("ternary", n=3, source="repetition")

    def test_binary_antipodal_pair(self):
        spec, code = build("binary", n=3, source="antipodal-pair")
        assert format_compact(spec.claimed_matrix) == "[0,6|1,0,5|2,0,4|6,0]"
        assert verify_periodic(code, spec.claimed_matrix).expected_matches

    @pytest.mark.parametrize("source,expected", [
        ("shortened-perfect", "[0,6|1,4,1|6,0]"),
        ("doubled-repetition", "[0,6|2,4]"),
        ("doubled-singleton", "[0,6|2,0,4|4,0,2|6,0]"),
    ])
    def test_binary_sources(self, source, expected):
        """Should lift each named binary source to its listed matrix."""
        spec, code = build("binary", n=3, source=source)
        assert format_compact(spec.claimed_matrix) == expected
        assert verify_periodic(code, spec.claimed_matrix).expected_matches

    def test_binary_needs_proper_subset(self):
        """The whole Hamming graph has covering radius 0."""
        everything = [tuple((v >> i) & 1 for i in range(2)) for v in range(4)]
        with pytest.raises(InvalidArgument):
            from_binary_hamming(1, everything)

    def test_unknown_binary_source(self):
        with pytest.raises(UnknownConstruction):
            binary_source("shortened-perfect", 2)

    def test_triangular_perfect_code(self):
        spec, code = build("triangular")
        assert format_compact(spec.claimed_matrix) == "[0,6|1,5]"
        assert verify_periodic(code, spec.claimed_matrix).expected_matches

    def test_triangular_preimage(self):
        """Membership follows the covering map to the triangular torus."""
        q, points = triangular_source("perfect")
        code = from_triangular(q, points)
        for x in [(0, 0, 0), (1, 1, 1), (2, 0, 1), (3, 1, 4)]:
            assert code.contains(x) == (tuple(c % q for c in triangular_covering(x)) in points)

    def test_quotient_from_words(self):
        """Words do not appear in the identifier."""
        spec, code = build("quotient", n=1, q=4, words=[(0,)])
        assert format_compact(spec.claimed_matrix) == "[0,2|1,0,1|2,0]"
        assert ("words", [(0,)]) not in spec.parameters

    def test_quotient_rejects_irregular_source(self):
        """Should refuse words that are not a CRC of the quotient."""
        with pytest.raises(UnverifiableConstruction):
            build("quotient", n=2, q=5, words=[(0, 0), (1, 0)])


class TestCatalog:
    """Tests for the catalog addressable by kind and parameters."""

    def test_unknown_kind(self):
        with pytest.raises(UnknownConstruction):
            build("nope", n=3)

    def test_missing_n(self):
        with pytest.raises(InvalidArgument):
            build("perfect")

    def test_identifier(self):
        """Identifiers list parameters in sorted order."""
        spec, _ = build("diameter-union", n=3, t=2)
        assert spec.identifier == "diameter-union(n=3,t=2)"

    def test_entries_use_known_kinds(self):
        for n in (1, 2, 3, 4):
            assert all(kind in BUILDERS for kind, _ in catalog_entries(n))

    def test_g3_catalog_verifies(self):
        """Every catalog construction for G_3 verifies to its claimed matrix."""
        specs = realizations(3)
        assert len(specs) == len(catalog_entries(3))
        for spec in specs:
            _, code = build(spec.kind, **dict(spec.parameters))
            assert verify_periodic(code, spec.claimed_matrix).expected_matches, spec.identifier

    def test_g3_catalog_covers_listed_parameters(self):
        claimed = {format_compact(spec.claimed_matrix) for spec in realizations(3)}
        for text in [
            "[0,6|1,5]", "[0,6|2,4]", "[0,6|3,3]", "[0,6|6,0]",
            "[0,6|1,3,2|6,0]", "[0,6|1,4,1|6,0]", "[0,6|1,0,5|6,0]", "[0,6|2,0,4|6,0]",
            "[0,6|3,0,3|3,3]", "[0,6|3,0,3|6,0]", "[0,6|2,0,4|4,0,2|6,0]",
            "[0,6|1,0,5|2,0,4|6,0]", "[0,6|1,0,5|5,0,1|6,0]", "[0,6|1,1,4|2,2,2|3,3]",
            "[0,6|1,0,5|2,0,4|3,0,3|4,0,2|5,0,1|6,0]",
        ]:
            assert text in claimed, text


class TestHalvedPerfect:
    """The halved perfect code against its source."""

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_even_weight_half_of_the_perfect_code(self, n):
        """Residues are the even-weight words of the perfect code on the same box."""
        halved = halved_perfect(n)
        assert halved.periods == (2 * (2 * n + 1),) * n
        perfect = golomb_welch_perfect(n).lift(halved.periods)
        even = {r for r in perfect.residues if sum(r) % 2 == 0}
        assert set(halved.residues) == even
        assert halved.size * 2 == perfect.size

    def test_triangular_torus_point(self):
        """One point of the 4x4 triangular torus lifts to a rho=2 code of G_3."""
        spec, code = build("triangular", q=4, words=[(0, 0)])
        assert spec.identifier == "triangular(q=4)"
        assert format_compact(spec.claimed_matrix) == "[0,6|1,2,3|2,4]"
        assert verify_periodic(code, spec.claimed_matrix).expected_matches


class TestMonotonicity:
    """c never decreases and b never increases along a realized matrix."""

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_catalog_matrices(self, n):
        for spec in realizations(n):
            _, code = build(spec.kind, **dict(spec.parameters))
            verdict = verify_periodic(code)
            assert verdict.is_crc, spec.identifier
            assert monotonicity_check(verdict.matrix), spec.identifier
            assert monotonicity_check(spec.claimed_matrix), spec.identifier
