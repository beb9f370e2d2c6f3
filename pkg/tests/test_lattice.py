"""
Tests for grid realizations: words, caps, balls, quotients and distance partitions.
"""
import itertools

import networkx as nx
import numpy as np
import pytest

from app.core.errors import EmptyCap, EmptySeed, InvalidArgument, UnsupportedWeight
from app.grid.lattice import (
    ball_graph,
    ball_volume,
    cap,
    cap_union,
    distance,
    distance_partition,
    gray_inverse,
    gray_word,
    hamming_graph,
    interval_graph,
    layer_types,
    torus_graph,
    triangular_covering,
    triangular_torus,
    unit,
    walk_ball,
    weight,
    word_type,
)


class TestWords:
    """Tests for weights, distances and word types."""

    def test_weight_and_distance(self):
        """Weight is the l1 norm; distance is the weight of the difference."""
        assert weight((3, -1, 0)) == 4
        assert distance((1, 2, 3), (0, 0, 0)) == 6
        assert distance((1, -1), (-1, 1)) == 4

    def test_unit_vectors(self):
        """Axes are counted from 1."""
        assert unit(3, 1) == (1, 0, 0)
        assert unit(3, 3, -1) == (0, 0, -1)

    def test_word_type_sorts_absolute_values(self):
        """Types list absolute values in descending order, padded to 4 digits."""
        assert word_type((0, -1, 3)) == "3100"
        assert word_type((1, 1, -1, 1)) == "1111"
        assert word_type((0, 0)) == "0000"

    def test_word_type_rejects_heavy_words(self):
        """Types are only defined up to weight 4."""
        with pytest.raises(UnsupportedWeight):
            word_type((5, 0, 0))

    def test_layer_types(self):
        """Weight-4 layer types depend on how many coordinates are available."""
        assert layer_types(3, 2) == ["2000", "1100"]
        assert layer_types(3, 3) == ["3000", "2100", "1110"]
        assert layer_types(3, 4) == ["4000", "3100", "2200", "2110"]
        assert layer_types(4, 4) == ["4000", "3100", "2200", "2110", "1111"]


class TestCaps:
    """Tests for caps and their union."""

    def test_cap_size(self):
        """A cap has 2(n-1) words, all of type 3100."""
        words = cap(3, 1, 1)
        assert len(words) == 4
        assert all(word_type(w) == "3100" for w in words)
        assert (3, 1, 0) in words and (3, 0, -1) in words

    def test_cap_union_is_all_3100_words(self):
        """The 2n caps partition the type-3100 words."""
        n = 3
        expected = {
            w for w in itertools.product(range(-4, 5), repeat=n)
            if weight(w) == 4 and word_type(w) == "3100"
        }
        assert cap_union(n) == expected
        assert len(expected) == 2 * n * 2 * (n - 1)

    def test_cap_needs_two_dimensions(self):
        """There is nothing to cap in G_1."""
        with pytest.raises(EmptyCap):
            cap(1, 1, 1)

    def test_cap_rejects_bad_axis(self):
        with pytest.raises(InvalidArgument):
            cap(3, 4, 1)


class TestIntervalGraph:
    """Tests for metric intervals between 0 and x."""

    def test_interval_is_a_box(self):
        """I(x) is the box spanned by 0 and x."""
        graph = interval_graph((2, -1))
        assert isinstance(graph, nx.Graph)
        assert graph.number_of_nodes() == 6
        assert graph.number_of_edges() == 7
        assert (0, 0) in graph and (2, -1) in graph

    def test_interval_of_weight_two_word(self):
        """A type 1100 word spans a 4-cycle."""
        graph = interval_graph((1, 1, 0))
        assert graph.number_of_nodes() == 4
        assert nx.is_isomorphic(graph, nx.cycle_graph(4))

    @pytest.mark.parametrize("x,size", [
        ((4, 0, 0, 0), 5),
        ((3, 1, 0, 0), 8),
        ((2, 2, 0, 0), 9),
        ((2, 1, 1, 0), 12),
        ((1, 1, 1, 1), 16),
    ])
    def test_weight_four_interval_sizes(self, x, size):
        """|I(x)| is the product of |x_i|+1 over the coordinates."""
        assert interval_graph(x).number_of_nodes() == size
        assert interval_graph(tuple(-v for v in x)).number_of_nodes() == size

    def test_type_1111_is_the_four_cube(self):
        """Should be isomorphic to the hypercube Q_4."""
        graph = interval_graph((1, -1, 1, -1))
        assert nx.is_isomorphic(graph, nx.hypercube_graph(4))


class TestBallGraph:
    """Tests for ball subgraphs."""

    @pytest.mark.parametrize("n,radius", [(1, 3), (2, 4), (3, 3), (3, 6), (4, 3)])
    def test_volume_matches_closed_form_and_walk(self, n, radius):
        """Ball size agrees with the closed form and a BFS walk."""
        ball = ball_graph(n, radius)
        assert len(ball) == ball_volume(n, radius)
        assert set(ball.vertices) == walk_ball(n, radius)

    def test_radius_six_in_g3(self, ball_3_6):
        """377 vertices, of which the 231 of weight <= 5 are interior."""
        assert len(ball_3_6) == 377
        assert int(ball_3_6.interior.sum()) == 231

    def test_canonical_order(self, ball_2_3):
        """Origin first, then by weight, then lexicographically."""
        vertices = ball_2_3.vertices
        assert vertices[0] == (0, 0)
        assert vertices[1:5] == ((-1, 0), (0, -1), (0, 1), (1, 0))
        weights = [weight(v) for v in vertices]
        assert weights == sorted(weights)

    def test_interior_means_full_degree(self, ball_2_3):
        """Interior vertices have all 2n neighbors in the ball."""
        for v in range(len(ball_2_3)):
            full = ball_2_3.degree(v) == 4
            assert bool(ball_2_3.interior[v]) == full
            assert full == (weight(ball_2_3.word(v)) < 3)

    def test_networkx_export(self, ball_1_3):
        """The ball in G_1 is a path."""
        graph = ball_1_3.to_networkx()
        assert nx.is_isomorphic(graph, nx.path_graph(7))

    def test_json_export(self, ball_1_3):
        data = ball_1_3.to_json()
        assert data["kind"] == "ball"
        assert data["R"] == 3
        assert len(data["vertices"]) == len(data["adjacency"]) == 7

    def test_rejects_empty_radius(self):
        with pytest.raises(InvalidArgument):
            ball_graph(2, 0)


class TestQuotientGraphs:
    """Tests for tori, Hamming graphs and the triangular torus."""

    def test_torus_is_regular(self):
        torus = torus_graph(3, 5)
        assert len(torus) == 125
        assert torus.valency == 6
        assert all(len(set(row)) == 6 for row in torus.neighbors.tolist())

    def test_torus_per_axis_lengths(self):
        """Axes may have different lengths."""
        torus = torus_graph(2, (3, 4))
        assert len(torus) == 12
        assert torus.q == (3, 4)
        assert torus.word(torus.index_of((-1, 5))) == (2, 1)

    def test_torus_needs_length_three(self):
        """Axes of length 2 would merge the two neighbors along an axis."""
        with pytest.raises(InvalidArgument):
            torus_graph(2, 2)

    def test_torus_3_is_hamming_3(self):
        """G_{n,3} and H(n,3) are the same graph."""
        assert nx.is_isomorphic(torus_graph(3, 3).to_networkx(), hamming_graph(3, 3).to_networkx())

    def test_hamming_valency(self):
        assert hamming_graph(6, 2).valency == 6
        assert hamming_graph(3, 3).valency == 6

    def test_triangular_torus(self):
        tri = triangular_torus(7)
        assert len(tri) == 49
        assert tri.valency == 6
        assert tri.kind == "triangular-torus"

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_gray_map_is_an_isomorphism(self, n):
        """The Gray map carries torus(n,4) edges exactly onto H(2n,2) edges."""
        torus = torus_graph(n, 4)
        cube = hamming_graph(2 * n, 2)
        images = [gray_word(torus.word(v)) for v in range(len(torus))]
        assert len(set(images)) == len(torus) == len(cube)

        torus_edges = {
            frozenset((images[v], images[u])) for v in range(len(torus)) for u in torus.adjacency[v]
        }
        cube_edges = {
            frozenset((cube.word(v), cube.word(u))) for v in range(len(cube)) for u in cube.adjacency[v]
        }
        assert torus_edges == cube_edges

    def test_gray_inverse(self):
        assert gray_word((1, 3)) == (1, 0, 0, 1)
        assert gray_inverse((1, 0, 0, 1)) == (1, 3)
        with pytest.raises(InvalidArgument):
            gray_word((4,))

    def test_triangular_covering(self):
        """Moving along (1,1,1) does not move the image."""
        assert triangular_covering((1, 1, 1)) == (0, 0)
        assert triangular_covering((2, 0, -1)) == (2, -1)


class TestDistancePartition:
    """Tests for multi-source BFS labels."""

    def test_cycle_labels(self):
        torus = torus_graph(1, 6)
        labels = distance_partition(torus, [0])
        assert labels.tolist() == [0, 1, 2, 3, 2, 1]

    def test_boolean_mask_seeds(self):
        torus = torus_graph(1, 6)
        mask = np.zeros(6, dtype=bool)
        mask[[0, 3]] = True
        assert distance_partition(torus, mask).tolist() == [0, 1, 1, 0, 1, 1]

    def test_ball_labels_are_weights(self, ball_2_3):
        """From the origin, BFS depth is the weight."""
        labels = distance_partition(ball_2_3, [0])
        assert labels.tolist() == [weight(w) for w in ball_2_3.vertices]

    def test_empty_seed(self):
        with pytest.raises(EmptySeed):
            distance_partition(torus_graph(2, 3), [])
