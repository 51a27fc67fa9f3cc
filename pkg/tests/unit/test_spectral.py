"""Tests for local-spectral expansion, pseudorandomness and approximate eigenvalues."""
import pytest

from app.hdx.complex import FaceFunction, build_from_top_faces
from app.hdx.errors import LevelError
from app.hdx.expansion import gamma_of, gamma_or_zero, link_graph, measure_gamma
from app.hdx.generators import generate_complete_complex, link_indicator
from app.hdx.operators import canonical_walk, noise_operator
from app.hdx.pseudorandom import link_statistics, pseudorandomness, pseudorandomness_profile
from app.hdx.spectral import approximate_eigenvalues, link_expansion_profile, projection_masses, st_rank


class TestGamma:

    @pytest.mark.smoke
    def test_triangle(self, k3):
        assert gamma_of(k3) == pytest.approx(0.5)

    @pytest.mark.parametrize("n", [4, 5, 6, 8])
    def test_complete_two_dimensional(self, n):
        assert gamma_of(generate_complete_complex(n, 2)) == pytest.approx(1 / (n - 1))

    @pytest.mark.parametrize("n", [5, 6, 7, 9])
    def test_complete_three_dimensional(self, n):
        assert gamma_of(generate_complete_complex(n, 3)) == pytest.approx(1 / (n - 2))

    def test_link_table_covers_levels_below_d_minus_one(self, complete_7_3):
        profile = measure_gamma(complete_7_3)
        assert len(profile.links) == 1 + 7
        assert profile.disconnected == []

    def test_disconnected_link_has_no_expansion(self):
        X = build_from_top_faces([((0, 1), 1.0), ((2, 3), 1.0)], 2)
        profile = measure_gamma(X)
        assert profile.gamma == 1.0
        assert profile.disconnected == [()]

    def test_needs_dimension_two(self):
        X = generate_complete_complex(4, 1)
        with pytest.raises(LevelError):
            measure_gamma(X)
        assert gamma_or_zero(X) == 0.0

    def test_link_graph_weights(self, k3):
        graph = link_graph(k3)
        assert sorted(graph.nodes) == [0, 1, 2]
        assert graph[0][1]["weight"] == pytest.approx(1 / 3)


class TestPseudorandomness:

    def test_vertex_indicator_at_the_empty_link(self, vertex_indicator):
        report = pseudorandomness(vertex_indicator, 0)
        assert report.epsilon_mean == pytest.approx(1 / 3)
        assert report.epsilon_sq == pytest.approx(1 / 3)
        assert report.epsilon == pytest.approx(1 / 3)

    def test_level_must_be_below_k(self, vertex_indicator):
        with pytest.raises(LevelError):
            pseudorandomness(vertex_indicator, 1)
        assert link_statistics(vertex_indicator, 1).epsilon == pytest.approx(1.0)

    def test_link_indicator_is_not_pseudorandom_at_its_anchor(self, complete_6_2):
        report = pseudorandomness(link_indicator(complete_6_2, 2, (0,)), 1)
        assert report.epsilon == pytest.approx(1.0)
        assert report.witness == (0,)

    def test_zero_function(self, k3):
        report = pseudorandomness(FaceFunction.constant(k3, 2, 0.0), 1)
        assert report.epsilon == 0.0

    def test_profile_is_monotone(self, random_function):
        profile = pseudorandomness_profile(random_function)
        assert [r.level for r in profile] == [0, 1]
        assert profile[0].epsilon_mean <= profile[1].epsilon_mean + 1e-12


class TestApproximateEigenvalues:

    @pytest.fixture(scope="class")
    def complete_10_2(self):
        return generate_complete_complex(10, 2)

    def test_noise_operator_strips(self, complete_10_2):
        profile = approximate_eigenvalues(complete_10_2, noise_operator(2, 0.5))
        for center, expected in zip(profile.centers(), (1.0, 0.5, 0.25)):
            assert abs(center - expected) <= 0.1
        assert [strip.count for strip in profile.strips] == [1, 9, 35]
        assert profile.ambiguous == 0
        assert profile.gamma == pytest.approx(1 / 9)

    def test_strips_on_the_complete_complex_are_exact(self, complete_10_2):
        profile = approximate_eigenvalues(complete_10_2, noise_operator(2, 0.5))
        assert profile.center_of(1) == pytest.approx(0.25 + 0.5 * 8 / 18, abs=1e-9)
        assert profile.center_of(2) == pytest.approx(0.25, abs=1e-9)
        assert max(strip.width for strip in profile.strips) < 1e-9

    def test_st_rank(self, complete_10_2):
        assert st_rank(complete_10_2, noise_operator(2, 0.5), 0.3) == 2
        assert st_rank(complete_10_2, noise_operator(2, 0.5), 0.1) == 3

    def test_link_expansion_follows_strip_centers(self):
        X = generate_complete_complex(8, 3)
        profile = link_expansion_profile(X, canonical_walk(2, 1))
        assert len(profile["links"]) == 1 + 8 + 28
        assert profile["links"][0]["expansion"] == pytest.approx(0.0, abs=1e-12)
        assert profile["max_deviation"] <= 5 * gamma_of(X)

    def test_projection_masses(self, k3, vertex_indicator):
        masses = projection_masses(k3, vertex_indicator)
        assert masses == pytest.approx([1 / 3, 2 / 3], abs=1e-12)
