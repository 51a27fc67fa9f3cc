"""Tests for up/down operators, walks, swap walks and the hypercube embedding."""
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.hdx.complex import FaceFunction, inner_product
from app.hdx.errors import ConfigurationError, InfeasibleParametersError, LevelError, WalkValidationError
from app.hdx.generators import (
    dictator,
    generate_complete_complex,
    generate_hypercube_complex,
    make_rng,
    random_weighted_complex,
)
from app.hdx.operators import (
    WalkSpec,
    assemble_walk,
    canonical_walk,
    classical_noise_kernel,
    compose_down,
    compose_up,
    ddfh_residual,
    down,
    down_map,
    edge_expansion,
    export_matrix,
    garland_check_localize,
    garland_check_restrict,
    influence,
    lazy_hypercube_walk,
    localization_residual,
    lower_walk,
    noise_operator,
    nonlazy_hypercube_walk,
    read_matrix,
    stability,
    swap_walk,
    swap_walk_second_singular_value,
    up,
    up_map,
)

seeds = st.integers(min_value=0, max_value=100_000)


def random_function(X, level, seed):
    return FaceFunction(X, level, make_rng(seed).standard_normal(X.size(level)))


class TestSingleSteps:

    @settings(max_examples=25, deadline=None)
    @given(seed=seeds)
    def test_up_and_down_are_adjoint(self, seed):
        X = random_weighted_complex(7, 3, 15, seed)
        for k in range(X.dimension):
            f, g = random_function(X, k, seed + 1), random_function(X, k + 1, seed + 2)
            assert inner_product(up(f), g) == pytest.approx(inner_product(f, down(g)), abs=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(seed=seeds)
    def test_up_and_down_are_contractions(self, seed):
        X = random_weighted_complex(7, 3, 15, seed)
        f = random_function(X, 2, seed)
        assert up(f).norm(2) <= f.norm(2) + 1e-12
        assert down(f).norm(2) <= f.norm(2) + 1e-12

    def test_rows_are_stochastic(self, complete_7_3):
        for k in range(3):
            np.testing.assert_allclose(up_map(complete_7_3, k).dense().sum(axis=1), 1.0, atol=1e-12)
            np.testing.assert_allclose(down_map(complete_7_3, k + 1).dense().sum(axis=1), 1.0, atol=1e-12)

    def test_down_preserves_expectation(self, complete_7_3, rng):
        f = FaceFunction(complete_7_3, 3, rng.random(complete_7_3.size(3)))
        assert compose_down(complete_7_3, 3, 0).apply(f).values[0] == pytest.approx(f.mean())

    def test_compositions_check_levels(self, k3):
        with pytest.raises(LevelError):
            compose_up(k3, 2, 1)
        with pytest.raises(LevelError):
            up_map(k3, 2)


class TestWalks:

    @settings(max_examples=50, deadline=None)
    @given(k=st.integers(min_value=0, max_value=8), rho=st.floats(min_value=0.0, max_value=1.0))
    def test_noise_coefficients_sum_to_one(self, k, rho):
        assert sum(alpha for alpha, _ in noise_operator(k, rho).terms) == pytest.approx(1.0, abs=1e-12)

    def test_noise_rate_outside_unit_interval(self):
        with pytest.raises(InfeasibleParametersError):
            noise_operator(2, 1.5)

    @pytest.mark.parametrize("word", ["UU", "DD", "XU", "DUD"])
    def test_words_must_return_to_their_level(self, word):
        with pytest.raises(InfeasibleParametersError):
            WalkSpec(2, ((1.0, word),))

    def test_canonical_walk_word_lifts_first(self):
        assert canonical_walk(2, 1).terms == ((1.0, "DU"),)
        assert lower_walk(2).terms == ((1.0, "UD"),)

    def test_assembled_walks_are_stochastic_and_self_adjoint(self, complete_7_3):
        for spec in (canonical_walk(2, 1), lower_walk(2), noise_operator(2, 0.3)):
            M = assemble_walk(complete_7_3, spec).dense()
            pi = complete_7_3.measure(2)
            np.testing.assert_allclose(M.sum(axis=1), 1.0, atol=1e-12)
            np.testing.assert_allclose(pi[:, None] * M, (pi[:, None] * M).T, atol=1e-12)

    def test_non_stochastic_combination_rejected(self, k3):
        with pytest.raises(WalkValidationError):
            assemble_walk(k3, WalkSpec(1, ((0.5, ""),)))

    def test_nonlazy_walk_needs_the_hypercube(self, k3, hypercube_3):
        with pytest.raises(WalkValidationError):
            assemble_walk(k3, nonlazy_hypercube_walk(1))
        M = assemble_walk(hypercube_3, nonlazy_hypercube_walk(3)).dense()
        np.testing.assert_allclose(np.diag(M), 0.0, atol=1e-12)

    def test_stability_of_vertex_indicator(self, vertex_indicator):
        assert stability(vertex_indicator, 0.5) == pytest.approx(2 / 9, abs=1e-12)

    def test_edge_expansion_of_vertex(self, vertex_indicator):
        assert edge_expansion(vertex_indicator, lower_walk(1)) == pytest.approx(2 / 3, abs=1e-12)

    def test_edge_expansion_needs_a_nonempty_set(self, k3):
        with pytest.raises(InfeasibleParametersError):
            edge_expansion(FaceFunction.constant(k3, 1, 0.0), lower_walk(1))


class TestInfluence:

    @settings(max_examples=20, deadline=None)
    @given(seed=seeds)
    def test_influence_between_zero_and_k_variance(self, seed):
        X = random_weighted_complex(7, 3, 15, seed)
        f = random_function(X, 3, seed)
        total = influence(f)
        assert total >= -1e-12
        assert total <= 3 * f.variance() + 1e-12

    def test_dictator_influence_equals_variance(self, hypercube_3):
        f = dictator(hypercube_3, 1)
        assert influence(f) == pytest.approx(0.25, abs=1e-12)
        assert f.variance() == pytest.approx(0.25, abs=1e-12)


class TestSwapWalks:

    def test_triangle(self, k3):
        assert swap_walk_second_singular_value(k3, 1, 1) == pytest.approx(0.5, abs=1e-9)
        np.testing.assert_allclose(swap_walk(k3, 1, 1).dense(), (np.ones((3, 3)) - np.eye(3)) / 2)

    def test_complete_complex(self):
        X = generate_complete_complex(6, 2)
        assert swap_walk_second_singular_value(X, 1, 1) == pytest.approx(1 / 5, abs=1e-9)

    def test_rows_are_stochastic(self, complete_7_3):
        np.testing.assert_allclose(swap_walk(complete_7_3, 1, 2).dense().sum(axis=1), 1.0, atol=1e-12)

    def test_levels_must_fit(self, k3):
        with pytest.raises(LevelError):
            swap_walk(k3, 2, 1)


class TestIdentities:

    @settings(max_examples=15, deadline=None)
    @given(seed=seeds)
    def test_garland_identities(self, seed):
        X = random_weighted_complex(7, 3, 15, seed)
        f = random_function(X, 2, seed)
        for i in range(3):
            lhs, rhs = garland_check_restrict(f, i)
            assert lhs == pytest.approx(rhs, abs=1e-12)
        for i in range(2):
            lhs, rhs = garland_check_localize(f, i)
            assert lhs == pytest.approx(rhs, abs=1e-12)

    @settings(max_examples=15, deadline=None)
    @given(seed=seeds)
    def test_localization_identity(self, seed):
        X = random_weighted_complex(7, 3, 15, seed)
        f = random_function(X, 1, seed)
        for tau in X.faces(1) + X.faces(2):
            assert localization_residual(f, tau) < 1e-9

    def test_commutation_residual_vanishes_on_the_diagonal(self, complete_7_3):
        for i in range(1, 4):
            _, norm = ddfh_residual(complete_7_3, i, i)
            assert norm < 1e-12

    def test_commutation_residual_needs_j_at_most_i(self, complete_7_3):
        with pytest.raises(LevelError):
            ddfh_residual(complete_7_3, 1, 2)


class TestHypercube:

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_noise_operator_is_the_classical_kernel(self, n):
        X = generate_hypercube_complex(n)
        for rho in (0.0, 0.3, 0.5, 0.9):
            np.testing.assert_allclose(assemble_walk(X, noise_operator(n, rho)).dense(),
                                       classical_noise_kernel(X, rho), atol=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_lower_walk_is_the_lazy_walk(self, n):
        X = generate_hypercube_complex(n)
        np.testing.assert_allclose(assemble_walk(X, lower_walk(n)).dense(), lazy_hypercube_walk(X), atol=1e-12)


class TestExport:

    def test_matrix_text_format(self, k3):
        buffer = io.StringIO()
        export_matrix(up_map(k3, 1), buffer)
        lines = buffer.getvalue().splitlines()
        assert lines[0] == "1 2 3 3 6"
        restored = read_matrix(io.StringIO(buffer.getvalue()), k3)
        np.testing.assert_allclose(restored.dense(), up_map(k3, 1).dense())
        assert math.isclose(float(lines[1].split()[2]), 0.5)

    @pytest.mark.parametrize("text", ["", "1 2 3\n", "1 2 3 3 2\n0 0 0.5\n", "1 2 3 3 1\n0 x 0.5\n"])
    def test_malformed_matrix_file(self, k3, text):
        with pytest.raises(ConfigurationError) as excinfo:
            read_matrix(io.StringIO(text), k3)
        assert excinfo.value.exit_code == 2
