"""Tests for the standard complexes and test functions."""
import math

import numpy as np
import pytest

from app.hdx.errors import InfeasibleParametersError, LevelError
from app.hdx.generators import (
    anti_tribes_tribes,
    dictator,
    generate_anti_tribes,
    generate_complete_complex,
    generate_hypercube_complex,
    hypercube_face,
    hypercube_point,
    link_indicator,
    random_real_function,
    random_sparse_function,
    random_weighted_complex,
)


class TestComplexes:

    @pytest.mark.parametrize("n, d", [(5, 2), (6, 3), (8, 4)])
    def test_complete_complex_sizes(self, n, d):
        X = generate_complete_complex(n, d)
        for level in range(d + 1):
            assert X.size(level) == math.comb(n, level)

    def test_complete_complex_rejects_d_above_n(self):
        with pytest.raises(InfeasibleParametersError):
            generate_complete_complex(3, 5)

    def test_hypercube_complex(self, hypercube_3):
        assert hypercube_3.dimension == 3
        assert hypercube_3.size(3) == 8
        assert len(hypercube_3.vertices) == 6
        np.testing.assert_allclose(hypercube_3.measure(3), [1 / 8] * 8)

    def test_hypercube_bijection(self, hypercube_3):
        for face in hypercube_3.top_faces:
            assert hypercube_face(hypercube_point(face)) == face
        assert hypercube_point(hypercube_face((1, 0, 1))) == (1, 0, 1)

    def test_random_complex_is_reproducible(self):
        a = random_weighted_complex(8, 3, 20, seed=11)
        b = random_weighted_complex(8, 3, 20, seed=11)
        assert a.uid == b.uid
        assert a.size(3) == 20

    def test_random_complex_face_budget(self):
        with pytest.raises(InfeasibleParametersError):
            random_weighted_complex(4, 2, 7, seed=1)


class TestFunctions:

    def test_sparse_function_has_exact_support(self, complete_6_2):
        f = random_sparse_function(complete_6_2, 2, 0.2, seed=5)
        assert f.is_boolean()
        assert int(f.values.sum()) == round(0.2 * 15)

    def test_sparse_function_keeps_at_least_one_face(self, complete_6_2):
        f = random_sparse_function(complete_6_2, 2, 0.001, seed=5)
        assert int(f.values.sum()) == 1

    def test_sparse_function_rejects_bad_density(self, complete_6_2):
        with pytest.raises(InfeasibleParametersError):
            random_sparse_function(complete_6_2, 2, 0.0, seed=5)

    def test_seeded_functions_are_reproducible(self, complete_6_2):
        a = random_real_function(complete_6_2, 2, seed=9)
        b = random_real_function(complete_6_2, 2, seed=9)
        np.testing.assert_array_equal(a.values, b.values)

    def test_link_indicator_density(self, complete_6_2):
        f = link_indicator(complete_6_2, 2, (0,))
        assert f.mean() == pytest.approx(1 / 3)

    def test_link_indicator_anchor_above_level(self, complete_6_2):
        with pytest.raises(LevelError):
            link_indicator(complete_6_2, 1, (0, 1))

    def test_dictator_is_balanced(self, hypercube_3):
        f = dictator(hypercube_3, 2)
        assert f.mean() == pytest.approx(0.5)
        assert f.variance() == pytest.approx(0.25)


class TestAntiTribes:

    def test_default_tribes(self):
        assert anti_tribes_tribes(10, 5, 1.0, 1.0, 1.0) == [(0, 1), (2, 3)]

    def test_tribes_that_do_not_fit(self):
        with pytest.raises(InfeasibleParametersError):
            anti_tribes_tribes(6, 3, 2.0, 1.0, 1.0)

    def test_small_instance_mean(self):
        _, f = generate_anti_tribes(6, 3, 1.0, 1.0, 1.0, tribes=[[0, 1], [2, 3]])
        assert f.mean() == pytest.approx(12 / 20)

    def test_two_tribe_instance_mean(self):
        _, f = generate_anti_tribes(10, 5, 1.0, 1.0, 1.0)
        assert f.mean() == pytest.approx(146 / 252)

    def test_overlapping_tribes_rejected(self):
        with pytest.raises(InfeasibleParametersError):
            generate_anti_tribes(6, 3, 1.0, 1.0, 1.0, tribes=[[0, 1], [1, 2]])
