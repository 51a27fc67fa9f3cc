"""Tests for the theorem checks and sweep aggregation."""
import pytest

from app.hdx.complex import FaceFunction
from app.hdx.errors import InfeasibleParametersError
from app.hdx.generators import generate_complete_complex, link_indicator, random_sparse_function
from app.hdx.models import TheoremVerdict, VerdictStatus
from app.hdx.operators import canonical_walk
from app.hdx.theorems import (
    aggregate_sweep,
    check_adjointness,
    check_bottom_up,
    check_bourgain,
    check_ddfh,
    check_expansion_theorem,
    check_g_restriction,
    check_garland,
    check_hypercontractivity,
    check_hypercube,
    check_influence_bounds,
    check_level_i,
    check_link_expansion,
    check_localization,
    check_localization_corollary,
    check_noise_hypercontractivity,
    check_noise_sensitivity,
    check_norm_relations,
    check_pseudorandom_monotone,
    check_swap_walk,
    noise_sensitivity_level,
)


@pytest.fixture(scope="module")
def complete_8_3():
    return generate_complete_complex(8, 3)


@pytest.fixture(scope="module")
def sparse_on_complete_10_3():
    X = generate_complete_complex(10, 3)
    return random_sparse_function(X, 3, 0.1, seed=1)


class TestMainStatements:

    @pytest.mark.smoke
    def test_level_i_on_vertex_indicator(self, vertex_indicator):
        verdict = check_level_i(vertex_indicator, 1)
        assert verdict.status == VerdictStatus.PASS
        assert verdict.lhs == pytest.approx(2 / 9)
        assert verdict.fitted_constants["ratio"] == pytest.approx(2 / 3)

    def test_level_i_fails_against_a_too_small_constant(self, vertex_indicator):
        verdict = check_level_i(vertex_indicator, 1, constant=0.0)
        assert verdict.status == VerdictStatus.FAIL
        assert verdict.passed is False

    def test_level_i_needs_boolean_input(self, random_function):
        with pytest.raises(InfeasibleParametersError):
            check_level_i(random_function, 1)

    def test_hypercontractivity_on_sparse_function(self, sparse_on_complete_10_3):
        verdict = check_hypercontractivity(sparse_on_complete_10_3, 1)
        assert verdict.status == VerdictStatus.PASS
        assert verdict.params["epsilon"] < 1.0
        assert verdict.fitted_constants["recorded"] == pytest.approx(verdict.fitted_constants["ratio"])

    def test_hypercontractivity_not_applicable_without_pseudorandomness(self, vertex_indicator):
        verdict = check_hypercontractivity(vertex_indicator, 1)
        assert verdict.status == VerdictStatus.NOT_APPLICABLE
        assert not verdict.status.counts_toward_exit

    def test_bourgain_finds_the_dense_link(self, complete_8_3):
        f = link_indicator(complete_8_3, 3, (0,))
        verdict = check_bourgain(f, 2.0)
        assert verdict.status == VerdictStatus.PASS
        assert verdict.witnesses == {"level": 1, "face": [0], "density": pytest.approx(1.0)}
        assert verdict.rhs_terms["influence"] / f.variance() == pytest.approx(4 / 3)

    def test_bourgain_hypothesis_not_met(self, complete_8_3):
        verdict = check_bourgain(link_indicator(complete_8_3, 3, (0,)), 1.0)
        assert verdict.status == VerdictStatus.HYPOTHESIS_NOT_MET

    def test_expansion_witness_for_a_link_set(self, complete_8_3):
        S = link_indicator(complete_8_3, 2, (0,))
        verdict = check_expansion_theorem(S, canonical_walk(2, 1), 0.5)
        assert verdict.params["st_rank"] == 2
        assert verdict.status == VerdictStatus.CONSISTENT_WITNESS
        assert verdict.witnesses["link"] == [0]

    def test_expansion_rejects_bad_delta(self, complete_8_3):
        with pytest.raises(InfeasibleParametersError):
            check_expansion_theorem(link_indicator(complete_8_3, 2, (0,)), canonical_walk(2, 1), 1.0)

    def test_noise_sensitivity_level(self):
        assert noise_sensitivity_level(0.5, 0.0) == 2.0
        assert noise_sensitivity_level(0.5, 0.5) == pytest.approx(4.0)

    def test_noise_sensitivity_needs_rho_below_one(self, vertex_indicator):
        with pytest.raises(InfeasibleParametersError):
            check_noise_sensitivity(vertex_indicator, 1.0, 0.5)

    def test_noise_sensitivity_of_zero(self, k3):
        verdict = check_noise_sensitivity(FaceFunction.constant(k3, 2, 0.0), 0.5, 0.5)
        assert verdict.lhs == 0.0
        assert verdict.rhs_terms["stability"] == 0.0
        assert verdict.status == VerdictStatus.NOT_APPLICABLE

    def test_noise_sensitivity_at_rho_zero_is_the_density(self, sparse_on_complete_10_3):
        verdict = check_noise_sensitivity(sparse_on_complete_10_3, 0.0, 0.5, c=0.0)
        assert verdict.params["r"] == 2.0
        assert verdict.lhs == pytest.approx(sparse_on_complete_10_3.mean())
        assert verdict.lhs == pytest.approx(0.1)
        assert verdict.status == VerdictStatus.PASS
        assert verdict.notes == []

    def test_noise_sensitivity_on_sparse_function(self):
        f = random_sparse_function(generate_complete_complex(14, 3), 3, 0.05, seed=3)
        verdict = check_noise_sensitivity(f, 0.5, 0.5)
        assert verdict.status in (VerdictStatus.PASS, VerdictStatus.FAIL)
        assert verdict.params["r_level"] == 3
        assert verdict.params["gamma"] == pytest.approx(1 / 12)
        assert "slack" in verdict.rhs_terms
        assert verdict.rhs_terms["slack"] >= -1e-12
        # delta = 1 at the top level: omega = log2(eps^3) / r
        assert verdict.fitted_constants["omega"] == pytest.approx(-0.75)
        assert any("degenerate" in note for note in verdict.notes)

    def test_noise_sensitivity_with_omega_checks_the_hypothesis(self):
        f = random_sparse_function(generate_complete_complex(14, 3), 3, 0.05, seed=3)
        verdict = check_noise_sensitivity(f, 0.5, 0.5, omega=0.1)
        assert verdict.status == VerdictStatus.HYPOTHESIS_NOT_MET
        assert verdict.rhs_terms["delta_threshold"] == pytest.approx(0.125 * 2 ** -0.4)

    def test_noise_hypercontractivity_on_a_constant(self, k3):
        verdict = check_noise_hypercontractivity(FaceFunction.constant(k3, 2, 1.0))
        assert verdict.status == VerdictStatus.NOT_APPLICABLE


class TestIdentities:

    def test_adjointness(self, complete_7_3):
        assert check_adjointness(complete_7_3).status == VerdictStatus.PASS

    def test_garland_and_bottom_up(self, random_function):
        assert check_garland(random_function).status == VerdictStatus.PASS
        assert check_bottom_up(random_function).status == VerdictStatus.PASS

    def test_g_restriction(self, rng):
        X = generate_complete_complex(6, 3)
        f = FaceFunction(X, 3, rng.standard_normal(X.size(3)))
        assert check_g_restriction(f).status == VerdictStatus.PASS

    def test_localization(self, rng):
        X = generate_complete_complex(6, 3)
        f = FaceFunction(X, 1, rng.standard_normal(X.size(1)))
        verdict = check_localization(f)
        assert verdict.status == VerdictStatus.PASS
        assert verdict.fitted_constants["c"] is not None

    def test_localization_corollary(self, rng):
        X = generate_complete_complex(6, 3)
        f = FaceFunction(X, 2, rng.standard_normal(X.size(2)))
        verdict = check_localization_corollary(f, (0,))
        assert verdict.theorem == "localization-corollary"
        assert verdict.status == VerdictStatus.PASS
        # vertex link is K5: swap walk second singular value 1/4, (i - l) j gamma = 1 * 1 * 1/4
        assert verdict.rhs_terms["gamma_norm"] == pytest.approx(0.25)
        assert verdict.rhs_terms["bound"] == pytest.approx(0.25)
        assert verdict.fitted_constants["c"] == pytest.approx(1.0)

    def test_ddfh(self, complete_7_3):
        verdict = check_ddfh(complete_7_3)
        assert verdict.status == VerdictStatus.PASS
        assert verdict.rhs_terms["norm_2,2"] < 1e-12

    def test_swap_walk_on_triangle(self, k3):
        verdict = check_swap_walk(k3)
        assert verdict.status == VerdictStatus.PASS
        assert verdict.lhs == pytest.approx(0.5)
        assert verdict.fitted_constants["ratio"] == pytest.approx(1.0)

    def test_influence_bounds(self, random_function):
        verdict = check_influence_bounds(random_function)
        assert verdict.status == VerdictStatus.PASS
        assert verdict.lhs <= verdict.rhs_terms["upper"] + 1e-12

    def test_hypercube(self, hypercube_3):
        assert check_hypercube(hypercube_3).status == VerdictStatus.PASS

    def test_pseudorandomness_monotone(self, sparse_on_complete_10_3):
        assert check_pseudorandom_monotone(sparse_on_complete_10_3).status == VerdictStatus.PASS

    def test_norm_relations(self, random_function):
        verdict = check_norm_relations(random_function)
        assert verdict.status == VerdictStatus.PASS
        assert "parseval" in verdict.fitted_constants

    def test_link_expansion(self, complete_8_3):
        verdict = check_link_expansion(complete_8_3, canonical_walk(2, 1), constant=5.0)
        assert verdict.status == VerdictStatus.PASS


def verdict_at(n, ratio, theorem="swap-walk", status=VerdictStatus.PASS):
    return TheoremVerdict(theorem=theorem, params={"n": n}, fitted_constants={"ratio": ratio}, status=status)


class TestSweepAggregation:

    def test_non_increasing_trend_passes(self):
        results = aggregate_sweep([verdict_at(4, 0.9), verdict_at(5, 0.8), verdict_at(6, 0.5)], "n")
        assert len(results) == 1
        assert results[0].theorem == "swap-walk/sweep"
        assert results[0].status == VerdictStatus.PASS
        assert results[0].fitted_constants["shared"] == pytest.approx(0.9)

    def test_increasing_trend_fails(self):
        results = aggregate_sweep([verdict_at(4, 0.1), verdict_at(5, 0.2), verdict_at(6, 0.3)], "n")
        assert results[0].status == VerdictStatus.FAIL
        assert results[0].lhs == pytest.approx(1.0)

    def test_constant_values_have_no_trend(self):
        results = aggregate_sweep([verdict_at(n, 1.0) for n in (4, 5, 6)], "n")
        assert results[0].status == VerdictStatus.PASS
        assert results[0].lhs == 0.0

    def test_two_points_skip_the_trend(self):
        results = aggregate_sweep([verdict_at(4, 0.1), verdict_at(5, 0.3)], "n")
        assert results[0].status == VerdictStatus.PASS
        assert results[0].notes

    def test_informational_verdicts_are_ignored(self):
        verdicts = [verdict_at(n, 1.0, status=VerdictStatus.NOT_APPLICABLE) for n in (4, 5, 6)]
        assert aggregate_sweep(verdicts, "n") == []
