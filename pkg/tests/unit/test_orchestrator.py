"""Tests for sweep expansion, config validation and in-memory runs."""
import pytest
from pydantic import ValidationError

from app.hdx.errors import ConfigurationError
from app.hdx.models import ExperimentConfig, VerdictStatus
from app.hdx.orchestrator import (
    ExperimentOrchestrator,
    build_complex,
    build_function,
    build_walk,
    config_fingerprint,
    expand_sweep,
    validate_config,
)
from test_utils import ConfigFactory, verdicts_named


class TestSweepExpansion:

    def test_no_axes_gives_one_point(self, out_dir):
        config = ConfigFactory.build(ConfigFactory.complete(), out_dir)
        points = expand_sweep(config)
        assert len(points) == 1
        assert points[0].values == {}

    def test_cartesian_product_in_declaration_order(self, out_dir):
        data = ConfigFactory.complete(sweep={"n": [4, 5], "rho": [0.1, 0.2]})
        points = expand_sweep(ConfigFactory.build(data, out_dir))
        assert [p.values for p in points] == [
            {"n": 4, "rho": 0.1}, {"n": 4, "rho": 0.2}, {"n": 5, "rho": 0.1}, {"n": 5, "rho": 0.2},
        ]
        assert points[3].config.complex.n == 5
        assert points[3].config.walk.rho == 0.2

    def test_check_parameters_are_sweepable(self, out_dir):
        data = ConfigFactory.complete(checks=[{"id": "expansion", "params": {"delta": 0.5}}],
                                      sweep={"delta": [0.2, 0.4]})
        points = expand_sweep(ConfigFactory.build(data, out_dir))
        assert [p.config.checks[0].params["delta"] for p in points] == [0.2, 0.4]

    def test_trial_axis_offsets_the_function_seed(self, out_dir):
        data = ConfigFactory.complete(function={"generator": "random-sparse", "alpha": 0.3},
                                      seed=10, sweep={"trial": [0, 1, 2]})
        points = expand_sweep(ConfigFactory.build(data, out_dir))
        assert [p.config.function.seed for p in points] == [10, 11, 12]

    def test_unroutable_axis(self, out_dir):
        data = ConfigFactory.complete(sweep={"banana": [1, 2]})
        with pytest.raises(ConfigurationError):
            expand_sweep(ConfigFactory.build(data, out_dir))

    def test_empty_axis_rejected_by_schema(self, out_dir):
        with pytest.raises(ValidationError):
            ConfigFactory.build(ConfigFactory.complete(sweep={"n": []}), out_dir)


class TestValidation:

    def test_seed_required_for_random_functions(self, out_dir):
        data = ConfigFactory.complete(function={"generator": "random-sparse"})
        with pytest.raises(ConfigurationError):
            validate_config(ConfigFactory.build(data, out_dir))
        validate_config(ConfigFactory.build({**data, "seed": 1}, out_dir))

    def test_seed_required_for_monte_carlo(self, out_dir):
        data = ConfigFactory.complete(checks=[{"id": "anti-tribes", "params": {"mode": "monte-carlo"}}])
        with pytest.raises(ConfigurationError):
            validate_config(ConfigFactory.build(data, out_dir))

    def test_checks_required(self, out_dir):
        with pytest.raises(ConfigurationError):
            validate_config(ConfigFactory.build(ConfigFactory.complete(checks=()), out_dir))

    def test_unknown_sections_rejected(self, out_dir):
        with pytest.raises(ValidationError):
            ConfigFactory.build({**ConfigFactory.complete(), "extras": {}}, out_dir)

    def test_complex_needs_its_parameters(self):
        with pytest.raises(ValidationError):
            ExperimentConfig.model_validate({"complex": {"generator": "complete", "n": 5}})

    def test_fingerprint_ignores_output_dir(self, tmp_path):
        data = ConfigFactory.complete()
        a = ConfigFactory.build(data, tmp_path / "a")
        b = ConfigFactory.build(data, tmp_path / "b")
        c = ConfigFactory.build(ConfigFactory.complete(n=6), tmp_path / "a")
        assert config_fingerprint(a) == config_fingerprint(b)
        assert config_fingerprint(a) != config_fingerprint(c)


class TestBuilders:

    def test_function_defaults_to_top_level(self, out_dir):
        config = ConfigFactory.build(ConfigFactory.complete(function={"generator": "constant"}), out_dir)
        f = build_function(config, build_complex(config))
        assert f.level == 2
        assert build_walk(config, f).terms == ((1.0, "DU"),)

    def test_monte_carlo_anti_tribes_has_no_complex(self, out_dir):
        data = {"complex": {"generator": "anti-tribes"},
                "anti_tribes": {"n": 60, "k": 30, "mode": "monte-carlo"},
                "checks": [{"id": "anti-tribes"}], "seed": 1}
        config = ConfigFactory.build(data, out_dir)
        assert build_complex(config) is None
        assert build_function(config, None) is None

    def test_exact_anti_tribes_function(self, out_dir):
        data = {"complex": {"generator": "anti-tribes"}, "function": {"generator": "anti-tribes"},
                "anti_tribes": {"n": 6, "k": 3, "tribes": [[0, 1], [2, 3]]},
                "checks": [{"id": "anti-tribes"}]}
        config = ConfigFactory.build(data, out_dir)
        f = build_function(config, build_complex(config))
        assert f.mean() == pytest.approx(12 / 20)


class TestRuns:

    @pytest.mark.smoke
    def test_in_memory_run(self, out_dir):
        config = ConfigFactory.build(ConfigFactory.complete(n=4, checks=("adjointness", "swap-walk"), jobs=1),
                                     out_dir)
        orchestrator = ExperimentOrchestrator(config)
        result = orchestrator.run_all()
        assert result.exit_code == 0
        assert result.summary["failed"] == 0
        assert verdicts_named([v for _, _, v in result.verdicts], "swap-walk")[0].status == VerdictStatus.PASS
        assert len(orchestrator.audit_log) == 2

    def test_failing_constant_gives_exit_code_one(self, out_dir):
        data = ConfigFactory.complete(n=3, function={"generator": "link-indicator", "face": [0], "level": 1},
                                      checks=[{"id": "level-i", "params": {"i": 1, "constant": 0.0}}])
        result = ExperimentOrchestrator(ConfigFactory.build(data, out_dir)).run_all()
        assert result.exit_code == 1
        assert result.summary["failed_theorems"] == ["level-i"]
