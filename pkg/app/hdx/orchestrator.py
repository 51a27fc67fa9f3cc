"""Experiment runner: builds each sweep point, runs its checks, writes reports.

Points run in a thread pool; results are collected in point order and
written by the single ReportWriter, so output bytes depend only on the
configuration and the seed.
"""
import hashlib
import itertools
import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from .anti_tribes import resolve_tribes
from .checks import CheckContext, get_check
from .complex import FaceFunction, SimplicialComplex, read_complex, read_function
from .config import get_settings
from .errors import ConfigurationError
from .generators import (
    anti_tribes_function,
    constant_function,
    dictator,
    generate_anti_tribes,
    generate_complete_complex,
    generate_hypercube_complex,
    link_indicator,
    random_real_function,
    random_sparse_function,
    random_weighted_complex,
)
from .logging_config import LogContext
from .models import ExperimentConfig, TheoremVerdict, VerdictStatus
from .operators import WalkSpec, canonical_walk, lower_walk, noise_operator
from .reporting import ReportWriter, status_counts
from .theorems import aggregate_sweep

logger = logging.getLogger(__name__)

STOCHASTIC_FUNCTIONS = ("random-sparse", "random-real")
COMPLEX_AXES = ("n", "d", "faces")
FUNCTION_AXES = {"k": "level", "alpha": "alpha", "bit": "bit"}
ANTI_TRIBES_AXES = ("K", "c", "c1", "samples")
WALK_AXES = {"walk_i": "i", "rho": "rho"}
TRIAL_AXIS = "trial"


def config_fingerprint(config: ExperimentConfig) -> str:
    """sha256 of the canonical config JSON (output dir and jobs excluded)."""
    data = config.model_dump(mode="json", exclude={"output_dir", "jobs"})
    return hashlib.sha256(json.dumps(data, sort_keys=True).encode("utf-8")).hexdigest()


# ===== POINT CONSTRUCTION =====


@dataclass
class SweepPoint:
    index: int
    values: Dict[str, Any]
    config: ExperimentConfig


def expand_sweep(config: ExperimentConfig) -> List[SweepPoint]:
    """Cartesian product of the sweep axes in declaration order; no axes gives one point."""
    axes = list(config.sweep.items())
    if not axes:
        return [SweepPoint(0, {}, config)]
    points = []
    for index, combination in enumerate(itertools.product(*(values for _, values in axes))):
        values = {name: value for (name, _), value in zip(axes, combination)}
        points.append(SweepPoint(index, values, apply_point(config, values)))
    return points


def apply_point(config: ExperimentConfig, values: Dict[str, Any]) -> ExperimentConfig:
    """Route each axis value to the config field it controls."""
    complex_update: Dict[str, Any] = {}
    function_update: Dict[str, Any] = {}
    anti_update: Dict[str, Any] = {}
    walk_update: Dict[str, Any] = {}
    checks = [spec.model_copy(deep=True) for spec in config.checks]
    anti_tribes_source = config.complex.generator == "anti-tribes"

    for axis, value in values.items():
        routed = False
        if axis in COMPLEX_AXES:
            complex_update[axis] = value
            routed = True
            if axis == "n" and anti_tribes_source:
                anti_update["n"] = value
        if axis in FUNCTION_AXES:
            function_update[FUNCTION_AXES[axis]] = value
            routed = True
            if axis == "k" and anti_tribes_source:
                anti_update["k"] = value
        if axis in ANTI_TRIBES_AXES:
            anti_update[axis] = value
            routed = True
        if axis in WALK_AXES:
            walk_update[WALK_AXES[axis]] = value
            routed = True
        if axis == TRIAL_AXIS:
            base = config.function.seed if config.function.seed is not None else (config.seed or 0)
            function_update["seed"] = base + int(value)
            routed = True
        for spec in checks:
            if axis in get_check(spec.id).allowed_params:
                spec.params[axis] = value
                routed = True
        if not routed:
            raise ConfigurationError(f"Sweep axis {axis!r} does not control any config field or check parameter")

    return config.model_copy(update={
        "complex": config.complex.model_copy(update=complex_update),
        "function": config.function.model_copy(update=function_update),
        "anti_tribes": config.anti_tribes.model_copy(update=anti_update),
        "walk": config.walk.model_copy(update=walk_update),
        "checks": checks,
    })


def build_complex(config: ExperimentConfig) -> Optional[SimplicialComplex]:
    """None for Monte Carlo anti-tribes, whose complex is never enumerated."""
    source = config.complex
    max_faces = get_settings().max_faces
    if source.generator == "complete":
        return generate_complete_complex(source.n, source.d, max_faces=max_faces)
    if source.generator == "hypercube":
        return generate_hypercube_complex(source.n, max_faces=max_faces)
    if source.generator == "random":
        faces = source.faces if source.faces is not None else max(1, math.comb(source.n, source.d) // 2)
        seed = source.seed if source.seed is not None else config.seed
        return random_weighted_complex(source.n, source.d, faces, seed, max_faces=max_faces)
    if source.generator == "file":
        return read_complex(source.path, max_faces=max_faces)
    at = config.anti_tribes
    if at.mode == "monte-carlo":
        return None
    complex_, _ = generate_anti_tribes(at.n, at.k, at.K, at.c, at.c1, tribes=at.tribes, max_faces=max_faces)
    return complex_


def build_function(config: ExperimentConfig, complex_: Optional[SimplicialComplex]) -> Optional[FaceFunction]:
    if complex_ is None:
        return None
    source = config.function
    level = source.level if source.level is not None else complex_.dimension
    seed = source.seed if source.seed is not None else config.seed
    if source.generator == "random-sparse":
        return random_sparse_function(complex_, level, source.alpha, seed)
    if source.generator == "random-real":
        return random_real_function(complex_, level, seed)
    if source.generator == "link-indicator":
        return link_indicator(complex_, level, source.face)
    if source.generator == "dictator":
        return dictator(complex_, source.bit, int(source.value))
    if source.generator == "constant":
        return constant_function(complex_, level, source.value)
    if source.generator == "file":
        return read_function(source.path, complex_)
    at = config.anti_tribes
    return anti_tribes_function(complex_, level, resolve_tribes(at.n, at.k, at.K, at.c, at.c1, at.tribes))


def build_walk(config: ExperimentConfig, function: Optional[FaceFunction]) -> Optional[WalkSpec]:
    if function is None:
        return None
    source, k = config.walk, function.level
    if source.kind == "canonical":
        return canonical_walk(k, source.i)
    if source.kind == "lower":
        return lower_walk(k)
    if source.kind == "noise":
        return noise_operator(k, source.rho)
    return WalkSpec.identity(k)


def validate_config(config: ExperimentConfig) -> None:
    """Checks beyond the schema: known check ids and parameters, seed when anything is random."""
    if not config.checks:
        raise ConfigurationError("Config lists no checks")
    for spec in config.checks:
        get_check(spec.id).validate(spec.params)
    needs_seed = config.function.generator in STOCHASTIC_FUNCTIONS and config.function.seed is None
    needs_seed |= config.complex.generator == "random" and config.complex.seed is None
    modes = {config.anti_tribes.mode} | {spec.params.get("mode") for spec in config.checks if spec.id == "anti-tribes"}
    needs_seed |= any(spec.id == "anti-tribes" for spec in config.checks) and "monte-carlo" in modes
    if needs_seed and config.seed is None:
        raise ConfigurationError("A seed is required when a stochastic generator or estimator is enabled")


# ===== RUN =====


@dataclass
class RunResult:
    exit_code: int
    verdicts: List[Tuple[int, str, TheoremVerdict]]
    sweep_verdicts: List[TheoremVerdict] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)


class ExperimentOrchestrator:
    """Runs every check at every sweep point and keeps an audit trail."""

    def __init__(self, config: ExperimentConfig, writer: Optional[ReportWriter] = None):
        validate_config(config)
        self.config = config
        self.fingerprint = config_fingerprint(config)
        self.writer = writer
        self.history: List[Tuple[int, str, TheoremVerdict]] = []
        self.audit_log: List[Dict[str, Any]] = []

    def _audit(self, message: str) -> None:
        self.audit_log.append({"timestamp": datetime.now(timezone.utc).isoformat(), "message": message})
        logger.debug(message)

    def run_point(self, point: SweepPoint) -> List[Tuple[str, List[TheoremVerdict]]]:
        config = point.config
        with LogContext(logger, point_id=point.index, seed=config.seed) as log:
            complex_ = build_complex(config)
            function = build_function(config, complex_)
            context = CheckContext(
                complex=complex_,
                function=function,
                walk=build_walk(config, function),
                anti_tribes=config.anti_tribes,
                complex_generator=config.complex.generator,
                seed=config.seed,
                samples=config.samples,
                point=dict(point.values),
            )
            log.info(f"Point {point.index}: {point.values or 'base config'}")
            return [(spec.id, get_check(spec.id).run(context, spec.params)) for spec in config.checks]

    def run_all(self) -> RunResult:
        points = expand_sweep(self.config)
        jobs = self.config.jobs or os.cpu_count() or 1
        self._audit(f"Run {self.fingerprint[:12]}: {len(points)} points, {len(self.config.checks)} checks, {jobs} jobs")
        start = time.perf_counter()
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(self.run_point, point) for point in points]
            for point, future in zip(points, futures):
                for check_id, verdicts in future.result():
                    if self.writer is not None:
                        self.writer.write(point.index, check_id, verdicts)
                    self.history.extend((point.index, check_id, verdict) for verdict in verdicts)

        sweep_verdicts: List[TheoremVerdict] = []
        for axis in self.config.sweep:
            if axis == TRIAL_AXIS:
                continue
            aggregated = aggregate_sweep([verdict for _, _, verdict in self.history], axis)
            sweep_verdicts.extend(aggregated)
            if self.writer is not None:
                for verdict in aggregated:
                    self.writer.write(len(points), verdict.theorem, [verdict])

        summary = self.get_summary(sweep_verdicts)
        summary["duration_s"] = round(time.perf_counter() - start, 3)
        exit_code = 0 if summary["failed"] == 0 else 1
        self._audit(f"Run {self.fingerprint[:12]} finished with exit code {exit_code}")
        if self.writer is not None:
            self.writer.write_summary({key: value for key, value in summary.items() if key != "duration_s"})
        return RunResult(exit_code, list(self.history), sweep_verdicts, summary)

    def get_summary(self, sweep_verdicts: Optional[List[TheoremVerdict]] = None) -> Dict[str, Any]:
        verdicts = [verdict for _, _, verdict in self.history] + list(sweep_verdicts or [])
        counted = [verdict for verdict in verdicts if verdict.status.counts_toward_exit]
        return {
            "fingerprint": self.fingerprint,
            "total_verdicts": len(verdicts),
            "statuses": status_counts(verdicts),
            "failed": sum(1 for verdict in counted if verdict.status == VerdictStatus.FAIL),
            "failed_theorems": sorted({verdict.theorem for verdict in counted if verdict.status == VerdictStatus.FAIL}),
        }


def run(config: ExperimentConfig, output_dir: Optional[Path] = None) -> RunResult:
    """Validate, run all sweep points and write reports under output_dir (default config.output_dir)."""
    writer = ReportWriter(Path(output_dir or config.output_dir))
    return ExperimentOrchestrator(config, writer).run_all()
