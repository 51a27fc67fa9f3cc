"""Report and experiment models (pydantic v2).

Reports are value types: they are built once by the analysis code and
serialized as JSON with sorted keys.
"""
import math
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def finite_or_none(value: Optional[float]) -> Optional[float]:
    """JSON has no inf/nan; such values are reported as null and flagged in notes."""
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


# ============================================================================
# ANALYSIS REPORTS
# ============================================================================


class VerdictStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not_applicable"
    HYPOTHESIS_NOT_MET = "hypothesis_not_met"
    CONSISTENT_WITNESS = "consistent_witness"

    @property
    def counts_toward_exit(self) -> bool:
        return self in (VerdictStatus.PASS, VerdictStatus.FAIL)


class TheoremVerdict(BaseModel):
    """Outcome of one checked statement at one parameter point."""

    model_config = ConfigDict(populate_by_name=True)

    theorem: str
    params: Dict[str, Any] = Field(default_factory=dict)
    lhs: Optional[float] = None
    rhs_terms: Dict[str, Optional[float]] = Field(default_factory=dict)
    fitted_constants: Dict[str, Optional[float]] = Field(default_factory=dict)
    status: VerdictStatus
    witnesses: Dict[str, Any] = Field(default_factory=dict)
    notes: List[str] = Field(default_factory=list)
    seed: Optional[int] = None
    generated_at: str = Field(default_factory=utc_now)

    @field_validator("lhs")
    @classmethod
    def _finite_lhs(cls, value: Optional[float]) -> Optional[float]:
        return finite_or_none(value)

    @field_validator("rhs_terms", "fitted_constants")
    @classmethod
    def _finite_terms(cls, value: Dict[str, Optional[float]]) -> Dict[str, Optional[float]]:
        return {key: finite_or_none(v) for key, v in value.items()}

    @property
    def passed(self) -> Optional[bool]:
        if self.status == VerdictStatus.PASS:
            return True
        if self.status == VerdictStatus.FAIL:
            return False
        return None

    def to_dict(self) -> Dict[str, Any]:
        data = self.model_dump(mode="json")
        data["pass"] = self.passed
        return data


class PseudorandomnessReport(BaseModel):
    level: int
    epsilon_mean: float
    epsilon_sq: float
    epsilon: float
    witness: Tuple[int, ...] = ()
    sup_norm: float

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


class LinkSpectrum(BaseModel):
    face: Tuple[int, ...]
    level: int
    second_eigenvalue: float
    smallest_eigenvalue: float
    expansion: float
    connected: bool = True


class Strip(BaseModel):
    level: int
    center: Optional[float] = None
    width: float = 0.0
    count: int = 0
    eigenvalues: List[float] = Field(default_factory=list)


class SpectralProfile(BaseModel):
    """gamma with its per-link table, plus strips when a walk was analysed."""

    gamma: Optional[float] = None
    gamma_witness: Optional[Tuple[int, ...]] = None
    links: List[LinkSpectrum] = Field(default_factory=list)
    disconnected: List[Tuple[int, ...]] = Field(default_factory=list)
    walk: Optional[str] = None
    level: Optional[int] = None
    strips: List[Strip] = Field(default_factory=list)
    ambiguous: int = 0
    min_projection_mass: Optional[float] = None

    def centers(self) -> List[float]:
        """Strip centers, sorted descending, skipping empty strips."""
        return sorted((s.center for s in self.strips if s.center is not None), reverse=True)

    def center_of(self, level: int) -> Optional[float]:
        for strip in self.strips:
            if strip.level == level:
                return strip.center
        return None

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


class LevelRelation(BaseModel):
    level: int
    g_norm_sq: float
    f_norm_sq_over_binomial: float
    g_vs_f_constant: Optional[float] = None
    kernel_ratio: Optional[float] = None
    kernel_constant: Optional[float] = None
    lp: Dict[str, Tuple[float, float]] = Field(default_factory=dict)
    sup_norm: float = 0.0
    sup_norm_bound: float = 0.0
    restricted_moments: Dict[str, Tuple[float, float]] = Field(default_factory=dict)
    restricted_moment_constant: Optional[float] = None
    bottom_vs_top: Optional[float] = None
    norm_gap: Optional[float] = None

    @field_validator("g_vs_f_constant", "kernel_ratio", "kernel_constant", "restricted_moment_constant",
                     "bottom_vs_top", "norm_gap")
    @classmethod
    def _finite(cls, value: Optional[float]) -> Optional[float]:
        return finite_or_none(value)


class NormRelationsReport(BaseModel):
    level: int
    gamma: float
    levels: List[LevelRelation]
    orthogonality_up: float
    orthogonality_down: Optional[float] = None
    orthogonality_cross: Optional[float] = None
    parseval_drift: float
    parseval_constant: Optional[float] = None
    hd_level_set_available: bool = True
    violations: List[str] = Field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


# ============================================================================
# EXPERIMENT CONFIGURATION
# ============================================================================

COMPLEX_GENERATORS = ("complete", "hypercube", "anti-tribes", "random", "file")
FUNCTION_GENERATORS = ("random-sparse", "random-real", "link-indicator", "dictator", "anti-tribes", "constant", "file")
WALK_KINDS = ("canonical", "lower", "noise", "identity")


class ComplexSource(BaseModel):
    model_config = ConfigDict(extra="forbid")

    generator: str = "complete"
    n: Optional[int] = None
    d: Optional[int] = None
    faces: Optional[int] = None
    seed: Optional[int] = None
    path: Optional[Path] = None

    @model_validator(mode="after")
    def _check(self) -> "ComplexSource":
        if self.generator not in COMPLEX_GENERATORS:
            raise ValueError(f"Unknown complex generator {self.generator!r}")
        if self.generator == "file" and self.path is None:
            raise ValueError("Complex generator 'file' needs a path")
        if self.generator in ("complete", "hypercube", "random") and self.n is None:
            raise ValueError(f"Complex generator {self.generator!r} needs n")
        if self.generator in ("complete", "random") and self.d is None:
            raise ValueError(f"Complex generator {self.generator!r} needs d")
        return self


class FunctionSource(BaseModel):
    model_config = ConfigDict(extra="forbid")

    generator: str = "random-sparse"
    level: Optional[int] = None
    alpha: float = 0.1
    seed: Optional[int] = None
    face: Optional[List[int]] = None
    bit: int = 1
    value: float = 1.0
    path: Optional[Path] = None

    @model_validator(mode="after")
    def _check(self) -> "FunctionSource":
        if self.generator not in FUNCTION_GENERATORS:
            raise ValueError(f"Unknown function generator {self.generator!r}")
        if self.generator == "link-indicator" and self.face is None:
            raise ValueError("Function generator 'link-indicator' needs a face")
        if self.generator == "file" and self.path is None:
            raise ValueError("Function generator 'file' needs a path")
        return self


class AntiTribesSource(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = 10
    k: int = 5
    K: float = 1.0
    c: float = 1.0
    c1: float = 1.0
    tribes: Optional[List[List[int]]] = None
    mode: str = "exact"
    samples: int = 100_000

    @field_validator("mode")
    @classmethod
    def _mode(cls, value: str) -> str:
        if value not in ("exact", "monte-carlo"):
            raise ValueError(f"Unknown anti-tribes mode {value!r}")
        return value


class WalkSource(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: str = "canonical"
    i: int = 1
    rho: float = 0.5

    @field_validator("kind")
    @classmethod
    def _kind(cls, value: str) -> str:
        if value not in WALK_KINDS:
            raise ValueError(f"Unknown walk kind {value!r}")
        return value


class CheckSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    params: Dict[str, Any] = Field(default_factory=dict)


class ExperimentConfig(BaseModel):
    """One JSON document describing complex, function, checks and sweep."""

    model_config = ConfigDict(extra="forbid")

    complex: ComplexSource
    function: FunctionSource = Field(default_factory=FunctionSource)
    walk: WalkSource = Field(default_factory=WalkSource)
    anti_tribes: AntiTribesSource = Field(default_factory=AntiTribesSource)
    checks: List[CheckSpec] = Field(default_factory=list)
    sweep: Dict[str, List[Any]] = Field(default_factory=dict)
    output_dir: Path = Path("out")
    seed: Optional[int] = None
    samples: int = 100_000
    jobs: Optional[int] = None

    @field_validator("sweep")
    @classmethod
    def _finite_axes(cls, value: Dict[str, List[Any]]) -> Dict[str, List[Any]]:
        for axis, points in value.items():
            if not points:
                raise ValueError(f"Sweep axis {axis!r} is empty")
        return value

    @field_validator("jobs")
    @classmethod
    def _positive_jobs(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 1:
            raise ValueError("jobs must be at least 1")
        return value
