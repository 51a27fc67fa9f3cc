"""Theorem checks as interchangeable workers.

Every check id in an experiment config maps to one TheoremCheck in the
registry. A worker reads what it needs from the CheckContext of the
current sweep point and returns one or more verdicts.
"""
import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Type

from .anti_tribes import anti_tribes_experiment
from .complex import FaceFunction, SimplicialComplex
from .errors import ConfigurationError, ComplexError
from .logging_config import log_verdict_event
from .models import AntiTribesSource, TheoremVerdict, VerdictStatus
from .operators import WalkSpec
from .theorems import (
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
)

logger = logging.getLogger(__name__)


@dataclass
class CheckContext:
    """Inputs shared by all checks at one sweep point."""

    complex: Optional[SimplicialComplex] = None
    function: Optional[FaceFunction] = None
    walk: Optional[WalkSpec] = None
    anti_tribes: AntiTribesSource = field(default_factory=AntiTribesSource)
    complex_generator: str = "complete"
    seed: Optional[int] = None
    samples: int = 100_000
    point: Dict[str, Any] = field(default_factory=dict)

    def require_complex(self, check_id: str) -> SimplicialComplex:
        if self.complex is None:
            raise ConfigurationError(f"Check {check_id!r} needs an enumerated complex")
        return self.complex

    def require_function(self, check_id: str) -> FaceFunction:
        if self.function is None:
            raise ConfigurationError(f"Check {check_id!r} needs a function")
        return self.function

    def require_walk(self, check_id: str) -> WalkSpec:
        if self.walk is None:
            raise ConfigurationError(f"Check {check_id!r} needs a walk")
        return self.walk


class TheoremCheck(ABC):
    """Base class for all checks."""

    check_id: str = ""
    allowed_params: tuple = ()

    def validate(self, params: Dict[str, Any]) -> None:
        unknown = sorted(set(params) - set(self.allowed_params))
        if unknown:
            raise ConfigurationError(f"Check {self.check_id!r} does not take parameters {unknown}")

    @abstractmethod
    def execute(self, context: CheckContext, params: Dict[str, Any]) -> List[TheoremVerdict]:
        pass

    def run(self, context: CheckContext, params: Dict[str, Any]) -> List[TheoremVerdict]:
        """execute() plus sweep-point bookkeeping and one log event per verdict."""
        start = time.perf_counter()
        verdicts = self.execute(context, params)
        duration_ms = (time.perf_counter() - start) * 1000.0
        for verdict in verdicts:
            verdict.params = {**verdict.params, **context.point}
            if verdict.seed is None:
                verdict.seed = context.seed
            log_verdict_event(logger, verdict.theorem, verdict.status.value, duration_ms,
                              {"lhs": verdict.lhs, "point": context.point})
        return verdicts


CHECKS: Dict[str, TheoremCheck] = {}


def register(cls: Type[TheoremCheck]) -> Type[TheoremCheck]:
    CHECKS[cls.check_id] = cls()
    return cls


def get_check(check_id: str) -> TheoremCheck:
    try:
        return CHECKS[check_id]
    except KeyError:
        raise ConfigurationError(f"Unknown check id {check_id!r}; known: {', '.join(sorted(CHECKS))}") from None


def known_checks() -> List[str]:
    return sorted(CHECKS)


def _simple(check_id: str, run: Callable[[CheckContext, Dict[str, Any]], TheoremVerdict],
            params: tuple = ()) -> None:
    """Register a check that yields a single verdict."""

    class _Check(TheoremCheck):
        allowed_params = params

        def execute(self, context: CheckContext, given: Dict[str, Any]) -> List[TheoremVerdict]:
            return [run(context, given)]

    _Check.check_id = check_id
    _Check.__name__ = "".join(part.title() for part in check_id.split("-")) + "Check"
    register(_Check)


# ===== MAIN STATEMENTS =====


@register
class HypercontractivityCheck(TheoremCheck):
    check_id = "hypercontractivity"
    allowed_params = ("i", "constant")

    def execute(self, context, params):
        f = context.require_function(self.check_id)
        levels = params.get("i", list(range(1, f.level + 1)))
        levels = levels if isinstance(levels, list) else [levels]
        return [check_hypercontractivity(f, int(i), constant=params.get("constant")) for i in levels]


@register
class LevelICheck(TheoremCheck):
    check_id = "level-i"
    allowed_params = ("i", "constant")

    def execute(self, context, params):
        f = context.require_function(self.check_id)
        levels = params.get("i", list(range(1, f.level + 1)))
        levels = levels if isinstance(levels, list) else [levels]
        return [check_level_i(f, int(i), constant=params.get("constant")) for i in levels]


_simple("expansion", lambda ctx, p: check_expansion_theorem(
    ctx.require_function("expansion"), ctx.require_walk("expansion"), float(p.get("delta", 0.5)),
    amplification=p.get("amplification"), c=p.get("c")), ("delta", "amplification", "c"))

_simple("bourgain", lambda ctx, p: check_bourgain(
    ctx.require_function("bourgain"), float(p.get("K", 1.0)), c=p.get("c")), ("K", "c"))

_simple("noise-sensitivity", lambda ctx, p: check_noise_sensitivity(
    ctx.require_function("noise-sensitivity"), float(p.get("rho", 0.5)), float(p.get("epsilon", 0.5)),
    c=p.get("c"), omega=p.get("omega")), ("rho", "epsilon", "c", "omega"))

_simple("noise-hypercontractivity", lambda ctx, p: check_noise_hypercontractivity(
    ctx.require_function("noise-hypercontractivity"), p.get("rho")), ("rho",))


@register
class AntiTribesCheck(TheoremCheck):
    check_id = "anti-tribes"
    allowed_params = ("n", "k", "K", "c", "c1", "tribes", "mode", "samples", "max_ci_width")

    def execute(self, context, params):
        source = context.anti_tribes.model_copy(update={key: value for key, value in params.items()
                                                        if key in AntiTribesSource.model_fields})
        return [anti_tribes_experiment(
            source.n, source.k, source.K, source.c, source.c1, tribes=source.tribes, mode=source.mode,
            samples=source.samples, seed=context.seed, max_ci_width=params.get("max_ci_width"),
        )]


# ===== IDENTITIES AND RELATIONS =====


def _localization_corollary(context: CheckContext, params: Dict[str, Any]) -> TheoremVerdict:
    f = context.require_function("localization-corollary")
    return check_localization_corollary(f, params.get("tau", [f.complex.vertices[0]]))


_simple("garland", lambda ctx, p: check_garland(ctx.require_function("garland")))
_simple("adjointness", lambda ctx, p: check_adjointness(ctx.require_complex("adjointness")))
_simple("bottom-up", lambda ctx, p: check_bottom_up(ctx.require_function("bottom-up")))
_simple("g-restriction", lambda ctx, p: check_g_restriction(
    ctx.require_function("g-restriction"), int(p.get("max_link_level", 2))), ("max_link_level",))
_simple("localization", lambda ctx, p: check_localization(
    ctx.require_function("localization"), constant=p.get("constant")), ("constant",))
_simple("localization-corollary", _localization_corollary, ("tau",))
_simple("ddfh", lambda ctx, p: check_ddfh(ctx.require_complex("ddfh"), constant=p.get("constant")), ("constant",))
_simple("swap-walk", lambda ctx, p: check_swap_walk(
    ctx.require_complex("swap-walk"), int(p.get("i", 1)), int(p.get("j", 1))), ("i", "j"))
_simple("influence-bounds", lambda ctx, p: check_influence_bounds(
    ctx.require_function("influence-bounds"), constant=p.get("constant")), ("constant",))
_simple("pseudorandomness", lambda ctx, p: check_pseudorandom_monotone(ctx.require_function("pseudorandomness")))
_simple("norm-relations", lambda ctx, p: check_norm_relations(ctx.require_function("norm-relations")))
_simple("link-expansion", lambda ctx, p: check_link_expansion(
    ctx.require_complex("link-expansion"), ctx.require_walk("link-expansion"), constant=p.get("constant")),
    ("constant",))


@register
class HypercubeCheck(TheoremCheck):
    check_id = "hypercube"
    allowed_params = ("rho",)

    def execute(self, context, params):
        if context.complex_generator != "hypercube":
            return [TheoremVerdict(theorem="hypercube", params={"generator": context.complex_generator},
                                   status=VerdictStatus.NOT_APPLICABLE,
                                   notes=["hypercube embedding needs the hypercube complex"])]
        try:
            return [check_hypercube(context.require_complex(self.check_id), float(params.get("rho", 0.5)))]
        except ComplexError as exc:
            return [TheoremVerdict(theorem="hypercube", status=VerdictStatus.NOT_APPLICABLE, notes=[str(exc)])]
