"""Bottom-Up and HD-Level-Set decompositions of f in C_k.

Bottom-Up: g_i = D^k_i f - sum_{j<i} C(i,j) U^i_j g_j, lifts
f_i = C(k,i) U^k_i g_i; equivalently the alternating sum
g_i = sum_j (-1)^(i-j) C(i,j) U^i_j D^k_j f.

HD-Level-Set: f = sum_i U^k_i g_i with g_i in Ker(D_i), solved from a
pi-orthonormal kernel basis per level and one stacked linear system.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .complex import FaceFunction, SimplicialComplex, canonical_face, link, restrict
from .config import get_settings
from .errors import LevelError, SingularSystemError
from .expansion import gamma_or_zero
from .logging_config import log_numerical_event
from .models import LevelRelation, NormRelationsReport
from .operators import compose_down, compose_up, down_map
from .pseudorandom import link_statistics

logger = logging.getLogger(__name__)


class Basis(str, Enum):
    BOTTOM_UP = "bottom_up"
    HD_LEVEL_SET = "hd_level_set"


@dataclass(frozen=True)
class Decomposition:
    basis: Basis
    level: int
    function: FaceFunction
    level_functions: Tuple[FaceFunction, ...]
    lifts: Tuple[FaceFunction, ...]
    residual: float
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def reconstruction(self) -> FaceFunction:
        return self.function.with_values(np.sum([f.values for f in self.lifts], axis=0))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "basis": self.basis.value,
            "level": self.level,
            "g": [g.values.tolist() for g in self.level_functions],
            "f": [f.values.tolist() for f in self.lifts],
            "residual": self.residual,
            "diagnostics": self.diagnostics,
        }


def _residual(f: FaceFunction, lifts: Sequence[FaceFunction]) -> float:
    total = np.sum([lift.values for lift in lifts], axis=0)
    return f.with_values(f.values - total).norm(2)


def _bottom_up_lifts(f: FaceFunction, gs: List[FaceFunction]) -> Tuple[FaceFunction, ...]:
    k = f.level
    return tuple(compose_up(f.complex, i, k).apply(g) * math.comb(k, i) for i, g in enumerate(gs))


def bottom_up_recursive(f: FaceFunction) -> Decomposition:
    X, k = f.complex, f.level
    gs: List[FaceFunction] = []
    for i in range(k + 1):
        values = compose_down(X, k, i).apply(f).values.copy()
        for j in range(i):
            values -= math.comb(i, j) * compose_up(X, j, i).apply(gs[j]).values
        gs.append(FaceFunction(X, i, values))
    lifts = _bottom_up_lifts(f, gs)
    return Decomposition(Basis.BOTTOM_UP, k, f, tuple(gs), lifts, _residual(f, lifts), {"form": "recursive"})


def bottom_up_explicit(f: FaceFunction) -> Decomposition:
    X, k = f.complex, f.level
    means = [compose_down(X, k, j).apply(f) for j in range(k + 1)]
    gs: List[FaceFunction] = []
    for i in range(k + 1):
        values = np.zeros(X.size(i))
        for j in range(i + 1):
            values += (-1) ** (i - j) * math.comb(i, j) * compose_up(X, j, i).apply(means[j]).values
        gs.append(FaceFunction(X, i, values))
    lifts = _bottom_up_lifts(f, gs)
    return Decomposition(Basis.BOTTOM_UP, k, f, tuple(gs), lifts, _residual(f, lifts), {"form": "explicit"})


# ===== HD-LEVEL-SET =====


@dataclass(frozen=True)
class LevelSetSpaces:
    """Kernel bases of D_i and their lifts V^i_k = U^k_i H^i for one level k."""

    level: int
    kernels: Tuple[np.ndarray, ...]
    lifts: Tuple[np.ndarray, ...]
    system: np.ndarray
    condition: float

    @property
    def dimensions(self) -> Tuple[int, ...]:
        return tuple(basis.shape[1] for basis in self.kernels)

    def orthonormal_lift(self, i: int, pi: np.ndarray) -> np.ndarray:
        """Euclidean-orthonormal basis of sqrt(pi) V^i_k."""
        weighted = np.sqrt(pi)[:, None] * self.lifts[i]
        if weighted.shape[1] == 0:
            return weighted
        q, _ = np.linalg.qr(weighted)
        return q


def kernel_basis(complex_: SimplicialComplex, i: int) -> np.ndarray:
    """pi_i-orthonormal basis of Ker(D_i), one column per vector."""
    if i == 0:
        return np.ones((1, 1))
    settings = get_settings()
    sqrt_pi = np.sqrt(complex_.measure(i))
    weighted = down_map(complex_, i).dense() / sqrt_pi[None, :]
    return scipy.linalg.null_space(weighted, rcond=settings.nullspace_rcond) / sqrt_pi[:, None]


def level_set_spaces(complex_: SimplicialComplex, k: int) -> LevelSetSpaces:
    if not 0 <= k <= complex_.dimension:
        raise LevelError(f"Level {k} outside 0..{complex_.dimension}")

    def build() -> LevelSetSpaces:
        kernels = tuple(kernel_basis(complex_, i) for i in range(k + 1))
        lifts = tuple(compose_up(complex_, i, k).dense() @ basis for i, basis in enumerate(kernels))
        system = np.sqrt(complex_.measure(k))[:, None] * np.hstack(lifts)
        rows, cols = system.shape
        if cols != rows:
            condition = math.inf
        else:
            condition = float(np.linalg.cond(system))
        if condition > 1e6:
            log_numerical_event(logger, "LEVEL_SET_SYSTEM",
                                {"level": k, "rows": rows, "cols": cols, "condition": condition})
        return LevelSetSpaces(k, kernels, lifts, system, condition)

    return complex_.cached(("level-set", k), build)


def hd_level_set(f: FaceFunction) -> Decomposition:
    X, k = f.complex, f.level
    settings = get_settings()
    spaces = level_set_spaces(X, k)
    if not math.isfinite(spaces.condition) or spaces.condition > settings.singular_condition_limit:
        raise SingularSystemError(
            f"HD-Level-Set system at level {k} is singular (dimensions {list(spaces.dimensions)}, "
            f"|X(k)| = {X.size(k)})",
            spaces.condition,
        )
    coefficients = np.linalg.solve(spaces.system, np.sqrt(X.measure(k)) * f.values)
    gs, lifts, kernel_residuals = [], [], []
    offset = 0
    for i, (basis, lift) in enumerate(zip(spaces.kernels, spaces.lifts)):
        c = coefficients[offset:offset + basis.shape[1]]
        offset += basis.shape[1]
        g = FaceFunction(X, i, basis @ c)
        gs.append(g)
        lifts.append(FaceFunction(X, k, lift @ c))
        kernel_residuals.append(down_map(X, i).apply(g).norm(2) if i > 0 else 0.0)
    residual = _residual(f, lifts)
    return Decomposition(
        Basis.HD_LEVEL_SET, k, f, tuple(gs), tuple(lifts), residual,
        {"condition": spaces.condition, "kernel_residuals": kernel_residuals,
         "dimensions": list(spaces.dimensions), "nullspace_rcond": settings.nullspace_rcond},
    )


# ===== DEGREE / RESTRICTION =====


def degree(f: FaceFunction) -> int:
    threshold = get_settings().zero_tol
    lifts = bottom_up_explicit(f).lifts
    nonzero = [i for i, lift in enumerate(lifts) if lift.norm(2) > threshold]
    return max(nonzero) if nonzero else 0


def g_restriction_check(f: FaceFunction, tau: Sequence[int], i: int) -> Tuple[FaceFunction, FaceFunction, float]:
    """g_i|_tau against sum_{sigma <= tau} (-1)^|sigma| g^{(tau - sigma)}_{i-j}."""
    tau = canonical_face(tau)
    j = len(tau)
    if not j <= i <= f.level:
        raise LevelError(f"Restriction identity needs |tau| <= i <= k, got |tau|={j}, i={i}, k={f.level}")
    X = f.complex
    g_i = bottom_up_explicit(f).level_functions[i]
    lhs = restrict(g_i, tau)
    target_faces = lhs.complex.faces(i - j)
    rhs = np.zeros(len(target_faces))
    for size in range(j + 1):
        for sigma in combinations(tau, size):
            rest = tuple(v for v in tau if v not in sigma)
            inner = bottom_up_explicit(restrict(f, rest)).level_functions[i - j]
            inner_complex = link(X, rest).complex
            values = np.array([inner.values[inner_complex.index_of(face)] for face in target_faces])
            rhs += (-1) ** size * values
    rhs_function = lhs.with_values(rhs)
    diff = float(np.max(np.abs(lhs.values - rhs))) if rhs.size else 0.0
    return lhs, rhs_function, diff


# ===== NORM RELATIONS =====


def _safe_ratio(numerator: float, denominator: float) -> Optional[float]:
    return numerator / denominator if denominator > 0 else None


def norm_relations(f: FaceFunction, gamma: Optional[float] = None) -> NormRelationsReport:
    """Measured sides of the norm relations between g_i, f_i and D^k_i f."""
    X, k = f.complex, f.level
    if gamma is None:
        gamma = gamma_or_zero(X)
    zero = get_settings().zero_tol
    bottom = bottom_up_explicit(f)
    norm_sq = f.norm(2) ** 2
    sup = f.norm(np.inf)
    try:
        top: Optional[Decomposition] = hd_level_set(f)
    except SingularSystemError as exc:
        logger.warning("HD-Level-Set comparison skipped: %s", exc)
        top = None

    violations: List[str] = []
    relations: List[LevelRelation] = []
    for i, (g, lift) in enumerate(zip(bottom.level_functions, bottom.lifts)):
        projected = compose_down(X, k, i).apply(f)
        projected_sq = projected.norm(2) ** 2
        binom = math.comb(k, i)
        g_sq, lift_sq = g.norm(2) ** 2, lift.norm(2) ** 2
        kernel_ratio = kernel_constant = None
        if i > 0:
            kernel_ratio = _safe_ratio(down_map(X, i).apply(g).norm(2), projected.norm(2))
            if kernel_ratio is not None and gamma > 0:
                kernel_constant = kernel_ratio / gamma

        lp = {}
        for label, p in (("1", 1), ("2", 2), ("inf", np.inf)):
            lhs, rhs = g.norm(p), 2 ** i * projected.norm(p)
            lp[label] = (lhs, rhs)
            if lhs > rhs + zero:
                violations.append(f"l_{label} claim fails at level {i}: {lhs:.6g} > {rhs:.6g}")

        stats = link_statistics(f, i)
        sup_bound = 2 ** i * stats.epsilon_mean * sup
        if g.norm(np.inf) > sup_bound + zero:
            violations.append(f"sup-norm bound fails at level {i}: {g.norm(np.inf):.6g} > {sup_bound:.6g}")

        moments, moment_constant = {}, None
        g_sq_values = g.with_values(g.values ** 2)
        for j in range(1, i + 1):
            observed = float(np.max(compose_down(X, i, j).apply(g_sq_values).values))
            base = stats.epsilon / math.comb(k - j, i - j) * sup ** 2
            moments[str(j)] = (observed, base)
            if gamma > 0 and sup > 0:
                excess = (observed - base) / (gamma * sup ** 2)
                moment_constant = excess if moment_constant is None else max(moment_constant, excess)

        bottom_vs_top = norm_gap = None
        if top is not None and norm_sq > 0:
            diff = lift.values - top.lifts[i].values
            bottom_vs_top = float(X.measure(k) @ diff ** 2) / norm_sq
            norm_gap = abs(lift_sq - top.lifts[i].norm(2) ** 2) / norm_sq

        relations.append(LevelRelation(
            level=i,
            g_norm_sq=g_sq,
            f_norm_sq_over_binomial=lift_sq / binom,
            g_vs_f_constant=_safe_ratio(abs(g_sq - lift_sq / binom), gamma * projected_sq),
            kernel_ratio=kernel_ratio,
            kernel_constant=kernel_constant,
            lp=lp,
            sup_norm=g.norm(np.inf),
            sup_norm_bound=sup_bound,
            restricted_moments=moments,
            restricted_moment_constant=moment_constant,
            bottom_vs_top=bottom_vs_top,
            norm_gap=norm_gap,
        ))

    pi = X.measure(k)

    def max_cross(left: Sequence[FaceFunction], right: Sequence[FaceFunction], skip_diagonal: bool) -> float:
        worst = 0.0
        for a, fa in enumerate(left):
            for b, fb in enumerate(right):
                if a == b and skip_diagonal:
                    continue
                worst = max(worst, abs(float(pi @ (fa.values * fb.values))))
        return worst / norm_sq if norm_sq > 0 else 0.0

    drift = abs(norm_sq - sum(lift.norm(2) ** 2 for lift in bottom.lifts)) / norm_sq if norm_sq > 0 else 0.0
    return NormRelationsReport(
        level=k,
        gamma=gamma,
        levels=relations,
        orthogonality_up=max_cross(bottom.lifts, bottom.lifts, True),
        orthogonality_down=max_cross(top.lifts, top.lifts, True) if top is not None else None,
        orthogonality_cross=max_cross(bottom.lifts, top.lifts, True) if top is not None else None,
        parseval_drift=drift,
        parseval_constant=_safe_ratio(drift, gamma),
        hd_level_set_available=top is not None,
        violations=violations,
    )
