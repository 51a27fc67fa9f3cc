"""Anti-tribes tightness experiment.

f(S) = 1 iff the k-set S meets every tribe. Its influence stays below
K Var(f) while every link up to level cK is sparse, so the Bourgain
analog cannot be improved. Exact mode enumerates X(k); Monte Carlo mode
samples uniform k-subsets of [n] and walks one lower-walk step.
"""
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import get_settings
from .errors import ConfigurationError, InfeasibleParametersError, SamplingError
from .generators import anti_tribes_tribes, generate_anti_tribes, make_rng
from .models import TheoremVerdict, VerdictStatus
from .operators import compose_down, influence

logger = logging.getLogger(__name__)

EXACT_LIMIT = 200_000
MIN_SAMPLES = 10_000
Z_95 = 1.959963984540054


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float

    @property
    def interval(self) -> Tuple[float, float]:
        return self.value - Z_95 * self.stderr, self.value + Z_95 * self.stderr

    def to_dict(self) -> Dict[str, Any]:
        low, high = self.interval
        return {"value": self.value, "stderr": self.stderr, "ci95": [low, high]}


def _proportion(hits: np.ndarray) -> Estimate:
    count = hits.size
    if count == 0:
        return Estimate(float("nan"), float("inf"))
    p = float(hits.mean())
    return Estimate(p, math.sqrt(max(p * (1.0 - p), 0.0) / count))


def _density_levels(K: float, c: float, k: int, m: int) -> List[int]:
    return list(range(1, min(int(math.floor(c * K)), k, m) + 1))


def resolve_tribes(n: int, k: int, K: float, c: float, c1: float,
                   tribes: Optional[Sequence[Sequence[int]]]) -> List[Tuple[int, ...]]:
    if tribes is None:
        return anti_tribes_tribes(n, k, K, c, c1)
    resolved = [tuple(int(v) for v in tribe) for tribe in tribes]
    used = [v for tribe in resolved for v in tribe]
    if len(set(used)) != len(used) or any(v < 0 or v >= n for v in used) or any(not t for t in resolved):
        raise InfeasibleParametersError("Tribes must be non-empty disjoint subsets of [n]")
    if len(resolved) > k:
        raise InfeasibleParametersError(f"A {k}-face cannot meet {len(resolved)} disjoint tribes")
    return resolved


# ===== EXACT =====


def _exact(n: int, k: int, K: float, c: float, tribes: List[Tuple[int, ...]]) -> Dict[str, Any]:
    if math.comb(n, k) > EXACT_LIMIT:
        raise InfeasibleParametersError(f"Exact mode needs C(n, k) <= {EXACT_LIMIT}, got C({n}, {k})")
    complex_, f = generate_anti_tribes(n, k, K, c, 1.0, tribes=tribes)
    mean, variance = f.mean(), f.variance()
    total = influence(f)
    densities = {}
    for level in _density_levels(K, c, k, len(tribes)):
        values = compose_down(complex_, k, level).apply(f).values
        rank = int(np.argmax(values))
        densities[str(level)] = {"value": float(values[rank]), "face": list(complex_.faces(level)[rank])}
    return {"mean": mean, "variance": variance, "influence": total, "densities": densities}


# ===== MONTE CARLO =====


def _meets_all(sets: np.ndarray, labels: np.ndarray, m: int) -> np.ndarray:
    tagged = labels[sets]
    hits = np.ones(sets.shape[0], dtype=bool)
    for tribe in range(m):
        hits &= np.any(tagged == tribe, axis=1)
    return hits


def _monte_carlo(n: int, k: int, K: float, c: float, tribes: List[Tuple[int, ...]],
                 samples: int, seed: int) -> Dict[str, Any]:
    rng = make_rng(seed)
    m = len(tribes)
    labels = np.full(n, -1)
    for t, tribe in enumerate(tribes):
        labels[list(tribe)] = t

    perm = np.argsort(rng.random((samples, n)), axis=1)
    current = perm[:, :k]
    inside = _meets_all(current, labels, m)
    mean = _proportion(inside)

    # one lower-walk step: drop a uniform vertex, add a uniform vertex of the complement of the (k-1)-face
    rows = np.arange(samples)
    position = rng.integers(0, k, size=samples)
    choice = rng.integers(0, n - k + 1, size=samples)
    removed = current[rows, position]
    outside = perm[rows, np.minimum(k + choice, n - 1)]
    added = np.where(choice == n - k, removed, outside)
    stepped = current.copy()
    stepped[rows, position] = added
    escaped = _proportion(~_meets_all(stepped[inside], labels, m))

    p, q = mean.value, 1.0 - mean.value
    variance = Estimate(p * q, abs(1.0 - 2.0 * p) * mean.stderr)
    if not inside.any():
        escaped = Estimate(0.0, 0.0)
    influence_value = k * p * escaped.value
    influence_err = k * math.hypot(p * escaped.stderr, escaped.value * mean.stderr)
    if q > 0:
        ratio = k * escaped.value / q
        ratio_err = k * math.hypot(escaped.stderr / q, escaped.value * mean.stderr / q ** 2)
    else:
        ratio, ratio_err = 0.0, 0.0

    densities = {}
    for level in _density_levels(K, c, k, m):
        anchor = np.array([tribes[t][0] for t in range(level)])
        rest = np.setdiff1d(np.arange(n), anchor)
        order = np.argsort(rng.random((samples, rest.size)), axis=1)[:, :k - level]
        sets = np.hstack([np.broadcast_to(anchor, (samples, level)), rest[order]])
        estimate = _proportion(_meets_all(sets, labels, m))
        densities[str(level)] = {**estimate.to_dict(), "face": anchor.tolist()}

    return {
        "mean": mean.value,
        "variance": variance.value,
        "influence": influence_value,
        "estimates": {
            "mean": mean.to_dict(),
            "variance": variance.to_dict(),
            "expansion": escaped.to_dict(),
            "influence": Estimate(influence_value, influence_err).to_dict(),
            "influence_ratio": Estimate(ratio, ratio_err).to_dict(),
        },
        "densities": densities,
    }


# ===== EXPERIMENT =====


def anti_tribes_experiment(n: int, k: int, K: float, c: float = 1.0, c1: float = 1.0, *,
                           tribes: Optional[Sequence[Sequence[int]]] = None, mode: str = "exact",
                           samples: int = 100_000, seed: Optional[int] = None,
                           max_ci_width: Optional[float] = None) -> TheoremVerdict:
    """I[f] <= K Var(f) and the densest link per level up to cK."""
    tribes = resolve_tribes(n, k, K, c, c1, tribes)
    tol = get_settings().walk_tol
    params = {"n": n, "k": k, "K": K, "c": c, "c1": c1, "m": len(tribes),
              "tribe_size": len(tribes[0]) if tribes else 0, "mode": mode}
    notes: List[str] = []

    if mode == "exact":
        result = _exact(n, k, K, c, tribes)
        holds = result["influence"] <= K * result["variance"] + tol
        ratio = result["influence"] / result["variance"] if result["variance"] > 0 else 0.0
    elif mode == "monte-carlo":
        if seed is None:
            raise ConfigurationError("Monte Carlo mode needs a seed")
        if samples < MIN_SAMPLES:
            raise SamplingError(f"Monte Carlo mode needs at least {MIN_SAMPLES} samples, got {samples}")
        params["samples"] = samples
        result = _monte_carlo(n, k, K, c, tribes, samples, seed)
        ratio_estimate = result["estimates"]["influence_ratio"]
        ratio = ratio_estimate["value"]
        holds = ratio_estimate["ci95"][0] <= K + tol
        if max_ci_width is not None:
            low, high = result["estimates"]["mean"]["ci95"]
            if high - low > max_ci_width:
                raise SamplingError(f"CI width {high - low:.3g} for E[f] exceeds {max_ci_width:g}; "
                                    f"increase samples beyond {samples}")
        if ratio > K:
            notes.append("point estimate of I/Var exceeds K; verdict uses the 95% interval")
    else:
        raise InfeasibleParametersError(f"Unknown anti-tribes mode {mode!r}")

    link_values = [entry["value"] for entry in result["densities"].values()]
    max_density = max(link_values) if link_values else None
    omega = -math.log2(max_density) / K if max_density else None
    logger.info("Anti-tribes n=%d k=%d m=%d (%s): E[f]=%.4g, I/Var=%.4g", n, k, len(tribes), mode,
                result["mean"], ratio)
    return TheoremVerdict(
        theorem="anti-tribes",
        params=params,
        lhs=result["influence"],
        rhs_terms={"K_variance": K * result["variance"], "mean": result["mean"], "variance": result["variance"]},
        fitted_constants={"ratio": ratio, "omega": omega, "max_link_density": max_density},
        status=VerdictStatus.PASS if holds else VerdictStatus.FAIL,
        witnesses={"densities": result["densities"], "tribes": [list(t) for t in tribes],
                   **({"estimates": result["estimates"]} if "estimates" in result else {})},
        notes=notes,
        seed=seed,
    )
