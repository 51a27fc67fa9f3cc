"""Approximate eigenvalues of HD-walks.

The spectrum of a walk M at level k splits into k+1 strips, one per
HD-Level-Set space V^i_k. Each eigenvector is assigned to the space
carrying the largest share of its pi-norm; strip centers are the mean
of the assigned eigenvalues.
"""
import logging
from typing import Dict, List, Union

import numpy as np

from .complex import FaceFunction, SimplicialComplex
from .decomposition import level_set_spaces
from .errors import InfeasibleParametersError
from .expansion import gamma_or_zero, measure_gamma
from .generators import link_indicator
from .logging_config import log_numerical_event
from .models import SpectralProfile, Strip
from .operators import LinearMap, WalkSpec, as_walk, edge_expansion

logger = logging.getLogger(__name__)

AMBIGUOUS_MASS = 0.5


def approximate_eigenvalues(complex_: SimplicialComplex, walk: Union[WalkSpec, LinearMap]) -> SpectralProfile:
    M = as_walk(complex_, walk)
    k = M.source_level
    name = walk.name if isinstance(walk, WalkSpec) else "operator"
    key = ("strips", walk.level, walk.terms) if isinstance(walk, WalkSpec) else None

    def build() -> SpectralProfile:
        pi = complex_.measure(k)
        scale = np.sqrt(pi)
        symmetric = scale[:, None] * M.dense() / scale[None, :]
        symmetric = (symmetric + symmetric.T) / 2.0
        eigenvalues, eigenvectors = np.linalg.eigh(symmetric)

        spaces = level_set_spaces(complex_, k)
        bases = [spaces.orthonormal_lift(i, pi) for i in range(k + 1)]
        masses = np.stack([np.sum((basis.T @ eigenvectors) ** 2, axis=0) for basis in bases])
        assignment = np.argmax(masses, axis=0)
        best = masses[assignment, np.arange(eigenvalues.size)]
        ambiguous = int(np.sum(best < AMBIGUOUS_MASS))
        if ambiguous:
            log_numerical_event(logger, "AMBIGUOUS_STRIP_ASSIGNMENT",
                                {"walk": name, "count": ambiguous, "min_mass": float(best.min())})

        strips = []
        for i in range(k + 1):
            members = eigenvalues[assignment == i]
            if members.size:
                strips.append(Strip(level=i, center=float(members.mean()),
                                    width=float(members.max() - members.min()), count=int(members.size),
                                    eigenvalues=sorted((float(v) for v in members), reverse=True)))
            else:
                strips.append(Strip(level=i))
        profile = SpectralProfile(walk=name, level=k, strips=strips, ambiguous=ambiguous,
                                  min_projection_mass=float(best.min()) if best.size else None)
        if complex_.dimension >= 2:
            gamma_profile = measure_gamma(complex_)
            profile.gamma = gamma_profile.gamma
            profile.gamma_witness = gamma_profile.gamma_witness
        return profile

    return complex_.cached(key, build) if key is not None else build()


def st_rank(complex_: SimplicialComplex, walk: Union[WalkSpec, LinearMap], delta: float) -> int:
    """Number of strip centers strictly above delta."""
    return sum(1 for center in approximate_eigenvalues(complex_, walk).centers() if center > delta)


def link_expansion_profile(complex_: SimplicialComplex, walk: WalkSpec) -> Dict[str, object]:
    """Phi(X_tau) against 1 - lambda_i(M) for every link at levels 0..k."""
    k = walk.level
    profile = approximate_eigenvalues(complex_, walk)
    gamma = gamma_or_zero(complex_)
    rows: List[Dict[str, object]] = []
    for i in range(k + 1):
        center = profile.center_of(i)
        if center is None:
            raise InfeasibleParametersError(f"Strip {i} of {walk.name} is empty; link expansion undefined")
        for tau in complex_.faces(i):
            phi = edge_expansion(link_indicator(complex_, k, tau), walk)
            rows.append({"face": list(tau), "level": i, "expansion": phi,
                         "predicted": 1.0 - center, "deviation": abs(phi - (1.0 - center))})
    worst = max(row["deviation"] for row in rows)
    return {
        "walk": walk.name,
        "gamma": gamma,
        "max_deviation": worst,
        "fitted_constant": worst / gamma if gamma > 0 else None,
        "links": rows,
    }


def projection_masses(complex_: SimplicialComplex, f: FaceFunction) -> List[float]:
    """Share of ||f||^2 in each V^i_k (orthogonal projection per space)."""
    pi = complex_.measure(f.level)
    spaces = level_set_spaces(complex_, f.level)
    vector = np.sqrt(pi) * f.values
    total = float(vector @ vector)
    if total == 0.0:
        return [0.0] * (f.level + 1)
    return [float(np.sum((spaces.orthonormal_lift(i, pi).T @ vector) ** 2)) / total for i in range(f.level + 1)]
