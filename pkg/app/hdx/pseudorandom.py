"""(eps, i)-pseudorandomness: sparsity of f across all i-links.

eps_mean = max_tau |E_{X_tau}[f]| / ||f||_inf and
eps_sq = max_tau <f|_tau, f|_tau> / ||f||_inf^2, over tau in X(i).
Both link statistics are D^k_i applied to f and f^2.
"""
import logging
from typing import List

import numpy as np

from .complex import FaceFunction
from .errors import LevelError
from .models import PseudorandomnessReport
from .operators import link_expectation

logger = logging.getLogger(__name__)


def link_statistics(f: FaceFunction, i: int) -> PseudorandomnessReport:
    """Same as pseudorandomness but also defined for i = k (every k-link is a point)."""
    if not 0 <= i <= f.level:
        raise LevelError(f"Link level {i} outside 0..{f.level}")
    sup = f.norm(np.inf)
    if sup == 0.0:
        return PseudorandomnessReport(level=i, epsilon_mean=0.0, epsilon_sq=0.0, epsilon=0.0, sup_norm=0.0)
    means = np.abs(link_expectation(f, i).values) / sup
    squares = link_expectation(f.with_values(f.values ** 2), i).values / sup ** 2
    mean_arg, sq_arg = int(np.argmax(means)), int(np.argmax(squares))
    eps_mean, eps_sq = float(means[mean_arg]), float(squares[sq_arg])
    witness_rank = mean_arg if eps_mean >= eps_sq else sq_arg
    return PseudorandomnessReport(
        level=i,
        epsilon_mean=eps_mean,
        epsilon_sq=eps_sq,
        epsilon=max(eps_mean, eps_sq),
        witness=f.complex.faces(i)[witness_rank],
        sup_norm=sup,
    )


def pseudorandomness(f: FaceFunction, i: int) -> PseudorandomnessReport:
    if not 0 <= i < f.level:
        raise LevelError(f"Pseudorandomness needs 0 <= i < k, got i={i}, k={f.level}")
    return link_statistics(f, i)


def pseudorandomness_profile(f: FaceFunction) -> List[PseudorandomnessReport]:
    return [link_statistics(f, i) for i in range(f.level)]
