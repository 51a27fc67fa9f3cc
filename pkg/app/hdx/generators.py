"""Standard complexes and test functions.

- complete complex on n vertices
- hypercube complex (complete n-partite complex with parts {(i,0),(i,1)})
- anti-tribes function on the complete complex
- random weighted complexes and random/sparse/link/dictator functions
"""
import itertools
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .complex import Face, FaceFunction, SimplicialComplex, build_from_top_faces, canonical_face
from .errors import ComplexError, InfeasibleParametersError, LevelError

logger = logging.getLogger(__name__)


def make_rng(seed: Optional[int]) -> np.random.Generator:
    """Counter-based generator used for every stochastic routine."""
    return np.random.Generator(np.random.Philox(seed))


# ===== COMPLEXES =====


def generate_complete_complex(n: int, d: int, *, max_faces: Optional[int] = None) -> SimplicialComplex:
    if n < 1 or d < 0 or d > n:
        raise InfeasibleParametersError(f"Complete complex needs 0 <= d <= n and n >= 1, got n={n}, d={d}")
    return build_from_top_faces(((face, 1.0) for face in itertools.combinations(range(n), d)), d,
                                max_faces=max_faces)


def hypercube_vertex(coordinate: int, bit: int) -> int:
    """Vertex id of (coordinate, bit), coordinates counted from 1."""
    if coordinate < 1 or bit not in (0, 1):
        raise ComplexError(f"Invalid hypercube vertex ({coordinate}, {bit})")
    return 2 * (coordinate - 1) + bit


def hypercube_label(vertex: int) -> Tuple[int, int]:
    return vertex // 2 + 1, vertex % 2


def hypercube_face(point: Sequence[int]) -> Face:
    """Top face of the hypercube complex for x in {0,1}^n."""
    return tuple(hypercube_vertex(i + 1, int(b)) for i, b in enumerate(point))


def hypercube_point(face: Sequence[int]) -> Tuple[int, ...]:
    labels = sorted(hypercube_label(v) for v in face)
    if [c for c, _ in labels] != list(range(1, len(labels) + 1)):
        raise ComplexError(f"Face {list(face)} is not a hypercube top face")
    return tuple(b for _, b in labels)


def generate_hypercube_complex(n: int, *, max_faces: Optional[int] = None) -> SimplicialComplex:
    if n < 1:
        raise InfeasibleParametersError(f"Hypercube complex needs n >= 1, got {n}")
    points = itertools.product((0, 1), repeat=n)
    return build_from_top_faces(((hypercube_face(x), 1.0) for x in points), n, max_faces=max_faces)


def random_weighted_complex(n: int, d: int, num_faces: int, seed: Optional[int] = None,
                            *, max_faces: Optional[int] = None) -> SimplicialComplex:
    """Random distinct d-subsets of [n] with weights uniform on [0.1, 1]."""
    total = math.comb(n, d)
    if d > n or num_faces < 1 or num_faces > total:
        raise InfeasibleParametersError(f"Cannot draw {num_faces} distinct {d}-faces from {n} vertices")
    rng = make_rng(seed)
    chosen = set()
    while len(chosen) < num_faces:
        chosen.add(tuple(sorted(int(v) for v in rng.choice(n, size=d, replace=False))))
    faces = sorted(chosen)
    weights = rng.uniform(0.1, 1.0, size=len(faces))
    return build_from_top_faces(zip(faces, weights), d, max_faces=max_faces)


# ===== FUNCTIONS =====


def constant_function(complex_: SimplicialComplex, k: int, value: float = 1.0) -> FaceFunction:
    return FaceFunction.constant(complex_, k, value)


def random_real_function(complex_: SimplicialComplex, k: int, seed: Optional[int] = None) -> FaceFunction:
    return FaceFunction(complex_, k, make_rng(seed).standard_normal(complex_.size(k)))


def random_sparse_function(complex_: SimplicialComplex, k: int, alpha: float,
                           seed: Optional[int] = None) -> FaceFunction:
    """Boolean f with exactly max(1, round(alpha |X(k)|)) ones at uniformly random faces."""
    if not 0.0 < alpha <= 1.0:
        raise InfeasibleParametersError(f"Density alpha must lie in (0, 1], got {alpha}")
    size = complex_.size(k)
    ones = min(size, max(1, int(round(alpha * size))))
    values = np.zeros(size)
    values[make_rng(seed).choice(size, size=ones, replace=False)] = 1.0
    return FaceFunction(complex_, k, values)


def link_indicator(complex_: SimplicialComplex, k: int, tau: Sequence[int]) -> FaceFunction:
    """1 on the k-faces containing tau."""
    tau = canonical_face(tau)
    complex_.index_of(tau)
    if len(tau) > k:
        raise LevelError(f"Link anchor of level {len(tau)} exceeds function level {k}")
    anchor = set(tau)
    values = np.array([1.0 if anchor.issubset(face) else 0.0 for face in complex_.faces(k)])
    return FaceFunction(complex_, k, values)


def dictator(complex_: SimplicialComplex, bit: int, value: int = 1) -> FaceFunction:
    """On the hypercube complex: f(x) = 1 iff x_bit == value (bit counted from 1)."""
    target = hypercube_vertex(bit, value)
    k = complex_.dimension
    return FaceFunction(complex_, k, np.array([1.0 if target in face else 0.0 for face in complex_.faces(k)]))


# ===== ANTI-TRIBES =====


def anti_tribes_tribes(n: int, k: int, K: float, c: float, c1: float) -> List[Tuple[int, ...]]:
    """m = round(2cK) consecutive blocks of size ceil(c1 n / k) from [n]."""
    m = int(round(2 * c * K))
    size = math.ceil(c1 * n / k) if m else 0
    if m < 0 or (m and size < 1):
        raise InfeasibleParametersError(f"Tribes need positive size, got m={m}, size={size}")
    if m * size > n:
        raise InfeasibleParametersError(f"{m} tribes of size {size} do not fit in {n} vertices")
    if m > k:
        raise InfeasibleParametersError(f"A {k}-face cannot meet {m} disjoint tribes")
    return [tuple(range(t * size, (t + 1) * size)) for t in range(m)]


def anti_tribes_function(complex_: SimplicialComplex, k: int, tribes: Sequence[Sequence[int]]) -> FaceFunction:
    """f(S) = 1 iff S meets every tribe."""
    tribe_sets = [set(t) for t in tribes]
    values = np.array([
        1.0 if all(not tribe.isdisjoint(face) for tribe in tribe_sets) else 0.0
        for face in complex_.faces(k)
    ])
    return FaceFunction(complex_, k, values)


def generate_anti_tribes(n: int, k: int, K: float, c: float, c1: float, *,
                         tribes: Optional[Sequence[Sequence[int]]] = None,
                         max_faces: Optional[int] = None) -> Tuple[SimplicialComplex, FaceFunction]:
    """Complete complex of dimension k on [n] with the anti-tribes function."""
    if tribes is None:
        tribes = anti_tribes_tribes(n, k, K, c, c1)
    else:
        used = [v for t in tribes for v in t]
        if len(set(used)) != len(used) or any(v < 0 or v >= n for v in used):
            raise InfeasibleParametersError("Tribes must be disjoint subsets of [n]")
    complex_ = generate_complete_complex(n, k, max_faces=max_faces)
    logger.debug("Anti-tribes on n=%d, k=%d with %d tribes", n, k, len(tribes))
    return complex_, anti_tribes_function(complex_, k, tribes)
