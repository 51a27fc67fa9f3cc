"""Averaging-operator algebra on a weighted complex.

U_k: C_k -> C_{k+1} averages over subfaces, D_{k+1}: C_{k+1} -> C_k
averages over cofaces under pi_{k+1}. Everything else (walks, swap
walks, T_rho, the Laplacian, Gamma, the commutation residual) is built
from these two matrices. Walk words are written in operator order: the
rightmost letter acts first, so "UD" is the lower walk.
"""
import logging
import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Optional, Sequence, TextIO, Tuple, Union

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .cache import get_store
from .complex import FaceFunction, SimplicialComplex, canonical_face, localize, restrict, same_complex
from .config import get_settings
from .errors import (
    ComplexError,
    ConfigurationError,
    InfeasibleParametersError,
    LevelError,
    SwapWalkError,
    WalkValidationError,
)
from .generators import hypercube_point

logger = logging.getLogger(__name__)

Matrix = Union[np.ndarray, sp.spmatrix]


def _normalize_matrix(matrix: Matrix) -> Matrix:
    """Dense below the configured face threshold, CSR above."""
    if sp.issparse(matrix):
        if max(matrix.shape) < get_settings().dense_threshold:
            return matrix.toarray()
        return matrix.tocsr()
    return np.asarray(matrix, dtype=float)


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Operator C_source -> C_target; matrix is |X(target)| x |X(source)|."""

    complex: SimplicialComplex
    source_level: int
    target_level: int
    matrix: Matrix

    def __post_init__(self):
        matrix = _normalize_matrix(self.matrix)
        expected = (self.complex.size(self.target_level), self.complex.size(self.source_level))
        if matrix.shape != expected:
            raise LevelError(f"Matrix shape {matrix.shape} does not match levels, expected {expected}")
        data = matrix.data if sp.issparse(matrix) else matrix
        if not np.all(np.isfinite(data)):
            raise ComplexError("Operator has non-finite entries")
        object.__setattr__(self, "matrix", matrix)

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.matrix)

    def dense(self) -> np.ndarray:
        return self.matrix.toarray() if self.is_sparse else self.matrix

    def apply(self, f: FaceFunction) -> FaceFunction:
        if f.level != self.source_level or not same_complex(f.complex, self.complex):
            raise LevelError(f"Operator acts on level {self.source_level}, got a level-{f.level} function")
        return FaceFunction(self.complex, self.target_level, np.asarray(self.matrix @ f.values).ravel())

    __call__ = apply

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        """self o other (other acts first)."""
        if other.target_level != self.source_level:
            raise LevelError(f"Cannot compose level {other.target_level} output with level {self.source_level} input")
        return LinearMap(self.complex, other.source_level, self.target_level, self.matrix @ other.matrix)

    def _same_shape(self, other: "LinearMap") -> None:
        if (self.source_level, self.target_level) != (other.source_level, other.target_level):
            raise LevelError("Operators act between different levels")

    def __add__(self, other: "LinearMap") -> "LinearMap":
        self._same_shape(other)
        return LinearMap(self.complex, self.source_level, self.target_level, self.matrix + other.matrix)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        self._same_shape(other)
        return LinearMap(self.complex, self.source_level, self.target_level, self.matrix - other.matrix)

    def __mul__(self, scalar: float) -> "LinearMap":
        return LinearMap(self.complex, self.source_level, self.target_level, self.matrix * float(scalar))

    __rmul__ = __mul__

    def row(self, face: Sequence[int]) -> np.ndarray:
        index = self.complex.index_of(face)
        row = self.matrix[index]
        return row.toarray().ravel() if sp.issparse(row) else np.asarray(row).ravel()

    def weighted_matrix(self) -> Matrix:
        """diag(sqrt pi_target) M diag(1/sqrt pi_source): the operator in orthonormal coordinates."""
        left = np.sqrt(self.complex.measure(self.target_level))
        right = 1.0 / np.sqrt(self.complex.measure(self.source_level))
        if self.is_sparse:
            return sp.diags(left) @ self.matrix @ sp.diags(right)
        return left[:, None] * self.matrix * right[None, :]

    def norm(self) -> float:
        """Operator norm between the weighted l_2 spaces."""
        return _top_singular_value(self.weighted_matrix())

    def deflated_norm(self) -> float:
        """Norm after removing the stationary part 1 pi_source^T (second singular value for Markov maps)."""
        stationary = np.outer(np.ones(self.complex.size(self.target_level)), self.complex.measure(self.source_level))
        if self.is_sparse:
            return _top_singular_value(
                LinearMap(self.complex, self.source_level, self.target_level,
                          self.matrix.toarray() - stationary).weighted_matrix()
            )
        return (self - LinearMap(self.complex, self.source_level, self.target_level, stationary)).norm()


def _top_singular_value(matrix: Matrix) -> float:
    if min(matrix.shape) == 0:
        return 0.0
    if sp.issparse(matrix) and min(matrix.shape) > 2:
        return float(spla.svds(matrix, k=1, return_singular_vectors=False)[0])
    dense = matrix.toarray() if sp.issparse(matrix) else matrix
    return float(np.linalg.norm(dense, 2))


def identity_map(complex_: SimplicialComplex, level: int) -> LinearMap:
    return LinearMap(complex_, level, level, sp.identity(complex_.size(level), format="csr"))


# ===== SINGLE STEPS =====


def _stored(complex_: SimplicialComplex, name: str, build) -> sp.csr_matrix:
    store = get_store()
    if store is not None:
        hit = store.load(complex_.uid, name)
        if hit is not None:
            return hit
    matrix = build()
    if store is not None:
        store.save(complex_.uid, name, matrix)
    return matrix


def up_map(complex_: SimplicialComplex, k: int) -> LinearMap:
    """U_k: C_k -> C_{k+1}."""
    if not 0 <= k < complex_.dimension:
        raise LevelError(f"No up operator from level {k} in a complex of dimension {complex_.dimension}")

    def build() -> LinearMap:
        matrix = _stored(complex_, f"U{k}", lambda: (complex_.incidence(k).T / (k + 1)).tocsr())
        return LinearMap(complex_, k, k + 1, matrix)

    return complex_.cached(("U", k), build)


def down_map(complex_: SimplicialComplex, level: int) -> LinearMap:
    """D_level: C_level -> C_{level-1}."""
    if not 1 <= level <= complex_.dimension:
        raise LevelError(f"No down operator from level {level}")

    def build_matrix() -> sp.csr_matrix:
        pi_low = complex_.measure(level - 1)
        pi_high = complex_.measure(level)
        inc = complex_.incidence(level - 1)
        return (sp.diags(1.0 / (level * pi_low)) @ inc @ sp.diags(pi_high)).tocsr()

    def build() -> LinearMap:
        return LinearMap(complex_, level, level - 1, _stored(complex_, f"D{level}", build_matrix))

    return complex_.cached(("D", level), build)


def up(f: FaceFunction) -> FaceFunction:
    return up_map(f.complex, f.level).apply(f)


def down(f: FaceFunction) -> FaceFunction:
    return down_map(f.complex, f.level).apply(f)


def compose_up(complex_: SimplicialComplex, i: int, k: int) -> LinearMap:
    """U^k_i = U_{k-1} o ... o U_i : C_i -> C_k."""
    if i > k:
        raise LevelError(f"compose_up needs i <= k, got i={i}, k={k}")
    if k > complex_.dimension or i < 0:
        raise LevelError(f"Levels {i}..{k} outside 0..{complex_.dimension}")

    def build() -> LinearMap:
        result = identity_map(complex_, i)
        for level in range(i, k):
            result = up_map(complex_, level) @ result
        return result

    return complex_.cached(("Uc", i, k), build)


def compose_down(complex_: SimplicialComplex, k: int, i: int) -> LinearMap:
    """D^k_i = D_{i+1} o ... o D_k : C_k -> C_i."""
    if i > k:
        raise LevelError(f"compose_down needs i <= k, got k={k}, i={i}")
    if k > complex_.dimension or i < 0:
        raise LevelError(f"Levels {i}..{k} outside 0..{complex_.dimension}")

    def build() -> LinearMap:
        result = identity_map(complex_, k)
        for level in range(k, i, -1):
            result = down_map(complex_, level) @ result
        return result

    return complex_.cached(("Dc", k, i), build)


def link_expectation(f: FaceFunction, i: int) -> FaceFunction:
    """tau -> E_{X_tau}[f] for tau in X(i), i.e. D^k_i f."""
    return compose_down(f.complex, f.level, i).apply(f)


# ===== WALK SPECS =====


@dataclass(frozen=True)
class WalkSpec:
    """Linear combination of pure U/D words fixing `level`."""

    level: int
    terms: Tuple[Tuple[float, str], ...]
    name: str = ""

    def __post_init__(self):
        terms = tuple((float(alpha), str(word).upper()) for alpha, word in self.terms)
        if not terms:
            raise InfeasibleParametersError("A walk needs at least one term")
        for _, word in terms:
            if set(word) - {"U", "D"}:
                raise InfeasibleParametersError(f"Walk word {word!r} may only use U and D")
            level = self.level
            for letter in reversed(word):
                level += 1 if letter == "U" else -1
                if level < 0:
                    raise InfeasibleParametersError(f"Walk word {word!r} descends below level 0")
            if level != self.level:
                raise InfeasibleParametersError(f"Walk word {word!r} does not return to level {self.level}")
        object.__setattr__(self, "terms", terms)

    @property
    def weight(self) -> float:
        return sum(abs(alpha) for alpha, _ in self.terms)

    @property
    def height(self) -> int:
        return max(len(word) // 2 for _, word in self.terms)

    @classmethod
    def identity(cls, level: int) -> "WalkSpec":
        return cls(level, ((1.0, ""),), name="identity")

    def scaled(self, alpha: float) -> "WalkSpec":
        return WalkSpec(self.level, tuple((alpha * a, w) for a, w in self.terms), self.name)

    def __add__(self, other: "WalkSpec") -> "WalkSpec":
        if other.level != self.level:
            raise LevelError("Walks act on different levels")
        return WalkSpec(self.level, self.terms + other.terms)

    def mix(self, other: "WalkSpec", t: float) -> "WalkSpec":
        """(1 - t) self + t other."""
        return self.scaled(1.0 - t) + other.scaled(t)


def canonical_walk(k: int, i: int) -> WalkSpec:
    """N_k^i: lift i levels through a shared (k+i)-face, then lower back."""
    return WalkSpec(k, ((1.0, "D" * i + "U" * i),), name=f"N_{k}^{i}")


def upper_walk(k: int) -> WalkSpec:
    return canonical_walk(k, 1)


def lower_walk(k: int) -> WalkSpec:
    if k < 1:
        raise LevelError("The lower walk needs level >= 1")
    return WalkSpec(k, ((1.0, "UD"),), name=f"UD_{k}")


def noise_operator(k: int, rho: float) -> WalkSpec:
    """T_rho = sum_i C(k,i) (1-rho)^i rho^(k-i) U^k_{k-i} D^k_{k-i}."""
    if not 0.0 <= rho <= 1.0:
        raise InfeasibleParametersError(f"Noise rate rho must lie in [0, 1], got {rho}")
    terms = tuple(
        (float(math.comb(k, i)) * (1.0 - rho) ** i * rho ** (k - i), "U" * i + "D" * i)
        for i in range(k + 1)
    )
    return WalkSpec(k, terms, name=f"T_{rho:g}")


def nonlazy_hypercube_walk(k: int) -> WalkSpec:
    """2 UD - I; stochastic on the hypercube complex, where UD is lazy."""
    return WalkSpec(k, ((2.0, "UD"), (-1.0, "")), name="hypercube")


def word_map(complex_: SimplicialComplex, level: int, word: str) -> LinearMap:
    def build() -> LinearMap:
        result = identity_map(complex_, level)
        current = level
        for letter in reversed(word):
            if letter == "U":
                result = up_map(complex_, current) @ result
                current += 1
            else:
                result = down_map(complex_, current) @ result
                current -= 1
        return result

    return complex_.cached(("word", level, word), build)


def assemble_walk(complex_: SimplicialComplex, spec: WalkSpec, *, validate: bool = True) -> LinearMap:
    """Sum of alpha * word; rejects non-stochastic or non-self-adjoint results."""
    if spec.level > complex_.dimension:
        raise LevelError(f"Walk level {spec.level} exceeds dimension {complex_.dimension}")

    def build() -> LinearMap:
        total = None
        for alpha, word in spec.terms:
            term = word_map(complex_, spec.level, word) * alpha
            total = term if total is None else total + term
        return total

    walk = complex_.cached(("walk", spec.level, spec.terms), build)
    if validate:
        validate_walk(walk)
    return walk


def validate_walk(walk: LinearMap, tol: Optional[float] = None) -> None:
    tol = get_settings().walk_tol if tol is None else tol
    matrix = walk.matrix
    row_error = float(np.max(np.abs(np.asarray(matrix.sum(axis=1)).ravel() - 1.0)))
    pi = walk.complex.measure(walk.source_level)
    weighted = sp.diags(pi) @ matrix if walk.is_sparse else pi[:, None] * matrix
    asym = weighted - weighted.T
    adjoint_error = float(abs(asym).max()) if asym.shape[0] else 0.0
    min_entry = float(matrix.min()) if matrix.shape[0] else 0.0
    if row_error > tol or min_entry < -tol:
        raise WalkValidationError(
            f"Walk is not row-stochastic (row sum error {row_error:.2e}, min entry {min_entry:.2e})",
            row_sum_error=row_error, adjoint_error=adjoint_error,
        )
    if adjoint_error > tol:
        raise WalkValidationError(
            f"Walk is not self-adjoint w.r.t. pi (error {adjoint_error:.2e})",
            row_sum_error=row_error, adjoint_error=adjoint_error,
        )


def as_walk(complex_: SimplicialComplex, walk: Union[WalkSpec, LinearMap]) -> LinearMap:
    return assemble_walk(complex_, walk) if isinstance(walk, WalkSpec) else walk


def walk_apply(spec: WalkSpec, f: FaceFunction) -> FaceFunction:
    if spec.level != f.level:
        raise LevelError(f"Walk acts on level {spec.level}, function is at level {f.level}")
    return assemble_walk(f.complex, spec).apply(f)


# ===== RECTANGULAR / SWAP WALKS =====


def rectangular_canonical(complex_: SimplicialComplex, i: int, j: int) -> LinearMap:
    """N_{i,j} = D^{i+j}_i U^{i+j}_j : C_j -> C_i."""
    if i + j > complex_.dimension:
        raise LevelError(f"Rectangular walk needs i + j <= d, got {i} + {j} > {complex_.dimension}")
    return compose_down(complex_, i + j, i) @ compose_up(complex_, j, i + j)


def swap_walk(complex_: SimplicialComplex, i: int, j: int) -> LinearMap:
    """S_{i,j}: N_{i,j} restricted to disjoint pairs and renormalized; C_j -> C_i."""
    if i < 0 or j < 0 or i + j > complex_.dimension:
        raise LevelError(f"Swap walk needs i + j <= d, got {i} + {j} > {complex_.dimension}")

    def build() -> LinearMap:
        pi_i = complex_.measure(i)
        pi_top = complex_.measure(i + j)
        split = math.comb(i + j, i)
        choose_j = math.comb(i + j, j)
        rows, cols, mass = [], [], []
        for r, face in enumerate(complex_.faces(i + j)):
            for positions in combinations(range(i + j), i):
                tau = tuple(face[p] for p in positions)
                sigma = tuple(v for p, v in enumerate(face) if p not in positions)
                row = complex_.index_of(tau)
                rows.append(row)
                cols.append(complex_.index_of(sigma))
                mass.append(pi_top[r] / (split * pi_i[row]) / choose_j)
        matrix = sp.csr_matrix((mass, (rows, cols)), shape=(complex_.size(i), complex_.size(j)))
        sums = np.asarray(matrix.sum(axis=1)).ravel()
        empty = np.flatnonzero(sums <= 0)
        if empty.size:
            raise SwapWalkError([complex_.faces(i)[r] for r in empty])
        return LinearMap(complex_, j, i, sp.diags(1.0 / sums) @ matrix)

    return complex_.cached(("S", i, j), build)


def swap_walk_second_singular_value(complex_: SimplicialComplex, i: int, j: int) -> float:
    value = swap_walk(complex_, i, j).deflated_norm()
    logger.debug("lambda(S_%d,%d) = %.6g", i, j, value)
    return value


# ===== LAPLACIAN / INFLUENCE / STABILITY / EXPANSION =====


def laplacian(complex_: SimplicialComplex, k: int) -> LinearMap:
    """L_UD = k (I - U_{k-1} D_k)."""
    if k < 1:
        raise LevelError("The Laplacian needs level >= 1")
    return (identity_map(complex_, k) - assemble_walk(complex_, lower_walk(k))) * k


def influence(f: FaceFunction) -> float:
    return float(f.weights @ (f.values * laplacian(f.complex, f.level).apply(f).values))


def stability(f: FaceFunction, rho: float) -> float:
    noisy = assemble_walk(f.complex, noise_operator(f.level, rho)).apply(f)
    return float(f.weights @ (f.values * noisy.values))


def edge_expansion(S: FaceFunction, walk: Union[WalkSpec, LinearMap]) -> float:
    """Phi(S) = 1 - <1_S, M 1_S> / E[1_S]."""
    if not S.is_boolean():
        raise InfeasibleParametersError("Edge expansion needs a Boolean set indicator")
    density = S.mean()
    if density <= 0:
        raise InfeasibleParametersError("Edge expansion of an empty set is undefined")
    M = as_walk(S.complex, walk)
    if M.source_level != S.level:
        raise LevelError(f"Walk acts on level {M.source_level}, set lives at level {S.level}")
    return 1.0 - float(S.weights @ (S.values * M.apply(S).values)) / density


# ===== LOCALIZATION =====


def localization_gamma(complex_: SimplicialComplex, i: int, j: int) -> LinearMap:
    """Gamma = S_{j,i} - U^j_0 D^i_0 : C_i -> C_j."""
    swap = swap_walk(complex_, j, i)
    mean = np.outer(np.ones(complex_.size(j)), complex_.measure(i))
    return LinearMap(complex_, i, j, swap.dense() - mean)


def localization_sides(f: FaceFunction, tau: Sequence[int]) -> Tuple[float, float]:
    """(E_{X_tau}[f localized] - E[f], (Gamma f)(tau))."""
    tau = canonical_face(tau)
    lhs = localize(f, tau).mean() - f.mean()
    gamma = localization_gamma(f.complex, f.level, len(tau))
    rhs = float(gamma.row(tau) @ f.values)
    return lhs, rhs


def localization_residual(f: FaceFunction, tau: Sequence[int]) -> float:
    lhs, rhs = localization_sides(f, tau)
    return abs(lhs - rhs)


# ===== COMMUTATION RESIDUAL =====


def ddfh_residual(complex_: SimplicialComplex, i: int, j: int) -> Tuple[LinearMap, float]:
    """E_{i,j} = D_i U^i_j - (j/i) U^{i-1}_{j-1} D_j - ((i-j)/i) U^{i-1}_j, for 1 <= j <= i <= d."""
    if not 1 <= j <= i <= complex_.dimension:
        raise LevelError(f"Commutation residual needs 1 <= j <= i <= d, got i={i}, j={j}")
    residual = down_map(complex_, i) @ compose_up(complex_, j, i)
    residual = residual - (compose_up(complex_, j - 1, i - 1) @ down_map(complex_, j)) * (j / i)
    if j < i:
        residual = residual - compose_up(complex_, j, i - 1) * ((i - j) / i)
    return residual, residual.norm()


# ===== GARLAND =====


def garland_check_restrict(f: FaceFunction, i: int) -> Tuple[float, float]:
    """(<f,f>, E_{tau in X(i)} <f|_tau, f|_tau>)."""
    if not 0 <= i <= f.level:
        raise LevelError(f"Restriction level {i} must lie in 0..{f.level}")
    pi = f.complex.measure(i)
    rhs = sum(pi[r] * restrict(f, tau).norm(2) ** 2 for r, tau in enumerate(f.complex.faces(i)))
    return f.norm(2) ** 2, float(rhs)


def garland_check_localize(f: FaceFunction, i: int) -> Tuple[float, float]:
    """(<f,f>, E_{tau in X(i)} <f_tau, f_tau> with f_tau localized)."""
    if i < 0 or f.level + i > f.complex.dimension:
        raise LevelError(f"Localization level {i} needs k + i <= d")
    pi = f.complex.measure(i)
    rhs = sum(pi[r] * localize(f, tau).norm(2) ** 2 for r, tau in enumerate(f.complex.faces(i)))
    return f.norm(2) ** 2, float(rhs)


# ===== HYPERCUBE ORACLES =====


def _hypercube_points(complex_: SimplicialComplex) -> np.ndarray:
    return np.array([hypercube_point(face) for face in complex_.top_faces], dtype=int)


def classical_noise_kernel(complex_: SimplicialComplex, rho: float) -> np.ndarray:
    """Prod_i ((1 + rho)/2 if x_i = y_i else (1 - rho)/2), rows/cols in top-face rank order."""
    points = _hypercube_points(complex_)
    n = points.shape[1]
    agree = n - (points[:, None, :] != points[None, :, :]).sum(axis=2)
    return ((1.0 + rho) / 2.0) ** agree * ((1.0 - rho) / 2.0) ** (n - agree)


def lazy_hypercube_walk(complex_: SimplicialComplex) -> np.ndarray:
    """Stay with probability 1/2, else flip a uniform coordinate."""
    points = _hypercube_points(complex_)
    n = points.shape[1]
    distance = (points[:, None, :] != points[None, :, :]).sum(axis=2)
    return np.where(distance == 0, 0.5, np.where(distance == 1, 1.0 / (2 * n), 0.0))


# ===== EXPORT =====


def export_matrix(operator: LinearMap, target: Union[str, Path, TextIO]) -> None:
    """Header `level_src level_dst rows cols nnz`, then `row col value` triples."""
    coo = sp.coo_matrix(operator.matrix)
    keep = coo.data != 0
    rows, cols, data = coo.row[keep], coo.col[keep], coo.data[keep]
    lines = [f"{operator.source_level} {operator.target_level} {coo.shape[0]} {coo.shape[1]} {len(data)}"]
    lines.extend(f"{r} {c} {v:.17g}" for r, c, v in zip(rows, cols, data))
    text = "\n".join(lines) + "\n"
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8")
    else:
        target.write(text)


def read_matrix(source: Union[str, Path, TextIO], complex_: SimplicialComplex) -> LinearMap:
    text = Path(source).read_text(encoding="utf-8") if isinstance(source, (str, Path)) else source.read()
    lines = [line.split() for line in text.splitlines() if line.strip()]
    if not lines:
        raise ConfigurationError("Matrix file is empty")
    try:
        src, dst, n_rows, n_cols, nnz = (int(x) for x in lines[0])
        entries = lines[1:1 + nnz]
        if len(entries) != nnz:
            raise ValueError(f"header declares {nnz} entries, found {len(entries)}")
        rows = [int(e[0]) for e in entries]
        cols = [int(e[1]) for e in entries]
        data = [float(e[2]) for e in entries]
        matrix = sp.csr_matrix((data, (rows, cols)), shape=(n_rows, n_cols))
    except (IndexError, ValueError) as exc:
        raise ConfigurationError(f"Malformed matrix file: {exc}") from exc
    return LinearMap(complex_, src, dst, matrix)
