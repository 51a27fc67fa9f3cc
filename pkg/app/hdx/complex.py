"""Weighted pure simplicial complexes.

Faces are strictly increasing tuples of non-negative vertex ids; the
level of a face is its number of vertices, so X(0) = {()}. Inside a
level, a face's index is its lexicographic rank. The measure pi_d is
the normalized top-face weight and lower levels follow the downward
recurrence pi_i(x) = 1/(i+1) * sum_{y > x} pi_{i+1}(y).
"""
import hashlib
import logging
import math
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
import scipy.sparse as sp

from .config import get_settings
from .errors import ComplexError, ComplexTooLargeError, FaceNotFoundError, LevelError, NumericalError

logger = logging.getLogger(__name__)

Face = Tuple[int, ...]
TopFace = Tuple[Sequence[int], float]


def canonical_face(vertices: Iterable[int]) -> Face:
    """Sorted, duplicate-free tuple of non-negative ints."""
    items = []
    for v in vertices:
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
            raise ComplexError(f"Vertex ids must be integers, got {v!r}")
        if v < 0:
            raise ComplexError(f"Vertex ids must be non-negative, got {v}")
        items.append(int(v))
    face = tuple(sorted(items))
    if len(set(face)) != len(face):
        raise ComplexError(f"Face {list(face)} repeats a vertex")
    return face


def _read_only(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """Immutable weighted pure complex; build it with build_from_top_faces."""

    dimension: int
    levels: Tuple[Tuple[Face, ...], ...]
    pi: Tuple[np.ndarray, ...]
    raw_weights: Tuple[float, ...]
    uid: str
    _index: Tuple[Dict[Face, int], ...] = field(repr=False)
    _incidence: Tuple[sp.csr_matrix, ...] = field(repr=False)
    _cache: Dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    # ----- sizes and lookup -----

    def _check_level(self, level: int) -> None:
        if not 0 <= level <= self.dimension:
            raise LevelError(f"Level {level} outside 0..{self.dimension}")

    def faces(self, level: int) -> Tuple[Face, ...]:
        self._check_level(level)
        return self.levels[level]

    def size(self, level: int) -> int:
        self._check_level(level)
        return len(self.levels[level])

    @property
    def total_faces(self) -> int:
        return sum(len(level) for level in self.levels)

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(face[0] for face in self.levels[1]) if self.dimension >= 1 else ()

    @property
    def top_faces(self) -> Tuple[Face, ...]:
        return self.levels[self.dimension]

    def measure(self, level: int) -> np.ndarray:
        self._check_level(level)
        return self.pi[level]

    def contains(self, face: Sequence[int]) -> bool:
        face = tuple(face)
        return len(face) <= self.dimension and face in self._index[len(face)]

    def index_of(self, face: Sequence[int]) -> int:
        face = canonical_face(face)
        if len(face) > self.dimension or face not in self._index[len(face)]:
            raise FaceNotFoundError(face, len(face))
        return self._index[len(face)][face]

    def incidence(self, level: int) -> sp.csr_matrix:
        """0/1 matrix of shape |X(level)| x |X(level+1)|, entry 1 when row face is inside column face."""
        if not 0 <= level < self.dimension:
            raise LevelError(f"No incidence between levels {level} and {level + 1}")
        return self._incidence[level]

    def cofaces(self, face: Sequence[int]) -> Tuple[Face, ...]:
        face = canonical_face(face)
        level = len(face)
        if level == self.dimension:
            return ()
        row = self._incidence[level].getrow(self.index_of(face))
        return tuple(self.levels[level + 1][j] for j in sorted(row.indices))

    def subfaces(self, face: Sequence[int]) -> Tuple[Face, ...]:
        face = canonical_face(face)
        self.index_of(face)
        return tuple(face[:i] + face[i + 1:] for i in range(len(face)))

    def cached(self, key, build):
        """Per-complex memo shared by links, operators and spectra."""
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        value = build()
        with self._lock:
            return self._cache.setdefault(key, value)

    # ----- invariants -----

    def closure_residual(self) -> float:
        """Max deviation between stored pi_i and the recurrence applied to pi_{i+1}."""
        worst = 0.0
        for i in range(self.dimension):
            recomputed = self._incidence[i] @ self.pi[i + 1] / (i + 1)
            worst = max(worst, float(np.max(np.abs(recomputed - self.pi[i]))))
        return worst

    def __repr__(self) -> str:
        sizes = ", ".join(str(len(level)) for level in self.levels)
        return f"SimplicialComplex(d={self.dimension}, sizes=[{sizes}], uid={self.uid[:12]})"


def _complex_uid(dimension: int, faces: Sequence[Face], weights: Sequence[float]) -> str:
    digest = hashlib.sha256(f"d={dimension}".encode())
    for face, weight in zip(faces, weights):
        digest.update(f"{face}:{weight:.17g};".encode())
    return digest.hexdigest()


def build_from_top_faces(top_faces: Iterable[TopFace], dimension: int, *,
                         max_faces: Optional[int] = None) -> SimplicialComplex:
    """Downward closure of weighted top faces of level `dimension`."""
    if dimension < 0:
        raise LevelError(f"Dimension must be non-negative, got {dimension}")
    cap = max_faces if max_faces is not None else get_settings().max_faces

    weights_by_face: Dict[Face, float] = {}
    for vertices, weight in top_faces:
        face = canonical_face(vertices)
        if len(face) != dimension:
            raise ComplexError(f"Top face {list(face)} has level {len(face)}, expected {dimension}")
        weight = float(weight)
        if not math.isfinite(weight) or weight <= 0:
            raise ComplexError(f"Top face {list(face)} has non-positive weight {weight}")
        if face in weights_by_face:
            raise ComplexError(f"Duplicate top face {list(face)}")
        weights_by_face[face] = weight
    if not weights_by_face:
        raise ComplexError("At least one top face is required")

    top = tuple(sorted(weights_by_face))
    raw = tuple(weights_by_face[f] for f in top)
    total = math.fsum(raw)
    levels: List[Tuple[Face, ...]] = [()] * (dimension + 1)
    pis: List[np.ndarray] = [np.empty(0)] * (dimension + 1)
    indices: List[Dict[Face, int]] = [dict() for _ in range(dimension + 1)]
    incidences: List[sp.csr_matrix] = [None] * dimension

    levels[dimension] = top
    indices[dimension] = {f: r for r, f in enumerate(top)}
    pis[dimension] = np.array([w / total for w in raw], dtype=float)
    count = len(top)
    if count > cap:
        raise ComplexTooLargeError(count, cap)

    for i in range(dimension - 1, -1, -1):
        upper = levels[i + 1]
        lower = sorted({y[:p] + y[p + 1:] for y in upper for p in range(len(y))})
        index = {f: r for r, f in enumerate(lower)}
        count += len(lower)
        if count > cap:
            raise ComplexTooLargeError(count, cap)
        rows, cols = [], []
        for col, y in enumerate(upper):
            for p in range(len(y)):
                rows.append(index[y[:p] + y[p + 1:]])
                cols.append(col)
        inc = sp.csr_matrix(
            (np.ones(len(rows)), (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))),
            shape=(len(lower), len(upper)),
        )
        levels[i] = tuple(lower)
        indices[i] = index
        incidences[i] = inc
        pis[i] = np.asarray(inc @ pis[i + 1]).ravel() / (i + 1)

    sum_tol = get_settings().sum_tol
    for i, pi in enumerate(pis):
        drift = abs(math.fsum(pi) - 1.0)
        if drift > sum_tol:
            raise NumericalError(f"pi_{i} sums to 1 only within {drift:.3g} (tolerance {sum_tol:g})")

    complex_ = SimplicialComplex(
        dimension=dimension,
        levels=tuple(levels),
        pi=tuple(_read_only(p) for p in pis),
        raw_weights=raw,
        uid=_complex_uid(dimension, top, raw),
        _index=tuple(indices),
        _incidence=tuple(incidences),
    )
    logger.debug("Built %r", complex_)
    return complex_


# ===== FACE FUNCTIONS =====


@dataclass(frozen=True, eq=False)
class FaceFunction:
    """Real function on X(level); values are indexed by face rank."""

    complex: SimplicialComplex
    level: int
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float).ravel()
        if self.level < 0 or self.level > self.complex.dimension:
            raise LevelError(f"Level {self.level} outside 0..{self.complex.dimension}")
        if values.shape[0] != self.complex.size(self.level):
            raise ComplexError(
                f"Function has {values.shape[0]} values but X({self.level}) has {self.complex.size(self.level)} faces"
            )
        if not np.all(np.isfinite(values)):
            raise ComplexError("Function values must be finite")
        object.__setattr__(self, "values", _read_only(values))

    @classmethod
    def constant(cls, complex_: SimplicialComplex, level: int, value: float = 1.0) -> "FaceFunction":
        return cls(complex_, level, np.full(complex_.size(level), float(value)))

    @classmethod
    def indicator(cls, complex_: SimplicialComplex, level: int, faces: Iterable[Sequence[int]]) -> "FaceFunction":
        values = np.zeros(complex_.size(level))
        for face in faces:
            face = canonical_face(face)
            if len(face) != level:
                raise LevelError(f"Face {list(face)} is not at level {level}")
            values[complex_.index_of(face)] = 1.0
        return cls(complex_, level, values)

    def with_values(self, values: np.ndarray) -> "FaceFunction":
        return FaceFunction(self.complex, self.level, values)

    @property
    def weights(self) -> np.ndarray:
        return self.complex.measure(self.level)

    def mean(self) -> float:
        return float(self.weights @ self.values)

    def variance(self) -> float:
        return self.norm(2) ** 2 - self.mean() ** 2

    def norm(self, p: float = 2) -> float:
        """Weighted l_p norm; p = inf gives the sup over faces."""
        if math.isinf(p):
            return float(np.max(np.abs(self.values))) if self.values.size else 0.0
        return float(self.weights @ np.abs(self.values) ** p) ** (1.0 / p)

    def is_boolean(self) -> bool:
        return bool(np.all((self.values == 0.0) | (self.values == 1.0)))

    def value_at(self, face: Sequence[int]) -> float:
        return float(self.values[self.complex.index_of(face)])

    def __add__(self, other: "FaceFunction") -> "FaceFunction":
        _check_compatible(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "FaceFunction") -> "FaceFunction":
        _check_compatible(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar: float) -> "FaceFunction":
        return self.with_values(self.values * float(scalar))

    __rmul__ = __mul__


def same_complex(a: SimplicialComplex, b: SimplicialComplex) -> bool:
    return a is b or a.uid == b.uid


def _check_compatible(f: FaceFunction, g: FaceFunction) -> None:
    if f.level != g.level:
        raise LevelError(f"Level mismatch: {f.level} vs {g.level}")
    if not same_complex(f.complex, g.complex):
        raise ComplexError("Functions live on different complexes")


def inner_product(f: FaceFunction, g: FaceFunction) -> float:
    """<f, g> = sum_tau pi_i(tau) f(tau) g(tau)."""
    _check_compatible(f, g)
    return float(f.weights @ (f.values * g.values))


# ===== LINKS =====


@dataclass(frozen=True, eq=False)
class LinkView:
    """Link X_tau with index maps back into the base complex.

    parent_index[j][r] is the index in X(j + |tau|) of sigma | tau for the
    r-th face sigma of X_tau(j); face_index[j][r] is the index of sigma
    itself in X(j).
    """

    base: SimplicialComplex
    anchor: Face
    complex: SimplicialComplex
    parent_index: Tuple[np.ndarray, ...]
    face_index: Tuple[np.ndarray, ...]

    def parent_face(self, face: Sequence[int]) -> Face:
        return tuple(sorted(set(face) | set(self.anchor)))


def link(complex_: SimplicialComplex, tau: Sequence[int]) -> LinkView:
    """Link of tau; |tau| may equal d, giving the 0-dimensional complex {()}."""
    tau = canonical_face(tau)
    complex_.index_of(tau)
    return complex_.cached(("link", tau), lambda: _build_link(complex_, tau))


def _build_link(complex_: SimplicialComplex, tau: Face) -> LinkView:
    d = complex_.dimension
    if not tau:
        identity = tuple(_read_only(np.arange(complex_.size(j))) for j in range(d + 1))
        return LinkView(complex_, tau, complex_, identity, identity)

    anchor = set(tau)
    top_pi = complex_.pi[d]
    tops = [
        (tuple(v for v in face if v not in anchor), top_pi[r])
        for r, face in enumerate(complex_.top_faces)
        if anchor.issubset(face)
    ]
    sub = build_from_top_faces(tops, d - len(tau))
    parent_index, face_index = [], []
    for j in range(sub.dimension + 1):
        parents = [complex_._index[j + len(tau)][tuple(sorted(sigma + tau))] for sigma in sub.levels[j]]
        own = [complex_._index[j][sigma] for sigma in sub.levels[j]]
        parent_index.append(_read_only(np.array(parents, dtype=np.int64)))
        face_index.append(_read_only(np.array(own, dtype=np.int64)))
    return LinkView(complex_, tau, sub, tuple(parent_index), tuple(face_index))


def restrict(f: FaceFunction, tau: Sequence[int]) -> FaceFunction:
    """f|_tau(sigma) = f(tau | sigma) on X_tau(k - |tau|)."""
    tau = canonical_face(tau)
    if len(tau) > f.level:
        raise LevelError(f"Cannot restrict a level-{f.level} function to a level-{len(tau)} face")
    if not tau:
        return f
    view = link(f.complex, tau)
    return FaceFunction(view.complex, f.level - len(tau), f.values[view.parent_index[f.level - len(tau)]])


def localize(f: FaceFunction, tau: Sequence[int]) -> FaceFunction:
    """Same values on X_tau(k) under the link measure."""
    tau = canonical_face(tau)
    if f.level + len(tau) > f.complex.dimension:
        raise LevelError(
            f"Localization needs k + |tau| <= d, got {f.level} + {len(tau)} > {f.complex.dimension}"
        )
    if not tau:
        return f
    view = link(f.complex, tau)
    return FaceFunction(view.complex, f.level, f.values[view.face_index[f.level]])


# ===== FILE FORMAT =====


def write_complex(complex_: SimplicialComplex, target: Union[str, Path, TextIO]) -> None:
    """Header `d n`, then one top face per line with its raw weight (17 significant digits)."""
    lines = [f"{complex_.dimension} {len(complex_.vertices)}"]
    for face, weight in zip(complex_.top_faces, complex_.raw_weights):
        lines.append(" ".join([*(str(v) for v in face), f"{weight:.17g}"]))
    text = "\n".join(lines) + "\n"
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8")
    else:
        target.write(text)


def read_complex(source: Union[str, Path, TextIO], *, max_faces: Optional[int] = None) -> SimplicialComplex:
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if not rows:
        raise ComplexError("Complex file is empty")
    try:
        dimension, n_vertices = int(rows[0][0]), int(rows[0][1])
        tops = [([int(v) for v in row[:-1]], float(row[-1])) for row in rows[1:]]
    except (IndexError, ValueError) as exc:
        raise ComplexError(f"Malformed complex file: {exc}") from exc
    complex_ = build_from_top_faces(tops, dimension, max_faces=max_faces)
    if len(complex_.vertices) != n_vertices:
        raise ComplexError(f"Header declares {n_vertices} vertices, faces use {len(complex_.vertices)}")
    return complex_


def write_function(f: FaceFunction, target: Union[str, Path, TextIO]) -> None:
    """Header `k count`, then `v_1 ... v_k value` per face in rank order."""
    lines = [f"{f.level} {f.values.size}"]
    for face, value in zip(f.complex.faces(f.level), f.values):
        lines.append(" ".join([*(str(v) for v in face), f"{value:.17g}"]))
    text = "\n".join(lines) + "\n"
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8")
    else:
        target.write(text)


def read_function(source: Union[str, Path, TextIO], complex_: SimplicialComplex) -> FaceFunction:
    """Faces missing from the file get 0."""
    text = Path(source).read_text(encoding="utf-8") if isinstance(source, (str, Path)) else source.read()
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if not rows:
        raise ComplexError("Function file is empty")
    try:
        level = int(rows[0][0])
        values = np.zeros(complex_.size(level))
        for row in rows[1:]:
            face = [int(v) for v in row[:-1]]
            if len(face) != level:
                raise LevelError(f"Face {face} is not at level {level}")
            values[complex_.index_of(face)] = float(row[-1])
    except (IndexError, ValueError) as exc:
        if isinstance(exc, ComplexError):
            raise
        raise ComplexError(f"Malformed function file: {exc}") from exc
    return FaceFunction(complex_, level, values)
