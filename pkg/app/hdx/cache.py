"""On-disk store for single-step operator matrices (HDX_CACHE_DIR).

Matrices are keyed by the complex content hash, so a complex rebuilt
from the same top faces and weights reuses earlier work.
"""
import logging
import threading
from pathlib import Path
from typing import Optional

import scipy.sparse as sp

from .config import get_settings

logger = logging.getLogger(__name__)


class OperatorStore:
    """Single-writer npz store; reads are lock-free."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._write_lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def _path(self, uid: str, name: str) -> Path:
        return self.root / uid[:2] / f"{uid}_{name}.npz"

    def load(self, uid: str, name: str) -> Optional[sp.csr_matrix]:
        path = self._path(uid, name)
        if not path.exists():
            self.misses += 1
            return None
        try:
            matrix = sp.load_npz(path).tocsr()
        except (OSError, ValueError) as exc:
            logger.warning("Discarding unreadable cache entry %s: %s", path, exc)
            self.misses += 1
            return None
        self.hits += 1
        return matrix

    def save(self, uid: str, name: str, matrix: sp.spmatrix) -> None:
        path = self._path(uid, name)
        with self._write_lock:
            if path.exists():
                return
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_name(path.stem + ".tmp.npz")
            sp.save_npz(tmp, sp.csr_matrix(matrix))
            tmp.replace(path)
        logger.debug("Cached operator %s", path.name)


_store: Optional[OperatorStore] = None
_store_lock = threading.Lock()


def get_store() -> Optional[OperatorStore]:
    """Global store for the configured cache dir, or None when caching is off."""
    global _store
    cache_dir = get_settings().cache_dir
    if cache_dir is None:
        return None
    with _store_lock:
        if _store is None or _store.root != Path(cache_dir):
            _store = OperatorStore(Path(cache_dir))
        return _store
