"""On-disk cache of abscissa weight tables, keyed by (N, table key).

Each entry is an ``.npz`` holding the weights and the SHA-256 of their bytes.
Entries that fail to load or verify are discarded and recomputed; the cache
never changes a result.
"""
from __future__ import annotations

import hashlib
import logging
import os
import tempfile
from pathlib import Path

import numpy as np

log = logging.getLogger(__name__)


def digest(a: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(a, dtype="<f8").tobytes()).hexdigest()


class TableCache:
    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.rejected = 0

    def path(self, N: int, key: str) -> Path:
        safe = key.replace(",", "_")
        return self.root / f"{safe}_N{N}.npz"

    def load(self, N: int, key: str) -> np.ndarray | None:
        path = self.path(N, key)
        if not path.exists():
            return None
        try:
            with np.load(path, allow_pickle=False) as z:
                w = np.array(z["weights"], dtype=np.float64)
                ok = (
                    int(z["N"]) == N
                    and str(z["key"]) == key
                    and w.shape == (N,)
                    and str(z["sha256"]) == digest(w)
                )
        except Exception as exc:  # unreadable or truncated file
            log.warning("discarding cache entry %s: %s", path, exc)
            ok = False
        if not ok:
            self.rejected += 1
            log.warning("cache entry %s failed verification; recomputing", path)
            return None
        self.hits += 1
        return w

    def store(self, N: int, key: str, weights: np.ndarray) -> None:
        path = self.path(N, key)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".npz.tmp")
        os.close(fd)
        with open(tmp, "wb") as fh:
            np.savez(fh, weights=weights, sha256=digest(weights), N=N, key=key)
        os.replace(tmp, path)

    def load_or_compute(self, N: int, key: str, compute) -> np.ndarray:
        w = self.load(N, key)
        if w is None:
            w = compute()
            self.store(N, key, w)
        return w
