"""Sentence-embedding matrices: loading, normalization, exact k-NN search.

Embedding files are header-less raw little-endian float32, row-major; the
row count is inferred from the file size and the declared dimension. Rows
are unit-normalized on load. All-zero rows (which real encoder dumps do
contain) are kept as zero and defined to have cosine 0 with everything, so
they can never be mined.

Search is exact brute force via matrix products; no approximate index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import ValidationError

# Query rows are processed in fixed-size blocks so results never depend on
# the worker count; workers only pick up pre-cut blocks.
_BLOCK_ROWS = 1024


@dataclass(frozen=True)
class EmbeddingMatrix:
    """Unit-normalized float64 row vectors plus the set of all-zero rows."""

    vectors: np.ndarray
    zero_rows: frozenset[int] = field(default_factory=frozenset)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def row(self, i: int) -> np.ndarray:
        return self.vectors[i]

    def slice(self, start: int, stop: int) -> "EmbeddingMatrix":
        """View of rows [start, stop) with zero-row indices rebased."""
        zeros = frozenset(i - start for i in self.zero_rows if start <= i < stop)
        return EmbeddingMatrix(self.vectors[start:stop], zeros)


def from_array(raw: np.ndarray) -> EmbeddingMatrix:
    """Normalize raw row vectors; zero rows stay zero and are recorded."""
    if raw.ndim != 2:
        raise ValidationError(f"expected a 2-d array, got shape {raw.shape}")
    vectors = np.asarray(raw, dtype=np.float64).copy()
    norms = np.linalg.norm(vectors, axis=1)
    zero = norms == 0.0
    nonzero = ~zero
    vectors[nonzero] /= norms[nonzero, None]
    return EmbeddingMatrix(vectors, frozenset(np.flatnonzero(zero).tolist()))


def load_embeddings(path, dim: int) -> EmbeddingMatrix:
    """Read a raw float32 dump with `dim` columns and unit-normalize it."""
    if dim <= 0:
        raise ValidationError(f"dimension must be positive, got {dim}")
    raw = np.fromfile(path, dtype="<f4")
    if raw.size % dim != 0:
        raise ValidationError(
            f"{path}: {raw.size * 4} bytes is not a multiple of 4*dim={4 * dim}"
        )
    return from_array(raw.reshape(-1, dim))


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Dot product of unit-normalized rows; zero rows score 0 with anything."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValidationError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return float(u @ v)


def similarity_matrix(queries: EmbeddingMatrix, keys: EmbeddingMatrix) -> np.ndarray:
    if queries.dim != keys.dim:
        raise ValidationError(f"dimension mismatch: {queries.dim} vs {keys.dim}")
    return queries.vectors @ keys.vectors.T


def knn(queries: EmbeddingMatrix, keys: EmbeddingMatrix, k: int, jobs: int = 1):
    """Exact top-k keys per query row by cosine, sorted descending.

    Ties break toward the smaller key index. Returns (indices, scores)
    arrays of shape (queries.n, k). Output is identical for any `jobs`.
    """
    if queries.dim != keys.dim:
        raise ValidationError(f"dimension mismatch: {queries.dim} vs {keys.dim}")
    if not 1 <= k <= keys.n:
        raise ValidationError(f"k={k} out of range 1..{keys.n}")

    indices = np.empty((queries.n, k), dtype=np.int64)
    scores = np.empty((queries.n, k), dtype=np.float64)

    def fill(start: int) -> None:
        stop = min(start + _BLOCK_ROWS, queries.n)
        sims = queries.vectors[start:stop] @ keys.vectors.T
        # stable sort on descending score => ties resolve to smaller index
        order = np.argsort(-sims, axis=1, kind="stable")[:, :k]
        indices[start:stop] = order
        scores[start:stop] = np.take_along_axis(sims, order, axis=1)

    starts = range(0, queries.n, _BLOCK_ROWS)
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(fill, starts))
    else:
        for start in starts:
            fill(start)
    return indices, scores
