"""Cosine scoring of supervectors."""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from rbmvec.errors import DegenerateVector, MatrixError, ShapeError
from rbmvec.rbm.supervector import Supervector


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Dense N x N score matrix; row/column order follows ``ids``."""
    scores: np.ndarray
    ids: Tuple[str, ...]

    def __post_init__(self):
        scores = np.array(self.scores, dtype=np.float64, copy=True)
        ids = tuple(self.ids)
        if scores.ndim != 2 or scores.shape[0] != scores.shape[1]:
            raise MatrixError(f"score matrix must be square, got {scores.shape}")
        if scores.shape[0] != len(ids):
            raise MatrixError(f"{scores.shape[0]} rows but {len(ids)} ids")
        if not np.all(np.isfinite(scores)):
            raise MatrixError("score matrix contains non-finite values")
        scores.setflags(write=False)
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "ids", ids)

    @property
    def size(self) -> int:
        return len(self.ids)

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.scores, self.scores.T))


def _unit(x: np.ndarray) -> np.ndarray:
    """Rows scaled to unit length; max-abs first so huge or tiny entries survive."""
    peak = np.max(np.abs(x), axis=-1, keepdims=True)
    scaled = x / np.where(peak == 0, 1.0, peak)
    return scaled / np.linalg.norm(scaled, axis=-1, keepdims=True)


def cosine_similarity(u, v) -> float:
    u = np.asarray(u, dtype=np.float64).reshape(-1)
    v = np.asarray(v, dtype=np.float64).reshape(-1)
    if u.shape != v.shape:
        raise ShapeError(f"vectors have dimensions {u.shape[0]} and {v.shape[0]}", module="clustering")
    if not (np.any(u) and np.any(v)):
        raise DegenerateVector("cosine similarity of a zero-norm vector")
    return float(np.clip(_unit(u) @ _unit(v), -1.0, 1.0))


def build_similarity_matrix(vectors: Sequence[Supervector]) -> SimilarityMatrix:
    """All-pairs cosine scores, exactly symmetric, diagonal 1."""
    if len(vectors) < 2:
        raise ShapeError("need at least two vectors to build a similarity matrix", module="clustering")
    dims = {v.dim for v in vectors}
    if len(dims) != 1:
        raise ShapeError(f"vectors disagree on dimension: {sorted(dims)}", module="clustering")

    X = np.vstack([v.values for v in vectors])
    for vec, row in zip(vectors, X):
        if not np.any(row):
            raise DegenerateVector(f"zero-norm vector for item {vec.source_item!r}", item_id=vec.source_item)

    U = _unit(X)
    upper = np.triu(np.clip(U @ U.T, -1.0, 1.0), k=1)
    scores = upper + upper.T
    np.fill_diagonal(scores, 1.0)
    return SimilarityMatrix(scores, tuple(v.source_item for v in vectors))
