"""Lloyd's k-means on supervectors.

Initial centroids are ``k`` distinct points drawn with the seeded generator.
A centroid that loses all its points is moved onto the point farthest from
its current centroid.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np

from rbmvec.config import KMeansConfig
from rbmvec.errors import EmptyInput, InvalidConfig, ShapeError
from rbmvec.rbm.supervector import Supervector

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class KMeansResult:
    partition: Dict[str, int]
    centroids: np.ndarray
    objective_history: Tuple[float, ...]
    n_iter: int

    @property
    def objective(self) -> float:
        return self.objective_history[-1]


def _sq_distances(X: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # one centroid at a time keeps memory at O(n * dim) for wide supervectors
    out = np.empty((X.shape[0], centroids.shape[0]))
    for c, centroid in enumerate(centroids):
        diff = X - centroid
        out[:, c] = np.einsum("ij,ij->i", diff, diff)
    return out


def fit_kmeans(vectors: Sequence[Supervector], config: KMeansConfig) -> KMeansResult:
    if not vectors:
        raise EmptyInput("k-means needs at least one vector", module="baselines")
    dims = {v.dim for v in vectors}
    if len(dims) != 1:
        raise ShapeError(f"vectors disagree on dimension: {sorted(dims)}", module="baselines")
    n, k = len(vectors), config.k
    if k > n:
        raise InvalidConfig(f"k={k} exceeds the number of items ({n})")

    X = np.vstack([v.values for v in vectors])
    rng = np.random.default_rng(config.seed)
    centroids = X[rng.choice(n, size=k, replace=False)].copy()

    history = []
    n_iter = 0
    for n_iter in range(1, config.max_iters + 1):
        d2 = _sq_distances(X, centroids)
        labels = np.argmin(d2, axis=1)
        closest = d2[np.arange(n), labels]
        history.append(float(closest.sum()))

        updated = centroids.copy()
        empty = []
        for c in range(k):
            mask = labels == c
            if mask.any():
                updated[c] = X[mask].mean(axis=0)
            else:
                empty.append(c)
        if empty:
            farthest = np.argsort(-closest, kind="stable")
            for c, idx in zip(empty, farthest):
                updated[c] = X[idx]
            logger.debug("k-means iteration %d: re-seeded %d empty cluster(s)", n_iter, len(empty))

        shift = float(np.max(np.linalg.norm(updated - centroids, axis=1)))
        centroids = updated
        if shift <= config.tol:
            break

    d2 = _sq_distances(X, centroids)
    labels = np.argmin(d2, axis=1)
    history.append(float(d2[np.arange(n), labels].sum()))

    partition = {v.source_item: int(label) for v, label in zip(vectors, labels)}
    logger.info("k-means: k=%d, %d iterations, objective %.6g", k, n_iter, history[-1])
    return KMeansResult(partition, centroids, tuple(history), n_iter)


def kmeans(vectors: Sequence[Supervector], config: KMeansConfig) -> Dict[str, int]:
    """Item -> cluster index partition from :func:`fit_kmeans`."""
    return fit_kmeans(vectors, config).partition
