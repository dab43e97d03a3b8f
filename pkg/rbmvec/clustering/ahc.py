"""Bottom-up agglomerative hierarchical clustering on a similarity matrix.

Each step merges the live pair with the highest score; ties go to the
smallest (i, j) in current matrix order. The merged cluster keeps row i,
row j is dropped, and the new row is

  average  s(ab, n) = (s(a, n) + s(b, n)) / 2      (weighted, WPGMA)
  single   s(ab, n) = max(s(a, n), s(b, n))

``size_weighted`` switches average linkage to the cluster-size weighted mean.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from rbmvec.config import Linkage
from rbmvec.errors import InvalidStop, MatrixError
from rbmvec.clustering.similarity import SimilarityMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinkageRule:
    kind: Linkage = Linkage.AVERAGE
    size_weighted: bool = False

    @classmethod
    def single(cls) -> "LinkageRule":
        return cls(Linkage.SINGLE)

    @classmethod
    def average(cls, size_weighted: bool = False) -> "LinkageRule":
        return cls(Linkage.AVERAGE, size_weighted)


class StopKind(str, Enum):
    THRESHOLD = "threshold"
    NUM_CLUSTERS = "num_clusters"


@dataclass(frozen=True)
class StopRule:
    """Stop when the best score drops below ``value`` or when ``value`` clusters remain."""
    kind: StopKind
    value: float

    @classmethod
    def threshold(cls, theta: float) -> "StopRule":
        if np.isnan(theta):
            raise InvalidStop("threshold must be a number, got nan")
        return cls(StopKind.THRESHOLD, float(theta))

    @classmethod
    def num_clusters(cls, k: int) -> "StopRule":
        if int(k) != k or k < 1:
            raise InvalidStop(f"number of clusters must be a positive integer, got {k}")
        return cls(StopKind.NUM_CLUSTERS, int(k))


@dataclass(frozen=True)
class Merge:
    members_a: Tuple[str, ...]
    members_b: Tuple[str, ...]
    score: float


@dataclass(frozen=True)
class ClusterResult:
    assignment: Dict[str, int]
    merges: Tuple[Merge, ...]
    final_cluster_count: int

    def clusters(self) -> List[List[str]]:
        """Members per cluster index."""
        out: List[List[str]] = [[] for _ in range(self.final_cluster_count)]
        for item_id, idx in self.assignment.items():
            out[idx].append(item_id)
        return out


def _assignment(ids: Sequence[str], groups: Iterable[Sequence[int]]) -> Dict[str, int]:
    """Cluster indices numbered by the smallest original position in each cluster."""
    ordered = sorted((sorted(g) for g in groups), key=lambda g: g[0])
    label = {}
    for idx, members in enumerate(ordered):
        for m in members:
            label[m] = idx
    return {ids[i]: label[i] for i in range(len(ids))}


def ahc(matrix: SimilarityMatrix, linkage: LinkageRule, stop: StopRule) -> ClusterResult:
    n = matrix.size
    if not matrix.is_symmetric():
        raise MatrixError("similarity matrix is not symmetric")
    if stop.kind is StopKind.NUM_CLUSTERS and stop.value > n:
        raise InvalidStop(f"asked for {int(stop.value)} clusters but only {n} items")

    ids = matrix.ids
    # dropped rows/columns are parked at -inf so live ones keep their relative order
    D = np.array(matrix.scores, dtype=np.float64)
    np.fill_diagonal(D, -np.inf)
    members: List[Optional[List[int]]] = [[i] for i in range(n)]
    sizes = np.ones(n)
    live = n
    merges: List[Merge] = []

    while live > 1:
        if stop.kind is StopKind.NUM_CLUSTERS and live <= stop.value:
            break
        flat = int(np.argmax(D))
        i, j = divmod(flat, n)
        best = float(D[i, j])
        if stop.kind is StopKind.THRESHOLD and best < stop.value:
            break

        merges.append(Merge(
            tuple(ids[m] for m in members[i]),
            tuple(ids[m] for m in members[j]),
            best,
        ))

        if linkage.kind is Linkage.SINGLE:
            row = np.maximum(D[i], D[j])
        elif linkage.size_weighted:
            row = (sizes[i] * D[i] + sizes[j] * D[j]) / (sizes[i] + sizes[j])
        else:
            row = 0.5 * (D[i] + D[j])

        D[i, :] = row
        D[:, i] = row
        D[i, i] = -np.inf
        D[j, :] = -np.inf
        D[:, j] = -np.inf

        members[i] = sorted(members[i] + members[j])
        members[j] = None
        sizes[i] += sizes[j]
        sizes[j] = 0
        live -= 1

    logger.debug("ahc(%s): %d merges, %d clusters", linkage.kind.value, len(merges), live)
    groups = [m for m in members if m is not None]
    return ClusterResult(_assignment(ids, groups), tuple(merges), live)


def cut_dendrogram(result: ClusterResult, ids: Sequence[str], theta: float) -> ClusterResult:
    """Replay recorded merges until the first one scoring below ``theta``."""
    position = {item_id: i for i, item_id in enumerate(ids)}
    parent = list(range(len(ids)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    kept: List[Merge] = []
    for merge in result.merges:
        if merge.score < theta:
            break
        a = find(position[merge.members_a[0]])
        b = find(position[merge.members_b[0]])
        parent[max(a, b)] = min(a, b)
        kept.append(merge)

    groups: Dict[int, List[int]] = {}
    for i in range(len(ids)):
        groups.setdefault(find(i), []).append(i)
    return ClusterResult(_assignment(ids, groups.values()), tuple(kept), len(groups))


def sweep_threshold(
    matrix: SimilarityMatrix,
    linkage: LinkageRule,
    thetas: Sequence[float],
) -> List[Tuple[float, ClusterResult]]:
    """One full merge run, cut at every threshold; results follow ``thetas`` order."""
    if len(thetas) == 0:
        raise InvalidStop("threshold sweep needs at least one value")
    full = ahc(matrix, linkage, StopRule.num_clusters(1))
    return [(float(theta), cut_dendrogram(full, matrix.ids, theta)) for theta in thetas]
