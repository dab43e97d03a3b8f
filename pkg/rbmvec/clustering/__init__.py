"""Similarity scoring and agglomerative hierarchical clustering."""

from .ahc import (
    ClusterResult,
    LinkageRule,
    Merge,
    StopKind,
    StopRule,
    ahc,
    cut_dendrogram,
    sweep_threshold,
)
from .io import load_clusters, save_clusters, save_merge_history
from .similarity import SimilarityMatrix, build_similarity_matrix, cosine_similarity

__all__ = [
    "SimilarityMatrix",
    "cosine_similarity",
    "build_similarity_matrix",
    "LinkageRule",
    "StopKind",
    "StopRule",
    "Merge",
    "ClusterResult",
    "ahc",
    "cut_dendrogram",
    "sweep_threshold",
    "save_clusters",
    "load_clusters",
    "save_merge_history",
]
