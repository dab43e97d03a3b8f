"""Feature ingestion and mean-variance normalization."""

from .dataset import Dataset, ItemFeatures, MvnStats
from .io import (
    load_features,
    load_labels,
    load_mvn_stats,
    save_features,
    save_labels,
    save_mvn_stats,
)
from .normalize import VARIANCE_FLOOR, mvn_apply, mvn_fit
from .synthetic import SyntheticSet, generate_synthetic

__all__ = [
    "Dataset",
    "ItemFeatures",
    "MvnStats",
    "VARIANCE_FLOOR",
    "mvn_fit",
    "mvn_apply",
    "load_features",
    "save_features",
    "load_labels",
    "save_labels",
    "load_mvn_stats",
    "save_mvn_stats",
    "SyntheticSet",
    "generate_synthetic",
]
