"""Global mean-variance normalization."""

import logging

import numpy as np

from rbmvec.errors import DataError, EmptyInput, ShapeError
from rbmvec.features.dataset import Dataset, MvnStats

logger = logging.getLogger(__name__)

# floor on std so constant dimensions do not blow up
VARIANCE_FLOOR = 1e-8


def mvn_fit(training: Dataset, floor: float = VARIANCE_FLOOR) -> MvnStats:
    """Per-dimension mean and population std over every frame of every item."""
    if len(training) == 0 or training.n_frames == 0:
        raise EmptyInput("cannot fit MVN statistics on an empty dataset")
    frames = training.frames()
    if not np.all(np.isfinite(frames)):
        raise DataError("training frames contain non-finite values")

    mean = frames.mean(axis=0)
    std = np.sqrt(((frames - mean) ** 2).mean(axis=0))
    floored = std < floor
    if np.any(floored):
        logger.info("MVN: %d constant dimension(s) floored at %g", int(floored.sum()), floor)
    std = np.where(floored, floor, std)
    return MvnStats(mean=mean, std=std)


def mvn_apply(stats: MvnStats, data: Dataset) -> Dataset:
    """Replace every frame x by (x - mean) / std."""
    if data.dim is not None and data.dim != stats.dim:
        raise ShapeError(f"feature dimension {data.dim} does not match MVN statistics ({stats.dim})")
    return data.replace_frames(lambda frames: (frames - stats.mean) / stats.std)
