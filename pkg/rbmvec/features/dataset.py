"""Feature containers: per-item frame bags, datasets and MVN statistics."""

from dataclasses import dataclass, field
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple

import numpy as np

from rbmvec.errors import DataError, EmptyInput, ShapeError


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class ItemFeatures:
    """One clustering item: a bag of D-dimensional frames, shape (n_frames, D)."""
    item_id: str
    frames: np.ndarray

    def __post_init__(self):
        frames = np.asarray(self.frames, dtype=np.float64)
        if frames.ndim == 1:
            frames = frames.reshape(1, -1)
        if frames.ndim != 2:
            raise ShapeError(f"item {self.item_id!r}: frames must be a 2-D array")
        if frames.shape[0] == 0:
            raise EmptyInput(f"item {self.item_id!r} has no frames")
        if frames.shape[1] == 0:
            raise ShapeError(f"item {self.item_id!r}: frame dimension must be >= 1")
        if not np.all(np.isfinite(frames)):
            raise DataError(f"item {self.item_id!r} contains non-finite values")
        object.__setattr__(self, "frames", _frozen(frames))

    @property
    def dim(self) -> int:
        return int(self.frames.shape[1])

    @property
    def n_frames(self) -> int:
        return int(self.frames.shape[0])


@dataclass(frozen=True)
class Dataset:
    """Ordered items plus optional ground-truth labels (item_id -> class_id)."""
    items: Tuple[ItemFeatures, ...]
    labels: Optional[Dict[str, str]] = field(default=None)

    def __post_init__(self):
        items = tuple(self.items)
        object.__setattr__(self, "items", items)
        ids = [item.item_id for item in items]
        if len(set(ids)) != len(ids):
            seen, dupes = set(), []
            for item_id in ids:
                if item_id in seen:
                    dupes.append(item_id)
                seen.add(item_id)
            raise DataError(f"duplicate item ids: {', '.join(sorted(set(dupes)))}")
        dims = {item.dim for item in items}
        if len(dims) > 1:
            raise ShapeError(f"items disagree on frame dimension: {sorted(dims)}")
        if self.labels is not None:
            labels = dict(self.labels)
            missing = set(ids) - labels.keys()
            extra = labels.keys() - set(ids)
            if missing or extra:
                raise DataError(
                    f"labels must cover exactly the item ids "
                    f"({len(missing)} unlabelled, {len(extra)} unknown)"
                )
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_arrays(
        cls,
        bags: Mapping[str, Sequence[Sequence[float]]],
        labels: Optional[Mapping[str, str]] = None,
    ) -> "Dataset":
        items = tuple(ItemFeatures(item_id, np.asarray(frames)) for item_id, frames in bags.items())
        return cls(items, dict(labels) if labels is not None else None)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[ItemFeatures]:
        return iter(self.items)

    @property
    def ids(self) -> Tuple[str, ...]:
        return tuple(item.item_id for item in self.items)

    @property
    def dim(self) -> Optional[int]:
        return self.items[0].dim if self.items else None

    @property
    def n_frames(self) -> int:
        return sum(item.n_frames for item in self.items)

    def frames(self) -> np.ndarray:
        """All frames pooled in item order, then frame order."""
        if not self.items:
            raise EmptyInput("dataset has no frames")
        return np.concatenate([item.frames for item in self.items], axis=0)

    def with_labels(self, labels: Mapping[str, str]) -> "Dataset":
        return Dataset(self.items, dict(labels))

    def replace_frames(self, transform) -> "Dataset":
        """New dataset with ``transform(frames)`` applied per item; ids and labels kept."""
        items = tuple(ItemFeatures(item.item_id, transform(item.frames)) for item in self.items)
        return Dataset(items, self.labels)


@dataclass(frozen=True)
class MvnStats:
    """Per-dimension mean and floored population standard deviation."""
    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        std = np.asarray(self.std, dtype=np.float64)
        if mean.ndim != 1 or std.shape != mean.shape:
            raise ShapeError(f"mean/std shapes differ: {mean.shape} vs {std.shape}")
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(std))):
            raise DataError("MVN statistics must be finite")
        if np.any(std <= 0):
            raise DataError("MVN std entries must be positive")
        object.__setattr__(self, "mean", _frozen(mean))
        object.__setattr__(self, "std", _frozen(std))

    @property
    def dim(self) -> int:
        return int(self.mean.shape[0])
