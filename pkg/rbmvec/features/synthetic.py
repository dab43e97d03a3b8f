"""Seeded synthetic class-structured features for desk-scale runs."""

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from rbmvec.errors import InvalidConfig
from rbmvec.features.dataset import Dataset, ItemFeatures


@dataclass(frozen=True)
class SyntheticSet:
    test: Dataset
    train: Optional[Dataset] = None


def _population(
    rng: np.random.Generator,
    prefix: str,
    classes: int,
    items_per_class: int,
    frames_per_item: int,
    dim: int,
    separation: float,
) -> Dataset:
    centers = rng.normal(0.0, 1.0, size=(classes, dim)) * separation
    items = []
    labels: Dict[str, str] = {}
    for c in range(classes):
        for i in range(items_per_class):
            item_id = f"{prefix}{c:03d}_{i:03d}"
            frames = centers[c] + rng.normal(0.0, 1.0, size=(frames_per_item, dim))
            items.append(ItemFeatures(item_id, frames))
            labels[item_id] = f"class_{prefix}{c:03d}"
    return Dataset(tuple(items), labels)


def generate_synthetic(
    classes: int,
    items_per_class: int,
    frames_per_item: int,
    dim: int,
    separation: float,
    seed: int = 0,
    train_classes: int = 0,
    train_items_per_class: Optional[int] = None,
) -> SyntheticSet:
    """Class centers ~ N(0, separation^2 I); each frame = center + N(0, I).

    ``train_classes`` > 0 adds a disjoint training population drawn after the
    test population from the same generator.
    """
    for name, value in (
        ("classes", classes),
        ("items_per_class", items_per_class),
        ("frames_per_item", frames_per_item),
        ("dim", dim),
    ):
        if value < 1:
            raise InvalidConfig(f"{name} must be >= 1, got {value}", module="cli")
    if separation < 0:
        raise InvalidConfig("separation must be >= 0", module="cli")

    rng = np.random.default_rng(seed)
    test = _population(rng, "c", classes, items_per_class, frames_per_item, dim, separation)
    train = None
    if train_classes > 0:
        per_class = train_items_per_class or items_per_class
        train = _population(rng, "t", train_classes, per_class, frames_per_item, dim, separation)
    return SyntheticSet(test=test, train=train)
