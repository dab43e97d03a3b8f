"""Generate a synthetic class-structured dataset."""

from pathlib import Path
from typing import Dict

import typer

from rbmvec.commands.common import fail, features_name
from rbmvec.config import FeatureFormat
from rbmvec.features import generate_synthetic, save_features, save_labels
from rbmvec.ui import Spinner, print_header, print_info, print_success


def run_synth(
    output_dir: Path,
    classes: int,
    items_per_class: int,
    frames_per_item: int,
    dim: int,
    separation: float,
    seed: int = 0,
    train_classes: int = 0,
    fmt: FeatureFormat = FeatureFormat.CSV,
) -> Dict[str, Path]:
    """Write test features + labels (and a disjoint training set when asked)."""
    data = generate_synthetic(
        classes, items_per_class, frames_per_item, dim, separation,
        seed=seed, train_classes=train_classes,
    )
    output_dir = Path(output_dir)
    paths = {
        "features": output_dir / features_name("features", fmt),
        "labels": output_dir / "labels.csv",
    }
    save_features(data.test, paths["features"], fmt)
    save_labels(data.test.labels, paths["labels"])
    if data.train is not None:
        paths["train_features"] = output_dir / features_name("train", fmt)
        paths["train_labels"] = output_dir / "train_labels.csv"
        save_features(data.train, paths["train_features"], fmt)
        save_labels(data.train.labels, paths["train_labels"])
    return paths


def synth(
    output_dir: Path = typer.Option(Path("synthetic"), "--output", "-o", help="Output directory"),
    classes: int = typer.Option(10, "--classes", min=1, help="Number of classes"),
    items_per_class: int = typer.Option(20, "--items-per-class", min=1, help="Items per class"),
    frames_per_item: int = typer.Option(5, "--frames-per-item", min=1, help="Frames per item"),
    dim: int = typer.Option(16, "--dim", min=1, help="Feature dimension"),
    separation: float = typer.Option(4.0, "--separation", min=0.0, help="Scale of class centers"),
    train_classes: int = typer.Option(0, "--train-classes", min=0, help="Extra disjoint classes for URBM training"),
    seed: int = typer.Option(0, "--seed", min=0, help="Random seed"),
    fmt: FeatureFormat = typer.Option(FeatureFormat.CSV, "--format", help="Feature file format"),
):
    """
    🧪 Generate a synthetic dataset with known classes.

    Examples:
      rbmvec synth --classes 10 --items-per-class 20 --frames-per-item 5 --dim 16
      rbmvec synth --separation 0 --output control
    """
    try:
        print_header("Synthetic Data", f"{classes} classes × {items_per_class} items × {frames_per_item} frames, D={dim}")
        with Spinner(message="[cyan]Sampling frames...[/cyan]"):
            paths = run_synth(
                output_dir, classes, items_per_class, frames_per_item, dim, separation,
                seed=seed, train_classes=train_classes, fmt=fmt,
            )
        print_success("Synthetic dataset written")
        for name, path in paths.items():
            print_info(f"{name}: {path}")
    except Exception as e:
        fail(e, "Failed to generate synthetic data")
