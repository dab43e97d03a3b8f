"""Fit MVN statistics on training features and normalize train and test files."""

import logging
from pathlib import Path
from typing import Dict, Optional

import typer

from rbmvec.commands.common import MVN_FILE, fail, features_name
from rbmvec.config import FeatureFormat
from rbmvec.features import load_features, mvn_apply, mvn_fit, save_features, save_mvn_stats
from rbmvec.ui import Spinner, print_header, print_info, print_success

logger = logging.getLogger(__name__)


def run_normalize(
    train_features: Path,
    test_features: Path,
    output_dir: Path,
    fmt: FeatureFormat = FeatureFormat.CSV,
    refit_on_test: bool = False,
) -> Dict[str, Path]:
    """Write ``mvn.yaml``, ``train.norm.*`` and ``test.norm.*`` into ``output_dir``.

    Input files are read in ``fmt``; outputs use the same format.
    """
    output_dir = Path(output_dir)
    train = load_features(train_features, fmt)
    test = load_features(test_features, fmt)

    stats = mvn_fit(train)
    test_stats = mvn_fit(test) if refit_on_test else stats
    if refit_on_test:
        logger.info("MVN refit on test features")

    paths = {
        "mvn": output_dir / MVN_FILE,
        "train": output_dir / features_name("train.norm", fmt),
        "test": output_dir / features_name("test.norm", fmt),
    }
    save_mvn_stats(stats, paths["mvn"])
    save_features(mvn_apply(stats, train), paths["train"], fmt)
    save_features(mvn_apply(test_stats, test), paths["test"], fmt)
    return paths


def normalize(
    test_features: Path = typer.Option(..., "--test", help="Features to cluster"),
    train_features: Optional[Path] = typer.Option(None, "--train", help="Features for MVN/URBM (default: --test)"),
    output_dir: Path = typer.Option(Path("outputs"), "--output", "-o", help="Output directory"),
    fmt: FeatureFormat = typer.Option(FeatureFormat.CSV, "--format", help="Feature file format"),
    refit_on_test: bool = typer.Option(False, "--refit-on-test", help="Fit separate statistics on the test set"),
):
    """
    📐 Mean-variance normalize features (statistics fit on training data).

    Examples:
      rbmvec normalize --train train.csv --test features.csv -o run
    """
    try:
        print_header("Mean-Variance Normalization")
        with Spinner(message="[cyan]Normalizing...[/cyan]"):
            paths = run_normalize(train_features or test_features, test_features, output_dir, fmt, refit_on_test)
        print_success("Features normalized")
        for name, path in paths.items():
            print_info(f"{name}: {path}")
    except Exception as e:
        fail(e, "Normalization failed")
