"""Adapt the URBM to every item and extract supervectors."""

import logging
from pathlib import Path
from typing import List, Optional

import typer

from rbmvec.commands.common import SUPERVECTOR_FILE, fail, merge_settings, train_config
from rbmvec.config import FeatureFormat, TrainConfig
from rbmvec.features import load_features
from rbmvec.rbm import Supervector, adapt_all, load_checkpoint, save_supervectors
from rbmvec.ui import Spinner, print_header, print_info, print_success

logger = logging.getLogger(__name__)


def run_adapt_extract(
    test_features: Path,
    checkpoint: Path,
    output_dir: Path,
    config: TrainConfig,
    *,
    center: bool = True,
    threads: int = 1,
    fmt: FeatureFormat = FeatureFormat.CSV,
) -> List[Supervector]:
    """Write ``supervectors.rbsv`` in test-item order."""
    items = load_features(test_features, fmt)
    urbm = load_checkpoint(checkpoint)
    logger.info("adapting %d items on %d thread(s)", len(items), threads)
    vectors = adapt_all(urbm, list(items), config, center=center, threads=threads)
    save_supervectors(vectors, Path(output_dir) / SUPERVECTOR_FILE)
    return vectors


def adapt_extract(
    test_features: Path = typer.Option(..., "--test", help="Normalized test features"),
    checkpoint: Path = typer.Option(..., "--urbm", help="URBM checkpoint (urbm.rbmc)"),
    output_dir: Path = typer.Option(Path("outputs"), "--output", "-o", help="Output directory"),
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="Flat config file (key = value or YAML)"),
    epochs: Optional[int] = typer.Option(None, "--epochs", min=0, help="Adaptation epochs (default 200)"),
    seed: Optional[int] = typer.Option(None, "--seed", min=0, help="Random seed"),
    threads: Optional[int] = typer.Option(None, "--threads", min=1, help="Worker threads"),
    center: Optional[bool] = typer.Option(None, "--center/--no-center", help="Subtract URBM parameters"),
    fmt: FeatureFormat = typer.Option(FeatureFormat.CSV, "--format", help="Feature file format"),
):
    """
    🔁 Adapt the URBM per item and write supervectors.

    Examples:
      rbmvec adapt-extract --test run/test.norm.csv --urbm run/urbm.rbmc -o run
      rbmvec adapt-extract --test run/test.norm.csv --urbm run/urbm.rbmc --threads 8 -o run
    """
    try:
        settings = merge_settings(config_path, adapt_epochs=epochs, seed=seed, threads=threads, center=center)
        config = train_config(settings, "adapt")
        n_threads = int(settings.get("threads", 1))
        print_header("Adaptation", f"{config.epochs} epochs, lr={config.learning_rate}, {n_threads} thread(s)")
        with Spinner(message="[cyan]Adapting items...[/cyan]"):
            vectors = run_adapt_extract(
                test_features, checkpoint, output_dir, config,
                center=bool(settings.get("center", True)), threads=n_threads, fmt=fmt,
            )
        print_success(f"{len(vectors)} supervectors extracted (dim {vectors[0].dim if vectors else 0})")
        print_info(f"Supervectors: {Path(output_dir) / SUPERVECTOR_FILE}")
    except Exception as e:
        fail(e, "Adaptation failed")
