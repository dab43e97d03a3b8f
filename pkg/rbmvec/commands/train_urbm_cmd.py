"""Train the universal RBM."""

from pathlib import Path
from typing import Optional

import typer

from rbmvec.commands.common import CHECKPOINT_FILE, TRAINING_LOG_FILE, fail, merge_settings, train_config
from rbmvec.config import FeatureFormat, TrainConfig
from rbmvec.features import load_features
from rbmvec.rbm import RbmParams, TrainingLog, reconstruction_error, save_checkpoint, train_urbm
from rbmvec.ui import Spinner, print_header, print_info, print_success


def run_train_urbm(
    train_features: Path,
    output_dir: Path,
    config: TrainConfig,
    fmt: FeatureFormat = FeatureFormat.CSV,
) -> RbmParams:
    """Train on normalized features; writes checkpoint, sidecar and training log."""
    output_dir = Path(output_dir)
    training = load_features(train_features, fmt)
    log = TrainingLog()
    urbm = train_urbm(training, config, log=log)
    save_checkpoint(urbm, output_dir / CHECKPOINT_FILE, config)
    log.save(output_dir / TRAINING_LOG_FILE)
    return urbm


def train_urbm_command(
    train_features: Path = typer.Option(..., "--train", help="Normalized training features"),
    output_dir: Path = typer.Option(Path("outputs"), "--output", "-o", help="Output directory"),
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="Flat config file (key = value or YAML)"),
    hidden_units: Optional[int] = typer.Option(None, "--hidden", min=1, help="Hidden units (default 400)"),
    epochs: Optional[int] = typer.Option(None, "--epochs", min=0, help="URBM epochs (default 200)"),
    seed: Optional[int] = typer.Option(None, "--seed", min=0, help="Random seed"),
    fmt: FeatureFormat = typer.Option(FeatureFormat.CSV, "--format", help="Feature file format"),
):
    """
    🧠 Train the universal RBM with CD-1.

    Examples:
      rbmvec train-urbm --train run/train.norm.csv -o run
      rbmvec train-urbm --train run/train.norm.csv --hidden 64 --epochs 50 -o run
    """
    try:
        settings = merge_settings(config_path, hidden_units=hidden_units, urbm_epochs=epochs, seed=seed)
        config = train_config(settings, "urbm")
        print_header("URBM Training", f"H={config.hidden_units}, {config.epochs} epochs, lr={config.learning_rate}")
        with Spinner(message="[cyan]Training universal RBM...[/cyan]"):
            urbm = run_train_urbm(train_features, output_dir, config, fmt)
        print_success(f"URBM trained (V={urbm.n_visible}, H={urbm.n_hidden})")
        error = reconstruction_error(urbm, load_features(train_features, fmt).frames())
        print_info(f"Mean reconstruction error: {error:.4f}")
        print_info(f"Checkpoint: {Path(output_dir) / CHECKPOINT_FILE}")
    except Exception as e:
        fail(e, "URBM training failed")
