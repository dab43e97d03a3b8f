"""Helpers shared by the subcommands: settings precedence and file naming."""

from pathlib import Path
from typing import Any, Dict, List, Optional, Set

import typer

from rbmvec.clustering import LinkageRule, StopRule
from rbmvec.config import FeatureFormat, Linkage, PipelineConfig, TrainConfig
from rbmvec.errors import ConfigError
from rbmvec.ui import ErrorHandler
from rbmvec.utils import fmt_float, load_config

FEATURE_SUFFIX = {FeatureFormat.CSV: ".csv", FeatureFormat.BINARY: ".rbfv"}

MVN_FILE = "mvn.yaml"
CHECKPOINT_FILE = "urbm.rbmc"
TRAINING_LOG_FILE = "urbm_training_log.csv"
SUPERVECTOR_FILE = "supervectors.rbsv"
CLUSTERS_FILE = "clusters.csv"
MERGES_FILE = "merges.csv"
SWEEP_FILE = "sweep.csv"
COMPARISON_FILE = "comparison.csv"
RUN_CONFIG_FILE = "run_config.yaml"

STOP_KEYS = ("threshold", "num_clusters", "sweep")


def known_keys() -> Set[str]:
    """Every key a flat config file may carry."""
    top = set(PipelineConfig.model_fields) - {"urbm", "adapt"}
    stage = set(TrainConfig.model_fields) - {"seed"}
    return top | {"hidden_units"} | {f"{p}_{k}" for p in ("urbm", "adapt") for k in stage}


def merge_settings(config_path: Optional[Path], **cli: Any) -> Dict[str, Any]:
    """File values first, then every CLI flag that was actually given.

    The stop rule is replaced as a whole: a stop flag on the command line
    drops every stop key the file set.
    """
    settings: Dict[str, Any] = dict(load_config(config_path)) if config_path else {}
    unknown = sorted(set(settings) - known_keys())
    if unknown:
        raise ConfigError(f"unknown config keys in {config_path}: {', '.join(unknown)}", module="cli")
    given = {k: v for k, v in cli.items() if v is not None}
    if any(k in given for k in STOP_KEYS):
        for key in STOP_KEYS:
            settings.pop(key, None)
    settings.update(given)
    return settings


def split_prefixed(settings: Dict[str, Any], prefix: str) -> Dict[str, Any]:
    return {k[len(prefix):]: v for k, v in settings.items() if k.startswith(prefix)}


def train_config(settings: Dict[str, Any], stage: str) -> TrainConfig:
    """TrainConfig for ``stage`` ('urbm' or 'adapt') from flat settings."""
    values = split_prefixed(settings, f"{stage}_")
    if "hidden_units" in settings:
        values.setdefault("hidden_units", settings["hidden_units"])
    values["seed"] = settings.get("seed", 0)
    factory = TrainConfig.urbm_defaults if stage == "urbm" else TrainConfig.adapt_defaults
    try:
        return factory(**values)
    except Exception as exc:
        raise ConfigError(f"{stage} settings: {exc}", module="cli") from exc


def parse_sweep(text: Optional[str]) -> Optional[List[float]]:
    if text is None:
        return None
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    try:
        values = [float(part) for part in str(text).split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"--sweep expects comma-separated numbers, got {text!r}", module="cli") from None
    if not values:
        raise ConfigError("--sweep needs at least one threshold", module="cli")
    return values


def stop_rule(threshold: Optional[float], num_clusters: Optional[int]) -> StopRule:
    if (threshold is None) == (num_clusters is None):
        raise ConfigError("give exactly one of --threshold, --num-clusters or --sweep", module="cli")
    if threshold is not None:
        return StopRule.threshold(threshold)
    return StopRule.num_clusters(num_clusters)


def linkage_rule(linkage: Linkage, size_weighted: bool = False) -> LinkageRule:
    return LinkageRule(Linkage(linkage), bool(size_weighted))


def theta_dir(output_dir: Path, theta: float) -> Path:
    return Path(output_dir) / f"theta_{fmt_float(theta)}"


def features_name(stem: str, fmt: FeatureFormat) -> str:
    return stem + FEATURE_SUFFIX[FeatureFormat(fmt)]


def fail(exc: BaseException, context: str) -> None:
    """Render ``exc`` and leave with its exit code."""
    code = ErrorHandler.handle_exception(exc, context)
    raise typer.Exit(code)
