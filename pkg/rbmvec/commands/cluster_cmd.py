"""Cluster supervectors with AHC under one stop rule or a threshold sweep."""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import typer

from rbmvec.clustering import (
    ClusterResult,
    LinkageRule,
    StopRule,
    ahc,
    build_similarity_matrix,
    save_clusters,
    save_merge_history,
    sweep_threshold,
)
from rbmvec.commands.common import (
    CLUSTERS_FILE,
    MERGES_FILE,
    fail,
    linkage_rule,
    merge_settings,
    parse_sweep,
    stop_rule,
    theta_dir,
)
from rbmvec.config import Linkage
from rbmvec.errors import ConfigError
from rbmvec.rbm import load_supervectors
from rbmvec.ui import Spinner, console, create_score_table, print_header, print_info, print_success

logger = logging.getLogger(__name__)

# (theta, result); theta is None for a single stop rule
ClusterRun = Tuple[Optional[float], ClusterResult]


def resolve_stop(settings: Dict[str, Any]) -> Tuple[Optional[StopRule], Optional[List[float]]]:
    """Exactly one of threshold, num_clusters or sweep."""
    sweep = parse_sweep(settings.get("sweep"))
    threshold, num_clusters = settings.get("threshold"), settings.get("num_clusters")
    if sweep is not None:
        if threshold is not None or num_clusters is not None:
            raise ConfigError("give exactly one of --threshold, --num-clusters or --sweep", module="cli")
        return None, sweep
    return stop_rule(threshold, num_clusters), None


def write_result(result: ClusterResult, directory: Path) -> None:
    save_clusters(result.assignment, directory / CLUSTERS_FILE)
    save_merge_history(result.merges, directory / MERGES_FILE)


def run_cluster(
    supervectors: Path,
    output_dir: Path,
    linkage: LinkageRule,
    stop: Optional[StopRule] = None,
    sweep: Optional[List[float]] = None,
) -> List[ClusterRun]:
    """Write ``clusters.csv`` and ``merges.csv``, or one ``theta_*`` directory per swept value."""
    if (stop is None) == (sweep is None):
        raise ConfigError("give exactly one of a stop rule or a threshold sweep", module="cli")
    output_dir = Path(output_dir)
    vectors = load_supervectors(supervectors)
    matrix = build_similarity_matrix(vectors)

    if stop is not None:
        result = ahc(matrix, linkage, stop)
        write_result(result, output_dir)
        return [(None, result)]

    runs: List[ClusterRun] = []
    for theta, result in sweep_threshold(matrix, linkage, sweep):
        write_result(result, theta_dir(output_dir, theta))
        logger.info("theta=%s: %d clusters", theta, result.final_cluster_count)
        runs.append((theta, result))
    return runs


def cluster(
    supervectors: Path = typer.Option(..., "--supervectors", "-s", help="Supervector file (supervectors.rbsv)"),
    output_dir: Path = typer.Option(Path("outputs"), "--output", "-o", help="Output directory"),
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="Flat config file (key = value or YAML)"),
    linkage: Optional[Linkage] = typer.Option(None, "--linkage", help="Linkage rule (default average)"),
    size_weighted: Optional[bool] = typer.Option(None, "--size-weighted", help="Size-weighted average linkage"),
    threshold: Optional[float] = typer.Option(None, "--threshold", help="Stop when the best score is below θ"),
    num_clusters: Optional[int] = typer.Option(None, "--num-clusters", min=1, help="Stop at k clusters"),
    sweep: Optional[str] = typer.Option(None, "--sweep", help="Comma-separated thresholds θ1,θ2,..."),
):
    """
    🌳 Agglomerative clustering of supervectors (cosine similarity).

    Examples:
      rbmvec cluster -s run/supervectors.rbsv --threshold 0.3 -o run
      rbmvec cluster -s run/supervectors.rbsv --num-clusters 10 --linkage single -o run
      rbmvec cluster -s run/supervectors.rbsv --sweep 0.1,0.2,0.3 -o run
    """
    try:
        settings = merge_settings(
            config_path, linkage=linkage, size_weighted=size_weighted,
            threshold=threshold, num_clusters=num_clusters, sweep=sweep,
        )
        rule = linkage_rule(settings.get("linkage", Linkage.AVERAGE), settings.get("size_weighted", False))
        stop, thetas = resolve_stop(settings)
        print_header("Clustering", f"{rule.kind.value} linkage")
        with Spinner(message="[cyan]Merging clusters...[/cyan]"):
            runs = run_cluster(supervectors, output_dir, rule, stop, thetas)
        if thetas is None:
            print_success(f"{runs[0][1].final_cluster_count} clusters")
            print_info(f"Clusters: {Path(output_dir) / CLUSTERS_FILE}")
        else:
            rows = [(theta, result.final_cluster_count) for theta, result in runs]
            console.print(create_score_table(rows, ["theta", "n_clusters"], title="Threshold Sweep"))
            print_success(f"{len(runs)} thresholds written under {output_dir}")
    except Exception as e:
        fail(e, "Clustering failed")
