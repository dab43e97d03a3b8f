"""Score a cluster assignment against reference labels."""

from pathlib import Path

import typer

from rbmvec.clustering import load_clusters
from rbmvec.commands.common import fail
from rbmvec.features import load_labels
from rbmvec.metrics import EvalReport, evaluate, save_report
from rbmvec.ui import console, create_score_table, print_header, print_info

REPORT_COLUMNS = ["metric", "precision", "recall", "F"]


def run_evaluate(clusters: Path, labels: Path, output_dir: Path) -> EvalReport:
    """Write ``report.csv`` and ``report.txt`` into ``output_dir``."""
    report = evaluate(load_clusters(clusters), load_labels(labels))
    save_report(report, output_dir)
    return report


def report_table(report: EvalReport, title: str = "Evaluation"):
    rows = [("pairwise", *report.pairwise), ("bcubed", *report.bcubed)]
    return create_score_table(rows, REPORT_COLUMNS, title=title)


def evaluate_command(
    clusters: Path = typer.Option(..., "--clusters", help="Cluster CSV (item_id,cluster_index)"),
    labels: Path = typer.Option(..., "--labels", help="Labels CSV (item_id,class_id)"),
    output_dir: Path = typer.Option(Path("outputs"), "--output", "-o", help="Output directory"),
):
    """
    📊 Pairwise and BCubed F-scores of a clustering.

    Examples:
      rbmvec evaluate --clusters run/clusters.csv --labels labels.csv -o run
    """
    try:
        print_header("Evaluation")
        report = run_evaluate(clusters, labels, output_dir)
        console.print(report_table(report))
        print_info(
            f"{report.n_items} items, {report.n_pred_clusters} predicted / "
            f"{report.n_true_clusters} true clusters"
        )
    except Exception as e:
        fail(e, "Evaluation failed")
