"""End-to-end run: normalize, train URBM, adapt, cluster, evaluate.

The pipeline is the staged commands chained through files in the output
directory, so a staged run with the same settings writes the same bytes.
"""

import csv
import io
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import typer

from rbmvec.baselines import fit_kmeans
from rbmvec.clustering import StopRule, save_clusters
from rbmvec.commands.adapt_extract_cmd import run_adapt_extract
from rbmvec.commands.cluster_cmd import ClusterRun, run_cluster
from rbmvec.commands.common import (
    CHECKPOINT_FILE,
    CLUSTERS_FILE,
    COMPARISON_FILE,
    RUN_CONFIG_FILE,
    SUPERVECTOR_FILE,
    SWEEP_FILE,
    fail,
    features_name,
    linkage_rule,
    merge_settings,
    parse_sweep,
    theta_dir,
)
from rbmvec.commands.evaluate_cmd import report_table, run_evaluate
from rbmvec.commands.normalize_cmd import run_normalize
from rbmvec.commands.train_urbm_cmd import run_train_urbm
from rbmvec.config import FeatureFormat, KMeansConfig, Linkage, PipelineConfig
from rbmvec.errors import ConfigError, DataError
from rbmvec.features import load_labels
from rbmvec.metrics import EvalReport, evaluate, save_report
from rbmvec.rbm import load_supervectors
from rbmvec.ui import (
    Spinner,
    console,
    create_score_table,
    print_header,
    print_info,
    print_section,
    print_success,
    print_warning,
)
from rbmvec.utils import fmt_float, save_config, write_file

logger = logging.getLogger(__name__)

KMEANS_DIR = "kmeans"
COMPARISON_COLUMNS = ["method", "n_clusters", "Fp", "Fb", "seconds"]
SWEEP_COLUMNS = ["theta", "n_clusters", "Fp", "Fb"]


@dataclass
class ComparisonRow:
    method: str
    n_clusters: int
    fp: float
    fb: float
    seconds: float

    def cells(self) -> Tuple[str, int, float, float, float]:
        return (self.method, self.n_clusters, self.fp, self.fb, self.seconds)


@dataclass
class PipelineResult:
    runs: List[ClusterRun]
    reports: Dict[Optional[float], EvalReport] = field(default_factory=dict)
    comparison: List[ComparisonRow] = field(default_factory=list)

    @property
    def report(self) -> Optional[EvalReport]:
        """Report of the single stop rule, or of the best swept threshold."""
        best = self.best_theta
        return self.reports.get(best) if self.reports else None

    @property
    def best_theta(self) -> Optional[float]:
        # highest Fp, first in sweep order on ties
        best, best_fp = None, -1.0
        for theta, _ in self.runs:
            report = self.reports.get(theta)
            if report is not None and report.fp > best_fp:
                best, best_fp = theta, report.fp
        return best


def _require(path: Optional[Path], what: str) -> None:
    if path is not None and not Path(path).is_file():
        raise DataError(f"{what} file not found: {path}", module="cli")


def _csv(header: List[str], rows: List[List[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def save_sweep_summary(result: PipelineResult, path: Path) -> None:
    rows = []
    for theta, run in result.runs:
        report = result.reports[theta]
        rows.append([fmt_float(theta), str(run.final_cluster_count), fmt_float(report.fp), fmt_float(report.fb)])
    write_file(path, _csv(SWEEP_COLUMNS, rows))


def save_comparison(rows: List[ComparisonRow], path: Path) -> None:
    body = [[r.method, str(r.n_clusters), fmt_float(r.fp), fmt_float(r.fb), f"{r.seconds:.3f}"] for r in rows]
    write_file(path, _csv(COMPARISON_COLUMNS, body))


def run_pipeline(
    config: PipelineConfig,
    on_stage: Optional[Callable[[str], None]] = None,
) -> PipelineResult:
    """Run every stage for ``config``; artifacts land in ``config.output_dir``."""
    stage = on_stage or (lambda _: None)
    if config.evaluate and config.labels is None:
        raise ConfigError("--evaluate needs --labels", module="cli")
    if config.baseline and config.labels is None:
        raise ConfigError("--baseline needs --labels", module="cli")
    _require(config.test_features, "test features")
    _require(config.train_features, "train features")
    _require(config.labels, "labels")

    out = Path(config.output_dir)
    fmt = config.feature_format
    save_config(out / RUN_CONFIG_FILE, config.to_flat())

    stage("normalize")
    run_normalize(config.train_path, config.test_features, out, fmt, config.refit_mvn_on_test)

    stage("train-urbm")
    run_train_urbm(out / features_name("train.norm", fmt), out, config.urbm, fmt)

    stage("adapt-extract")
    run_adapt_extract(
        out / features_name("test.norm", fmt), out / CHECKPOINT_FILE, out, config.adapt,
        center=config.center, threads=config.threads, fmt=fmt,
    )

    stage("cluster")
    rule = linkage_rule(config.linkage, config.size_weighted)
    stop = None
    if config.threshold is not None:
        stop = StopRule.threshold(config.threshold)
    elif config.num_clusters is not None:
        stop = StopRule.num_clusters(config.num_clusters)
    started = time.perf_counter()
    runs = run_cluster(out / SUPERVECTOR_FILE, out, rule, stop, config.sweep)
    cluster_seconds = time.perf_counter() - started
    result = PipelineResult(runs)

    if config.labels is None:
        return result

    stage("evaluate")
    for theta, _ in runs:
        directory = out if theta is None else theta_dir(out, theta)
        result.reports[theta] = run_evaluate(directory / CLUSTERS_FILE, config.labels, directory)
    if config.sweep is not None:
        save_sweep_summary(result, out / SWEEP_FILE)

    if config.baseline:
        stage("k-means baseline")
        best = result.report
        best_run = dict(runs)[result.best_theta]
        result.comparison.append(ComparisonRow(
            "ahc-rbm", best_run.final_cluster_count, best.fp, best.fb, cluster_seconds,
        ))
        result.comparison.append(_kmeans_row(config, out))
        save_comparison(result.comparison, out / COMPARISON_FILE)

    return result


def _kmeans_row(config: PipelineConfig, out: Path) -> ComparisonRow:
    truth = load_labels(config.labels)
    vectors = load_supervectors(out / SUPERVECTOR_FILE)
    started = time.perf_counter()
    fitted = fit_kmeans(vectors, KMeansConfig(k=len(set(truth.values())), seed=config.seed))
    seconds = time.perf_counter() - started
    logger.info("k-means: %d iterations, objective %.6g", fitted.n_iter, fitted.objective)

    directory = out / KMEANS_DIR
    save_clusters(fitted.partition, directory / CLUSTERS_FILE)
    report = evaluate({k: str(v) for k, v in fitted.partition.items()}, truth)
    save_report(report, directory)
    return ComparisonRow("kmeans", report.n_pred_clusters, report.fp, report.fb, seconds)


def pipeline(
    test_features: Optional[Path] = typer.Option(None, "--test", help="Features to cluster"),
    train_features: Optional[Path] = typer.Option(None, "--train", help="Features for MVN/URBM (default: --test)"),
    labels: Optional[Path] = typer.Option(None, "--labels", help="Reference labels CSV"),
    output_dir: Optional[Path] = typer.Option(None, "--output", "-o", help="Output directory"),
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="Flat config file (key = value or YAML)"),
    fmt: Optional[FeatureFormat] = typer.Option(None, "--format", help="Feature file format"),
    linkage: Optional[Linkage] = typer.Option(None, "--linkage", help="Linkage rule (default average)"),
    size_weighted: Optional[bool] = typer.Option(None, "--size-weighted", help="Size-weighted average linkage"),
    threshold: Optional[float] = typer.Option(None, "--threshold", help="Stop when the best score is below θ"),
    num_clusters: Optional[int] = typer.Option(None, "--num-clusters", min=1, help="Stop at k clusters"),
    sweep: Optional[str] = typer.Option(None, "--sweep", help="Comma-separated thresholds θ1,θ2,..."),
    center: Optional[bool] = typer.Option(None, "--center/--no-center", help="Subtract URBM parameters"),
    hidden_units: Optional[int] = typer.Option(None, "--hidden", min=1, help="Hidden units (default 400)"),
    urbm_epochs: Optional[int] = typer.Option(None, "--urbm-epochs", min=0, help="URBM epochs"),
    adapt_epochs: Optional[int] = typer.Option(None, "--adapt-epochs", min=0, help="Adaptation epochs"),
    refit_mvn_on_test: Optional[bool] = typer.Option(None, "--refit-on-test", help="Separate MVN statistics for test"),
    evaluate_flag: Optional[bool] = typer.Option(None, "--evaluate", help="Require labels and score the result"),
    baseline: Optional[bool] = typer.Option(None, "--baseline", help="Add a k-means comparison (true K)"),
    seed: Optional[int] = typer.Option(None, "--seed", min=0, help="Random seed"),
    threads: Optional[int] = typer.Option(None, "--threads", min=1, help="Adaptation worker threads"),
):
    """
    🚀 Run the full RBM-vector clustering pipeline.

    Examples:
      rbmvec pipeline --test features.csv --labels labels.csv --sweep 0.1,0.2,0.3 -o run
      rbmvec pipeline --test features.csv --num-clusters 10 --hidden 64 --baseline --labels labels.csv
      rbmvec pipeline --config run.yaml --threads 8
    """
    try:
        settings = merge_settings(
            config_path,
            test_features=test_features, train_features=train_features, labels=labels,
            output_dir=output_dir, feature_format=fmt, linkage=linkage, size_weighted=size_weighted,
            threshold=threshold, num_clusters=num_clusters, sweep=sweep, center=center,
            hidden_units=hidden_units, urbm_epochs=urbm_epochs, adapt_epochs=adapt_epochs,
            refit_mvn_on_test=refit_mvn_on_test, evaluate=evaluate_flag, baseline=baseline,
            seed=seed, threads=threads,
        )
        if "sweep" in settings:
            settings["sweep"] = parse_sweep(settings["sweep"])
        config = PipelineConfig.from_flat(settings)

        print_header(
            "RBM-Vector Clustering",
            f"H={config.urbm.hidden_units}, {config.linkage.value} linkage, seed {config.seed}",
        )
        if config.train_features is None:
            print_warning("No --train given: MVN stats and the URBM come from the test features")
        with Spinner(message="[cyan]Starting...[/cyan]") as spinner:
            result = run_pipeline(config, on_stage=lambda s: spinner.update(f"[cyan]{s}...[/cyan]"))
            elapsed = spinner.elapsed
        print_success(f"Pipeline finished in {elapsed:.1f}s")
        _show(config, result)
    except Exception as e:
        fail(e, "Pipeline failed")


def _show(config: PipelineConfig, result: PipelineResult) -> None:
    out = Path(config.output_dir)
    if config.sweep is not None:
        print_section("Threshold Sweep")
        rows = []
        for theta, run in result.runs:
            report = result.reports.get(theta)
            scores = (report.fp, report.fb) if report else ("-", "-")
            rows.append((theta, run.final_cluster_count, *scores))
        console.print(create_score_table(rows, SWEEP_COLUMNS, title="Threshold Sweep"))
    else:
        print_info(f"{result.runs[0][1].final_cluster_count} clusters → {out / CLUSTERS_FILE}")

    if result.report is not None:
        title = "Evaluation" if config.sweep is None else f"Evaluation (best θ = {result.best_theta})"
        console.print(report_table(result.report, title=title))
    if result.comparison:
        print_section("Comparison")
        console.print(create_score_table([r.cells() for r in result.comparison], COMPARISON_COLUMNS, title="Methods"))
    print_info(f"Artifacts in {out}")
