"""Subcommands; each module pairs a ``run_*`` function with its Typer wrapper."""

from .adapt_extract_cmd import adapt_extract, run_adapt_extract
from .cluster_cmd import cluster, run_cluster
from .evaluate_cmd import evaluate_command, run_evaluate
from .normalize_cmd import normalize, run_normalize
from .pipeline_cmd import PipelineResult, pipeline, run_pipeline
from .synth_cmd import run_synth, synth
from .train_urbm_cmd import run_train_urbm, train_urbm_command

__all__ = [
    "synth",
    "normalize",
    "train_urbm_command",
    "adapt_extract",
    "cluster",
    "evaluate_command",
    "pipeline",
    "run_synth",
    "run_normalize",
    "run_train_urbm",
    "run_adapt_extract",
    "run_cluster",
    "run_evaluate",
    "run_pipeline",
    "PipelineResult",
]
