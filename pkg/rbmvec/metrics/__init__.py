"""Clustering evaluation: pairwise and BCubed F-scores."""

from .report import save_report
from .scores import EvalReport, Partition, bcubed_f, evaluate, pairwise_f

__all__ = ["Partition", "EvalReport", "pairwise_f", "bcubed_f", "evaluate", "save_report"]
