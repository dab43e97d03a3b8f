"""Comparison baselines."""

from .kmeans import KMeansResult, fit_kmeans, kmeans

__all__ = ["KMeansResult", "fit_kmeans", "kmeans"]
