"""Gaussian-Bernoulli RBM: CD-1 training, adaptation and supervector extraction."""

from .io import (
    load_checkpoint,
    load_checkpoint_config,
    load_supervectors,
    save_checkpoint,
    save_supervectors,
)
from .model import (
    RbmParams,
    energy,
    free_energy,
    hidden_given_visible,
    reconstruction_error,
    sample_hidden,
    sample_visible,
    sigmoid,
    visible_given_hidden,
)
from .supervector import Supervector, extract_supervector, supervector_dim, unflatten_supervector
from .training import (
    TrainingLog,
    adapt,
    adapt_all,
    cd1_update,
    init_params,
    item_seed,
    train,
    train_urbm,
)

__all__ = [
    "RbmParams",
    "energy",
    "free_energy",
    "hidden_given_visible",
    "visible_given_hidden",
    "sample_hidden",
    "sample_visible",
    "sigmoid",
    "reconstruction_error",
    "cd1_update",
    "train",
    "train_urbm",
    "init_params",
    "adapt",
    "adapt_all",
    "item_seed",
    "TrainingLog",
    "Supervector",
    "extract_supervector",
    "unflatten_supervector",
    "supervector_dim",
    "save_checkpoint",
    "load_checkpoint",
    "load_checkpoint_config",
    "save_supervectors",
    "load_supervectors",
]
