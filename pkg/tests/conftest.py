"""Test configuration and fixtures."""

import numpy as np
import pytest

from rbmvec.commands import run_synth
from rbmvec.features import Dataset
from rbmvec.rbm import RbmParams


@pytest.fixture
def workdir(tmp_path):
    """Create temporary run directory."""
    run_dir = tmp_path / "run"
    run_dir.mkdir()
    return run_dir


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_dataset():
    """Three items, two dimensions, uneven frame counts."""
    return Dataset.from_arrays(
        {
            "a": [[1.0, 2.0], [3.0, 4.0]],
            "b": [[5.0, 6.0]],
            "c": [[7.0, 8.0], [9.0, 10.0], [11.0, 12.0]],
        },
        labels={"a": "x", "b": "x", "c": "y"},
    )


@pytest.fixture
def tiny_rbm():
    """Hand-picked 2 x 2 RBM."""
    return RbmParams(
        W=np.array([[0.5, -0.25], [0.1, 0.3]]),
        b_v=np.array([0.2, -0.1]),
        b_h=np.array([-0.3, 0.4]),
    )


def random_rbm(rng, n_visible, n_hidden, scale=0.5):
    return RbmParams(
        rng.normal(0.0, scale, size=(n_visible, n_hidden)),
        rng.normal(0.0, scale, size=n_visible),
        rng.normal(0.0, scale, size=n_hidden),
    )


@pytest.fixture
def small_synth(tmp_path):
    """4 classes x 5 items x 4 frames, D=6: enough for fast CLI round trips."""
    return run_synth(tmp_path / "data", classes=4, items_per_class=5, frames_per_item=4, dim=6, separation=4.0, seed=3)


# Flags that keep a full pipeline run to a fraction of a second.
FAST_FLAGS = ["--hidden", "8", "--urbm-epochs", "10", "--adapt-epochs", "10"]
