"""Gaussian-Bernoulli RBM with unit-variance visible units.

Energy: E(v, h) = 1/2 ||v - b_v||^2 - b_h.h - v^T W h, with W of shape (V, H).
Every conditional accepts a single vector or a batch (rows are samples).
"""

from dataclasses import dataclass

import numpy as np

from rbmvec.errors import DataError, ShapeError

_ONE_BELOW = np.nextafter(1.0, 0.0)
_TINY = np.finfo(np.float64).tiny


def _readonly(array) -> np.ndarray:
    array = np.array(array, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class RbmParams:
    """Weights W (V x H), visible bias b_v (V) and hidden bias b_h (H)."""
    W: np.ndarray
    b_v: np.ndarray
    b_h: np.ndarray

    def __post_init__(self):
        W = np.asarray(self.W, dtype=np.float64)
        b_v = np.asarray(self.b_v, dtype=np.float64)
        b_h = np.asarray(self.b_h, dtype=np.float64)
        if W.ndim != 2 or W.shape[0] < 1 or W.shape[1] < 1:
            raise ShapeError(f"W must be a non-empty V x H matrix, got shape {W.shape}", module="rbm")
        if b_v.shape != (W.shape[0],) or b_h.shape != (W.shape[1],):
            raise ShapeError(
                f"bias shapes {b_v.shape}/{b_h.shape} do not fit W {W.shape}", module="rbm"
            )
        if not (np.all(np.isfinite(W)) and np.all(np.isfinite(b_v)) and np.all(np.isfinite(b_h))):
            raise DataError("RBM parameters must be finite", module="rbm")
        object.__setattr__(self, "W", _readonly(W))
        object.__setattr__(self, "b_v", _readonly(b_v))
        object.__setattr__(self, "b_h", _readonly(b_h))

    @classmethod
    def zeros(cls, n_visible: int, n_hidden: int) -> "RbmParams":
        return cls(np.zeros((n_visible, n_hidden)), np.zeros(n_visible), np.zeros(n_hidden))

    @property
    def n_visible(self) -> int:
        return int(self.W.shape[0])

    @property
    def n_hidden(self) -> int:
        return int(self.W.shape[1])

    @property
    def shape(self) -> tuple:
        return (self.n_visible, self.n_hidden)

    def equals(self, other: "RbmParams") -> bool:
        """Bit-exact comparison of all three arrays."""
        return (
            self.shape == other.shape
            and np.array_equal(self.W, other.W)
            and np.array_equal(self.b_v, other.b_v)
            and np.array_equal(self.b_h, other.b_h)
        )


def _check(vec: np.ndarray, size: int, what: str) -> np.ndarray:
    vec = np.asarray(vec, dtype=np.float64)
    if vec.ndim not in (1, 2) or vec.shape[-1] != size:
        raise ShapeError(f"{what} has shape {vec.shape}, expected (..., {size})", module="rbm")
    return vec


def sigmoid(x: np.ndarray) -> np.ndarray:
    """Logistic function kept strictly inside (0, 1)."""
    p = 0.5 * (1.0 + np.tanh(0.5 * np.asarray(x, dtype=np.float64)))
    return np.clip(p, _TINY, _ONE_BELOW)


def softplus(x: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, x)


def energy(params: RbmParams, v: np.ndarray, h: np.ndarray) -> float:
    v = _check(v, params.n_visible, "v")
    h = _check(h, params.n_hidden, "h")
    if v.ndim != 1 or h.ndim != 1:
        raise ShapeError("energy takes single vectors", module="rbm")
    diff = v - params.b_v
    return float(0.5 * diff @ diff - params.b_h @ h - v @ params.W @ h)


def hidden_given_visible(params: RbmParams, v: np.ndarray) -> np.ndarray:
    """p(h_j = 1 | v) = sigmoid(b_h[j] + sum_i v[i] W[i, j])."""
    v = _check(v, params.n_visible, "v")
    return sigmoid(params.b_h + v @ params.W)


def visible_given_hidden(params: RbmParams, h: np.ndarray) -> np.ndarray:
    """Gaussian means b_v + W h (unit variance)."""
    h = _check(h, params.n_hidden, "h")
    return params.b_v + h @ params.W.T


def sample_hidden(params: RbmParams, v: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    p = hidden_given_visible(params, v)
    return (rng.random(p.shape) < p).astype(np.float64)


def sample_visible(params: RbmParams, h: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    mean = visible_given_hidden(params, h)
    return mean + rng.standard_normal(mean.shape)


def free_energy(params: RbmParams, v: np.ndarray) -> np.ndarray:
    """F(v) = 1/2 ||v - b_v||^2 - sum_j softplus(b_h[j] + v W[:, j]).

    Returns a float for a single vector and an array for a batch.
    """
    v = _check(v, params.n_visible, "v")
    diff = v - params.b_v
    quadratic = 0.5 * np.sum(diff * diff, axis=-1)
    hidden = np.sum(softplus(params.b_h + v @ params.W), axis=-1)
    result = quadratic - hidden
    return float(result) if v.ndim == 1 else result


def reconstruction_error(params: RbmParams, frames: np.ndarray) -> float:
    """Mean squared reconstruction error through hidden probabilities (no sampling)."""
    frames = _check(frames, params.n_visible, "frames")
    frames = np.atleast_2d(frames)
    recon = visible_given_hidden(params, hidden_given_visible(params, frames))
    return float(np.mean(np.sum((frames - recon) ** 2, axis=1)))
