"""Contrastive-divergence training: universal model and per-item adaptation.

One CD step:
  positive phase   p0 = p(h | v0) from the data
  Gibbs step       h ~ Bernoulli(p0), v1 = b_v + W h (means, no noise), p1 = p(h | v1)
  update           W   += lr (v0^T p0 - v1^T p1) / n - lr wd W
                   b_v += lr mean(v0 - v1)
                   b_h += lr mean(p0 - p1)
Weight decay touches W only. No momentum.
"""

import hashlib
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from rbmvec.config import TrainConfig
from rbmvec.errors import EmptyInput, NumericError, ShapeError
from rbmvec.features.dataset import Dataset, ItemFeatures
from rbmvec.rbm.model import RbmParams, sigmoid
from rbmvec.rbm.supervector import Supervector, extract_supervector
from rbmvec.utils import fmt_float, write_file

logger = logging.getLogger(__name__)


@dataclass
class TrainingLog:
    """Per-epoch mean reconstruction error of one training run."""
    rows: List[Tuple[int, float]] = field(default_factory=list)

    def append(self, epoch: int, error: float) -> None:
        self.rows.append((epoch, error))

    @property
    def errors(self) -> List[float]:
        return [err for _, err in self.rows]

    def to_csv(self) -> str:
        lines = ["epoch,mean_reconstruction_error"]
        lines.extend(f"{epoch},{fmt_float(err)}" for epoch, err in self.rows)
        return "\n".join(lines) + "\n"

    def save(self, path: Path) -> None:
        write_file(path, self.to_csv())


def _as_frames(data, n_visible: int) -> np.ndarray:
    frames = np.asarray(data, dtype=np.float64)
    if frames.size == 0:
        raise EmptyInput("no training frames", module="rbm")
    if frames.ndim == 1:
        frames = frames.reshape(1, -1)
    if frames.ndim != 2 or frames.shape[1] != n_visible:
        raise ShapeError(
            f"frames have shape {frames.shape}, expected (n, {n_visible})", module="rbm"
        )
    return frames


def _cd_step(
    W: np.ndarray,
    b_v: np.ndarray,
    b_h: np.ndarray,
    v0: np.ndarray,
    lr: float,
    wd: float,
    rng: np.random.Generator,
    cd_steps: int = 1,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """One update on raw arrays; returns new arrays and the summed squared error."""
    n = v0.shape[0]
    p0 = sigmoid(b_h + v0 @ W)
    h = (rng.random(p0.shape) < p0).astype(np.float64)
    for step in range(cd_steps):
        v1 = b_v + h @ W.T
        p1 = sigmoid(b_h + v1 @ W)
        if step + 1 < cd_steps:
            h = (rng.random(p1.shape) < p1).astype(np.float64)

    new_W = W + (lr * (v0.T @ p0 - v1.T @ p1) / n - lr * wd * W)
    new_b_v = b_v + lr * np.mean(v0 - v1, axis=0)
    new_b_h = b_h + lr * np.mean(p0 - p1, axis=0)
    error = float(np.sum((v0 - v1) ** 2))
    return new_W, new_b_v, new_b_h, error


def cd1_update(
    params: RbmParams,
    batch,
    lr: float,
    wd: float,
    rng: np.random.Generator,
    cd_steps: int = 1,
) -> RbmParams:
    """Apply one contrastive-divergence step to ``params`` on ``batch``.

    ``rng`` is advanced by exactly one ``random((len(batch), H))`` draw per
    Gibbs step.
    """
    v0 = _as_frames(batch, params.n_visible)
    W, b_v, b_h, _ = _cd_step(params.W, params.b_v, params.b_h, v0, lr, wd, rng, cd_steps)
    return RbmParams(W, b_v, b_h)


def train(
    init: RbmParams,
    data,
    config: TrainConfig,
    *,
    rng: Optional[np.random.Generator] = None,
    log: Optional[TrainingLog] = None,
) -> RbmParams:
    """Run ``config.epochs`` epochs of shuffled mini-batch CD from ``init``.

    Each epoch draws one permutation, then visits batches of
    ``config.batch_size`` in order; the last short batch is kept.
    """
    frames = _as_frames(data, init.n_visible)
    if rng is None:
        rng = np.random.default_rng(config.seed)
    if config.epochs == 0:
        return init

    n = frames.shape[0]
    W, b_v, b_h = np.array(init.W), np.array(init.b_v), np.array(init.b_h)
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, config.batch_size):
            batch = frames[order[start:start + config.batch_size]]
            W, b_v, b_h, err = _cd_step(
                W, b_v, b_h, batch, config.learning_rate, config.weight_decay, rng, config.cd_steps
            )
            total += err
        mean_err = total / n
        if not (np.isfinite(mean_err) and np.all(np.isfinite(W))):
            raise NumericError(f"training diverged at epoch {epoch}", module="rbm")
        if log is not None:
            log.append(epoch, mean_err)
        logger.debug("epoch %d/%d reconstruction error %.6f", epoch, config.epochs, mean_err)

    return RbmParams(W, b_v, b_h)


def init_params(n_visible: int, config: TrainConfig, rng: np.random.Generator) -> RbmParams:
    """Gaussian weights (mean 0, std ``config.init_std``), zero biases."""
    W = rng.normal(0.0, config.init_std, size=(n_visible, config.hidden_units))
    return RbmParams(W, np.zeros(n_visible), np.zeros(config.hidden_units))


def train_urbm(
    training: Dataset,
    config: TrainConfig,
    log: Optional[TrainingLog] = None,
) -> RbmParams:
    """Universal RBM on every frame of every item (item order, then frame order)."""
    if len(training) == 0:
        raise EmptyInput("training dataset is empty", module="rbm")
    frames = training.frames()
    rng = np.random.default_rng(config.seed)
    init = init_params(frames.shape[1], config, rng)
    logger.info(
        "training URBM: %d frames, V=%d, H=%d, %d epochs",
        frames.shape[0], init.n_visible, init.n_hidden, config.epochs,
    )
    return train(init, frames, config, rng=rng, log=log)


def item_seed(seed: int, item_id: str) -> int:
    """64-bit seed derived from (seed, item_id), independent of processing order."""
    digest = hashlib.sha256(f"{seed}\x00{item_id}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def adapt(urbm: RbmParams, item: ItemFeatures, config: TrainConfig) -> RbmParams:
    """Continue training a copy of the URBM on this item's frames only."""
    if item.dim != urbm.n_visible:
        raise ShapeError(
            f"item {item.item_id!r} has dimension {item.dim}, URBM expects {urbm.n_visible}",
            module="rbm",
        )
    rng = np.random.default_rng(item_seed(config.seed, item.item_id))
    return train(urbm, item.frames, config, rng=rng)


def adapt_all(
    urbm: RbmParams,
    items: Sequence[ItemFeatures],
    config: TrainConfig,
    *,
    center: bool = True,
    threads: int = 1,
) -> List[Supervector]:
    """Adapt every item and extract its supervector; output follows ``items`` order."""

    def work(item: ItemFeatures) -> Supervector:
        adapted = adapt(urbm, item, config)
        return extract_supervector(adapted, urbm if center else None, center, item_id=item.item_id)

    if threads <= 1:
        return [work(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, items))
