"""Flatten adapted RBMs into fixed-length supervectors and back.

Layout: vec(W) row-major, then b_v, then b_h; dim = V*H + V + H.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from rbmvec.errors import ShapeError
from rbmvec.rbm.model import RbmParams


def supervector_dim(n_visible: int, n_hidden: int) -> int:
    return n_visible * n_hidden + n_visible + n_hidden


@dataclass(frozen=True, eq=False)
class Supervector:
    values: np.ndarray
    source_item: str = ""

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])


def _flatten(params: RbmParams) -> np.ndarray:
    return np.concatenate([params.W.reshape(-1), params.b_v, params.b_h])


def extract_supervector(
    params: RbmParams,
    urbm: Optional[RbmParams] = None,
    center: bool = False,
    *,
    item_id: str = "",
) -> Supervector:
    """Concatenate (W, b_v, b_h); with ``center`` subtract the URBM's own supervector."""
    values = _flatten(params)
    if center:
        if urbm is None:
            raise ShapeError("centering needs the URBM", module="rbm")
        if urbm.shape != params.shape:
            raise ShapeError(f"URBM shape {urbm.shape} differs from {params.shape}", module="rbm")
        values = values - _flatten(urbm)
    return Supervector(values, item_id)


def unflatten_supervector(values, n_visible: int, n_hidden: int) -> RbmParams:
    """Inverse of the uncentered layout."""
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    expected = supervector_dim(n_visible, n_hidden)
    if values.shape[0] != expected:
        raise ShapeError(
            f"supervector has {values.shape[0]} values, V={n_visible}, H={n_hidden} needs {expected}",
            module="rbm",
        )
    n_w = n_visible * n_hidden
    W = values[:n_w].reshape(n_visible, n_hidden)
    b_v = values[n_w:n_w + n_visible]
    b_h = values[n_w + n_visible:]
    return RbmParams(W, b_v, b_h)
