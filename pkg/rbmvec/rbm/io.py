"""Checkpoint and supervector files.

Checkpoint: ``RBMC``, u32 version (1), u32 V, u32 H, then W row-major, b_v,
b_h as little-endian float64. The TrainConfig used is written next to it
as ``<checkpoint>.yaml``.

Supervectors: ``RBSV``, u32 version (1), u32 dim, u64 count, then per
record a u16-length-prefixed UTF-8 item_id and dim little-endian float64.
"""

import struct
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
import yaml

from rbmvec.config import TrainConfig
from rbmvec.errors import FormatError, ShapeError
from rbmvec.rbm.model import RbmParams
from rbmvec.rbm.supervector import Supervector
from rbmvec.utils import write_file

CHECKPOINT_MAGIC = b"RBMC"
SUPERVECTOR_MAGIC = b"RBSV"
FORMAT_VERSION = 1

_CKPT_HEADER = struct.Struct("<4sIII")
_SV_HEADER = struct.Struct("<4sIIQ")
_ID_LEN = struct.Struct("<H")


def sidecar_path(path: Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".yaml")


def save_checkpoint(params: RbmParams, path: Path, config: Optional[TrainConfig] = None) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = _CKPT_HEADER.pack(CHECKPOINT_MAGIC, FORMAT_VERSION, params.n_visible, params.n_hidden)
    body = b"".join(
        np.ascontiguousarray(a, dtype="<f8").tobytes() for a in (params.W, params.b_v, params.b_h)
    )
    path.write_bytes(header + body)
    if config is not None:
        write_file(sidecar_path(path), yaml.safe_dump(config.model_dump(), sort_keys=False))


def load_checkpoint(path: Path) -> RbmParams:
    path = Path(path)
    blob = path.read_bytes()
    if len(blob) < _CKPT_HEADER.size:
        raise FormatError("truncated checkpoint header", path=str(path), offset=len(blob), module="rbm")
    magic, version, n_visible, n_hidden = _CKPT_HEADER.unpack_from(blob, 0)
    if magic != CHECKPOINT_MAGIC:
        raise FormatError(f"bad magic {magic!r}", path=str(path), offset=0, module="rbm")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported version {version}", path=str(path), offset=4, module="rbm")
    count = n_visible * n_hidden + n_visible + n_hidden
    expected = _CKPT_HEADER.size + 8 * count
    if len(blob) != expected:
        raise FormatError(
            f"checkpoint is {len(blob)} bytes, V={n_visible}, H={n_hidden} needs {expected}",
            path=str(path), offset=min(len(blob), expected), module="rbm",
        )
    values = np.frombuffer(blob, dtype="<f8", count=count, offset=_CKPT_HEADER.size).astype(np.float64)
    n_w = n_visible * n_hidden
    return RbmParams(
        values[:n_w].reshape(n_visible, n_hidden),
        values[n_w:n_w + n_visible],
        values[n_w + n_visible:],
    )


def load_checkpoint_config(path: Path) -> Optional[TrainConfig]:
    sidecar = sidecar_path(path)
    if not sidecar.exists():
        return None
    with open(sidecar, encoding="utf-8") as f:
        return TrainConfig(**yaml.safe_load(f))


def save_supervectors(vectors: Sequence[Supervector], path: Path) -> None:
    path = Path(path)
    dims = {v.dim for v in vectors}
    if len(dims) > 1:
        raise ShapeError(f"supervectors disagree on dimension: {sorted(dims)}", module="rbm")
    dim = dims.pop() if dims else 0
    chunks = [_SV_HEADER.pack(SUPERVECTOR_MAGIC, FORMAT_VERSION, dim, len(vectors))]
    for vec in vectors:
        encoded = vec.source_item.encode("utf-8")
        chunks.append(_ID_LEN.pack(len(encoded)))
        chunks.append(encoded)
        chunks.append(np.ascontiguousarray(vec.values, dtype="<f8").tobytes())
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(b"".join(chunks))


def load_supervectors(path: Path) -> List[Supervector]:
    path = Path(path)
    blob = path.read_bytes()
    if len(blob) < _SV_HEADER.size:
        raise FormatError("truncated supervector header", path=str(path), offset=len(blob), module="rbm")
    magic, version, dim, count = _SV_HEADER.unpack_from(blob, 0)
    if magic != SUPERVECTOR_MAGIC:
        raise FormatError(f"bad magic {magic!r}", path=str(path), offset=0, module="rbm")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported version {version}", path=str(path), offset=4, module="rbm")

    vectors: List[Supervector] = []
    offset = _SV_HEADER.size
    for _ in range(count):
        if offset + _ID_LEN.size > len(blob):
            raise FormatError("truncated record", path=str(path), offset=offset, module="rbm")
        (id_len,) = _ID_LEN.unpack_from(blob, offset)
        offset += _ID_LEN.size
        if offset + id_len + 8 * dim > len(blob):
            raise FormatError("truncated record", path=str(path), offset=offset, module="rbm")
        item_id = blob[offset:offset + id_len].decode("utf-8")
        offset += id_len
        values = np.frombuffer(blob, dtype="<f8", count=dim, offset=offset)
        offset += 8 * dim
        vectors.append(Supervector(values, item_id))
    if offset != len(blob):
        raise FormatError("trailing bytes after last record", path=str(path), offset=offset, module="rbm")
    return vectors
