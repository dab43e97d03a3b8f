"""Feature, label and MVN-statistics files.

CSV features: header ``item_id,f0,...,f{D-1}``, one row per frame; rows that
share an item_id form that item's frame bag (item order = first appearance).

Binary features: ``RBFV`` magic, u32 version (1), u32 D, u64 frame count,
then per frame a u16-length-prefixed UTF-8 item_id and D little-endian
float64 values.
"""

import csv
import io
import struct
from collections import OrderedDict
from pathlib import Path
from typing import Dict, List, Union

import numpy as np
import yaml

from rbmvec.config import FeatureFormat
from rbmvec.errors import FormatError, ShapeError
from rbmvec.features.dataset import Dataset, ItemFeatures, MvnStats
from rbmvec.utils import fmt_float, write_file

FEATURE_MAGIC = b"RBFV"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIIQ")
_ID_LEN = struct.Struct("<H")


def _as_format(format: Union[str, FeatureFormat]) -> FeatureFormat:
    try:
        return FeatureFormat(format)
    except ValueError:
        raise FormatError(f"unknown feature format {format!r} (use csv or binary)") from None


def load_features(path: Path, format: Union[str, FeatureFormat] = FeatureFormat.CSV) -> Dataset:
    """Read a feature file into a Dataset (items in file order)."""
    path = Path(path)
    if _as_format(format) is FeatureFormat.BINARY:
        return _load_binary(path)
    return _load_csv(path)


def save_features(dataset: Dataset, path: Path, format: Union[str, FeatureFormat] = FeatureFormat.CSV) -> None:
    path = Path(path)
    if _as_format(format) is FeatureFormat.BINARY:
        _save_binary(dataset, path)
    else:
        _save_csv(dataset, path)


def _group(rows: "OrderedDict[str, List[np.ndarray]]") -> Dataset:
    return Dataset(tuple(ItemFeatures(item_id, np.vstack(frames)) for item_id, frames in rows.items()))


def _load_csv(path: Path) -> Dataset:
    rows: "OrderedDict[str, List[np.ndarray]]" = OrderedDict()
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if not header or header[0].strip() != "item_id" or len(header) < 2:
            raise FormatError("expected header 'item_id,f0,...'", path=str(path), line=1)
        dim = len(header) - 1
        for row in reader:
            line = reader.line_num
            if not row:
                continue
            if len(row) != dim + 1:
                raise ShapeError(f"{path}: line {line} has {len(row) - 1} values, expected {dim}")
            try:
                values = np.array([float(x) for x in row[1:]], dtype=np.float64)
            except ValueError as exc:
                raise FormatError(f"bad number: {exc}", path=str(path), line=line) from None
            rows.setdefault(row[0], []).append(values)
    if not rows:
        raise FormatError("no feature rows", path=str(path), line=1)
    return _group(rows)


def _save_csv(dataset: Dataset, path: Path) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["item_id"] + [f"f{i}" for i in range(dataset.dim or 0)])
    for item in dataset:
        for frame in item.frames:
            writer.writerow([item.item_id] + [fmt_float(x) for x in frame])
    write_file(path, buf.getvalue())


def _load_binary(path: Path) -> Dataset:
    blob = path.read_bytes()
    if len(blob) < _HEADER.size:
        raise FormatError("truncated header", path=str(path), offset=len(blob))
    magic, version, dim, count = _HEADER.unpack_from(blob, 0)
    if magic != FEATURE_MAGIC:
        raise FormatError(f"bad magic {magic!r}", path=str(path), offset=0)
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported version {version}", path=str(path), offset=4)
    if dim < 1:
        raise FormatError("dimension must be >= 1", path=str(path), offset=8)

    rows: "OrderedDict[str, List[np.ndarray]]" = OrderedDict()
    offset = _HEADER.size
    record_bytes = 8 * dim
    for _ in range(count):
        if offset + _ID_LEN.size > len(blob):
            raise FormatError("truncated record", path=str(path), offset=offset)
        (id_len,) = _ID_LEN.unpack_from(blob, offset)
        offset += _ID_LEN.size
        if offset + id_len + record_bytes > len(blob):
            raise FormatError("truncated record", path=str(path), offset=offset)
        try:
            item_id = blob[offset:offset + id_len].decode("utf-8")
        except UnicodeDecodeError:
            raise FormatError("item id is not UTF-8", path=str(path), offset=offset) from None
        offset += id_len
        values = np.frombuffer(blob, dtype="<f8", count=dim, offset=offset).astype(np.float64)
        offset += record_bytes
        rows.setdefault(item_id, []).append(values)
    if offset != len(blob):
        raise FormatError("trailing bytes after last record", path=str(path), offset=offset)
    if not rows:
        raise FormatError("no feature records", path=str(path), offset=offset)
    return _group(rows)


def _save_binary(dataset: Dataset, path: Path) -> None:
    chunks = [_HEADER.pack(FEATURE_MAGIC, FORMAT_VERSION, dataset.dim or 0, dataset.n_frames)]
    for item in dataset:
        encoded = item.item_id.encode("utf-8")
        for frame in item.frames:
            chunks.append(_ID_LEN.pack(len(encoded)))
            chunks.append(encoded)
            chunks.append(np.ascontiguousarray(frame, dtype="<f8").tobytes())
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(b"".join(chunks))


def load_labels(path: Path) -> Dict[str, str]:
    """Read an ``item_id,class_id`` CSV."""
    path = Path(path)
    labels: Dict[str, str] = {}
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if not header or [h.strip() for h in header[:2]] != ["item_id", "class_id"]:
            raise FormatError("expected header 'item_id,class_id'", path=str(path), line=1)
        for row in reader:
            if not row:
                continue
            if len(row) != 2:
                raise FormatError("expected two columns", path=str(path), line=reader.line_num)
            if row[0] in labels:
                raise FormatError(f"duplicate item id {row[0]!r}", path=str(path), line=reader.line_num)
            labels[row[0]] = row[1]
    return labels


def save_labels(labels: Dict[str, str], path: Path) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["item_id", "class_id"])
    for item_id, class_id in labels.items():
        writer.writerow([item_id, class_id])
    write_file(Path(path), buf.getvalue())


def save_mvn_stats(stats: MvnStats, path: Path) -> None:
    payload = {"dim": stats.dim, "mean": [float(x) for x in stats.mean], "std": [float(x) for x in stats.std]}
    write_file(Path(path), yaml.safe_dump(payload, sort_keys=False))


def load_mvn_stats(path: Path) -> MvnStats:
    path = Path(path)
    with open(path, encoding="utf-8") as f:
        payload = yaml.safe_load(f)
    if not isinstance(payload, dict) or "mean" not in payload or "std" not in payload:
        raise FormatError("expected 'mean' and 'std' lists", path=str(path))
    return MvnStats(mean=np.array(payload["mean"], dtype=np.float64), std=np.array(payload["std"], dtype=np.float64))
