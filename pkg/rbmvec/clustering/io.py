"""Cluster assignment and merge-history CSV files."""

import csv
import io
from pathlib import Path
from typing import Dict, Mapping, Sequence

from rbmvec.clustering.ahc import Merge
from rbmvec.errors import FormatError
from rbmvec.utils import fmt_float, write_file


def save_clusters(assignment: Mapping[str, object], path: Path) -> None:
    """``item_id,cluster_index`` rows in assignment order."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["item_id", "cluster_index"])
    for item_id, cluster in assignment.items():
        writer.writerow([item_id, cluster])
    write_file(Path(path), buf.getvalue())


def load_clusters(path: Path) -> Dict[str, str]:
    """Read a cluster CSV; cluster ids are kept as strings."""
    path = Path(path)
    out: Dict[str, str] = {}
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if not header or [h.strip() for h in header[:2]] != ["item_id", "cluster_index"]:
            raise FormatError("expected header 'item_id,cluster_index'", path=str(path), line=1, module="clustering")
        for row in reader:
            if not row:
                continue
            if len(row) != 2:
                raise FormatError("expected two columns", path=str(path), line=reader.line_num, module="clustering")
            if row[0] in out:
                raise FormatError(f"duplicate item id {row[0]!r}", path=str(path), line=reader.line_num, module="clustering")
            out[row[0]] = row[1]
    return out


def save_merge_history(merges: Sequence[Merge], path: Path) -> None:
    """``step,score,members_a,members_b`` with members joined by ';'."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["step", "score", "members_a", "members_b"])
    for step, merge in enumerate(merges, 1):
        writer.writerow([step, fmt_float(merge.score), ";".join(merge.members_a), ";".join(merge.members_b)])
    write_file(Path(path), buf.getvalue())
