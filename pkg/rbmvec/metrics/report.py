"""Writing evaluation reports."""

from pathlib import Path

from rbmvec.metrics.scores import EvalReport
from rbmvec.utils import write_file


def save_report(report: EvalReport, directory: Path) -> None:
    """Write ``report.csv`` (one row) and ``report.txt`` into ``directory``."""
    directory = Path(directory)
    write_file(directory / "report.csv", report.to_csv())
    write_file(directory / "report.txt", report.to_text())
