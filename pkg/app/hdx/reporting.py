"""Report files: one JSON document per verdict, one CSV row per verdict.

All writes go through a single ReportWriter, which owns the output
directory. JSON uses sorted keys; the CSV leaves out the generation
timestamp so that identical runs give identical bytes.
"""
import csv
import json
import logging
import math
import sys
import threading
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

from .models import TheoremVerdict

logger = logging.getLogger(__name__)

CSV_VERSION_LINE = "# hdx-verdicts-csv v1"
CSV_COLUMNS = ("point", "check", "theorem", "status", "pass", "lhs", "rhs_terms", "fitted_constants", "params",
               "seed")


def _finite(data: Any) -> Any:
    """Non-finite floats become null; JSON has no inf or nan."""
    if isinstance(data, float):
        return data if math.isfinite(data) else None
    if isinstance(data, dict):
        return {str(key): _finite(value) for key, value in data.items()}
    if isinstance(data, (list, tuple)):
        return [_finite(value) for value in data]
    return data


def dumps(data: Any) -> str:
    return json.dumps(_finite(data), sort_keys=True, indent=2, allow_nan=False, default=str)


def write_json(data: Any, target: Path) -> Path:
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(dumps(data) + "\n", encoding="utf-8")
    return target


def _compact(data: Any) -> str:
    return json.dumps(_finite(data), sort_keys=True, separators=(",", ":"), allow_nan=False, default=str)


class ReportWriter:
    """Single writer for verdict JSON files, the sweep CSV and the run summary."""

    def __init__(self, output_dir: Path):
        self.output_dir = Path(output_dir)
        self.verdict_dir = self.output_dir / "verdicts"
        self.csv_path = self.output_dir / "verdicts.csv"
        self._lock = threading.Lock()
        self._rows = 0
        self.verdict_dir.mkdir(parents=True, exist_ok=True)
        with self.csv_path.open("w", encoding="utf-8", newline="") as handle:
            handle.write(CSV_VERSION_LINE + "\n")
            csv.writer(handle, lineterminator="\n").writerow(CSV_COLUMNS)

    def write(self, point: int, check_id: str, verdicts: List[TheoremVerdict]) -> List[Path]:
        paths = []
        with self._lock:
            for index, verdict in enumerate(verdicts):
                suffix = f"_{index}" if len(verdicts) > 1 else ""
                name = f"{point:04d}_{check_id.replace('/', '-')}{suffix}.json"
                paths.append(write_json(verdict.to_dict(), self.verdict_dir / name))
                self._append_row(point, check_id, verdict)
        return paths

    def _append_row(self, point: int, check_id: str, verdict: TheoremVerdict) -> None:
        data = verdict.to_dict()
        row = [
            point,
            check_id,
            verdict.theorem,
            verdict.status.value,
            "" if verdict.passed is None else str(verdict.passed).lower(),
            "" if verdict.lhs is None else repr(verdict.lhs),
            _compact(data["rhs_terms"]),
            _compact(data["fitted_constants"]),
            _compact(data["params"]),
            "" if verdict.seed is None else verdict.seed,
        ]
        with self.csv_path.open("a", encoding="utf-8", newline="") as handle:
            csv.writer(handle, lineterminator="\n").writerow(row)
        self._rows += 1

    def write_summary(self, summary: Dict[str, Any]) -> Path:
        with self._lock:
            return write_json(summary, self.output_dir / "summary.json")

    @property
    def rows(self) -> int:
        return self._rows


def read_csv(path: Path) -> List[Dict[str, str]]:
    """Rows of a verdict CSV; rejects files without the version line."""
    with Path(path).open(encoding="utf-8", newline="") as handle:
        first = handle.readline().rstrip("\n")
        if first != CSV_VERSION_LINE:
            raise ValueError(f"{path} is not a {CSV_VERSION_LINE[2:]} file")
        return list(csv.DictReader(handle))


def emit(data: Any, out: Optional[Path] = None, stream=None) -> None:
    """JSON to a file, or to stdout when no path is given."""
    if out is not None:
        write_json(data, Path(out))
        logger.info("Wrote %s", out)
        return
    (stream or sys.stdout).write(dumps(data) + "\n")


def status_counts(verdicts: Iterable[TheoremVerdict]) -> Dict[str, int]:
    counts: Dict[str, int] = {}
    for verdict in verdicts:
        counts[verdict.status.value] = counts.get(verdict.status.value, 0) + 1
    return dict(sorted(counts.items()))
