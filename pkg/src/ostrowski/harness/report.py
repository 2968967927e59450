"""CSV and JSON writers for run reports."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Optional, Union

from .runner import Row, RunReport

CSV_COLUMNS = ("function", "eta", "a", "b", "bound_id", "x", "q", "lhs", "rhs", "slack", "holds", "skip_reason")


def _num(value: Optional[float]) -> str:
    # repr gives the shortest round-trip decimal
    return "" if value is None else repr(float(value))


def _flag(value: Optional[bool]) -> str:
    return "" if value is None else ("true" if value else "false")


def csv_row(row: Row):
    return [
        row.function, row.eta, _num(row.a), _num(row.b), row.bound_id, _num(row.x), _num(row.q),
        _num(row.lhs), _num(row.rhs), _num(row.slack), _flag(row.holds), row.skip_reason,
    ]


def to_csv(report: RunReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in sorted(report.rows, key=Row.sort_key):
        writer.writerow(csv_row(row))
    return buf.getvalue()


def to_json(report: RunReport) -> str:
    rows = []
    for row in sorted(report.rows, key=Row.sort_key):
        entry = dict(zip(CSV_COLUMNS, (
            row.function, row.eta, row.a, row.b, row.bound_id, row.x, row.q,
            row.lhs, row.rhs, row.slack, row.holds, row.skip_reason,
        )))
        entry["certs"] = row.certs
        rows.append(entry)
    payload = {"provenance": report.provenance, "summary": report.summary, "rows": rows}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def emit_report(report: RunReport, path: Union[str, Path], fmt: str = "csv") -> Path:
    """Write the report; raises OSError when the path is not writable."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown report format {fmt!r}")
    text = to_csv(report) if fmt == "csv" else to_json(report)
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write(text)
    return path


def read_csv(path: Union[str, Path]):
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))
