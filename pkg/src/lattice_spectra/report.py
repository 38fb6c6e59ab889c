"""CSV/JSON writers for reports and search traces, plus the run manifest."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .inequalities import InequalityRecord
from .search import SENTINEL, SearchTrace

REPORT_COLUMNS = ["region_id", "inequality_id", "k", "lhs", "rhs", "slack", "precondition_met", "pass"]
TRACE_COLUMNS = ["step", "objective", "accepted", "best_so_far"]


def fmt_float(x: float) -> str:
    """repr() round-trips; infinities print as "inf"/"-inf", NaN as "nan"."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _fmt_bool(b: bool) -> str:
    return "true" if b else "false"


def record_row(region_id: str, rec: InequalityRecord) -> dict[str, str]:
    return {
        "region_id": region_id,
        "inequality_id": rec.inequality_id,
        "k": str(rec.k),
        "lhs": fmt_float(rec.lhs),
        "rhs": fmt_float(rec.rhs),
        "slack": fmt_float(rec.slack),
        "precondition_met": _fmt_bool(rec.precondition_met),
        "pass": _fmt_bool(rec.passed),
    }


def records_to_csv(rows: Iterable[tuple[str, InequalityRecord]]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=REPORT_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for rid, rec in rows:
        writer.writerow(record_row(rid, rec))
    return buf.getvalue()


def _json_float(x: float):
    return fmt_float(x) if not math.isfinite(x) else float(x)


def records_to_json(rows: Iterable[tuple[str, InequalityRecord]], manifest: str | None = None) -> str:
    items = []
    for rid, rec in rows:
        items.append({
            "region_id": rid,
            "inequality_id": rec.inequality_id,
            "k": rec.k,
            "lhs": _json_float(rec.lhs),
            "rhs": _json_float(rec.rhs),
            "slack": _json_float(rec.slack),
            "precondition_met": rec.precondition_met,
            "pass": rec.passed,
        })
    payload: dict = {"records": items}
    if manifest:
        payload["manifest"] = manifest
    return json.dumps(payload, indent=1) + "\n"


def read_report_csv(path: str | Path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def trace_to_csv(trace: SearchTrace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRACE_COLUMNS)
    for i, (obj, ok, best) in enumerate(zip(trace.objectives, trace.accepted, trace.best_so_far)):
        writer.writerow([i, fmt_float(math.inf if obj >= SENTINEL else obj), _fmt_bool(ok),
                         fmt_float(math.inf if best >= SENTINEL else best)])
    return buf.getvalue()


@dataclass
class RunManifest:
    command: str
    config: dict
    seeds: list[int] = field(default_factory=list)
    inputs: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    tool_version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))
    argv: list[str] = field(default_factory=lambda: list(sys.argv))


def manifest_path(output: str | Path) -> Path:
    """Sidecar name shared by every output of one run: ``<primary output>.manifest.json``."""
    output = Path(output)
    return output.with_name(output.name + ".manifest.json")


def write_manifest(manifest: RunManifest, primary_output: str | Path) -> Path:
    path = manifest_path(primary_output)
    path.write_text(json.dumps(asdict(manifest), indent=1, sort_keys=True) + "\n", encoding="utf-8")
    return path


def summary_line(records: Sequence[InequalityRecord]) -> str:
    checked = [r for r in records if r.precondition_met]
    ok = sum(r.passed for r in checked)
    tag = "PASS" if ok == len(checked) else "FAIL"
    return f"{tag} {ok}/{len(checked)}"
