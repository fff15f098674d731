"""Experiment reports and their JSON / CSV serializations.

Output bytes depend only on the report contents: keys are sorted, rows are
ordered by (function_id, operator, param) and no timestamps are written.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

SCHEMA = "gvlp-report/1"
CSV_HEADER = ("function_id", "operator", "param", "ratio", "verdict")


@dataclass(frozen=True)
class Row:
    function_id: str
    operator: str
    param: str
    ratio: float
    verdict: str

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.function_id, self.operator, self.param)


@dataclass(frozen=True)
class Verdict:
    """Outcome of one check. ``asserted`` verdicts decide the exit status."""

    name: str
    criterion: str
    passed: bool
    asserted: bool = True
    detail: str = ""


@dataclass
class ExperimentReport:
    command: str
    config_hash: str
    seed: int
    notes: list[str] = field(default_factory=list)
    rows: list[Row] = field(default_factory=list)
    constants: dict[str, float] = field(default_factory=dict)
    verdicts: list[Verdict] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts if v.asserted)

    def failures(self) -> list[Verdict]:
        return [v for v in self.verdicts if v.asserted and not v.passed]

    def merge(self, other: "ExperimentReport") -> None:
        self.notes += [n for n in other.notes if n not in self.notes]
        self.rows += other.rows
        self.constants.update(other.constants)
        self.verdicts += other.verdicts
        self.data.update(other.data)
        self.flags += [f for f in other.flags if f not in self.flags]

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": self.command,
            "config_hash": self.config_hash,
            "seed": self.seed,
            "notes": list(self.notes),
            "flags": list(self.flags),
            "passed": bool(self.passed),
            "constants": {k: _num(v) for k, v in sorted(self.constants.items())},
            "verdicts": [
                {"name": v.name, "criterion": v.criterion, "passed": bool(v.passed), "asserted": bool(v.asserted),
                 "detail": v.detail}
                for v in self.verdicts
            ],
            "rows": [
                {"function_id": r.function_id, "operator": r.operator, "param": r.param,
                 "ratio": _num(r.ratio), "verdict": r.verdict}
                for r in sorted(self.rows, key=lambda r: r.key)
            ],
            "data": _clean(self.data),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in sorted(self.rows, key=lambda r: r.key):
            w.writerow([r.function_id, r.operator, r.param, repr(float(r.ratio)), r.verdict])
        return buf.getvalue()

    def summary_lines(self) -> list[str]:
        out = [f"{'PASS' if v.passed else 'FAIL'}{'' if v.asserted else ' (info)'} [{v.criterion}] {v.name}"
               + (f": {v.detail}" if v.detail else "") for v in self.verdicts]
        out += [f"FLAG {f}" for f in self.flags]
        return out


def _num(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "tolist"):
        return _clean(obj.tolist())
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, float):
        return _num(obj)
    return str(obj)


def emit_report(report: ExperimentReport, path: str | Path, fmt: str = "json") -> Path:
    if fmt == "json":
        text = report.to_json()
    elif fmt == "csv":
        text = report.to_csv()
    else:
        raise ValueError(f"unknown format {fmt!r}")
    path = Path(path)
    try:
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True)
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
    return path
