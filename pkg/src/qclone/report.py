"""Experiment reports and their JSON / CSV encodings.

Floats are written with 17 significant digits in both formats so that a
report read back from either one reproduces the exact binary values.
Rationals travel as ``"p/q"`` strings.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

_FLOAT_TAG = "\x00f17:"
_TAGGED = re.compile(r'"\\u0000f17:([^"]*)"')


def format_float(x: float) -> str:
    return format(x, ".17g")


def fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass
class Check:
    name: str
    passed: bool
    value: Any = None
    tolerance: Any = None
    # internal checks gate the exit code always; acceptance ones only under --strict
    kind: str = "internal"


@dataclass
class ExperimentReport:
    command: str
    parameters: dict[str, Any]
    rows: list[dict[str, Any]]
    metadata: dict[str, Any] = field(default_factory=dict)
    summary: dict[str, Any] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)

    def failed(self, strict: bool = False) -> list[Check]:
        return [c for c in self.checks if not c.passed and (strict or c.kind == "internal")]

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "rows": self.rows,
            "metadata": self.metadata,
            "summary": self.summary,
            "checks": [vars(c) for c in self.checks],
        }


def _prepare(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return _FLOAT_TAG + format_float(obj + 0.0)  # folds -0.0
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    if isinstance(obj, dict):
        return {str(k): _prepare(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_prepare(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return _prepare(obj.item())
    if hasattr(obj, "tolist"):
        return _prepare(obj.tolist())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(report: ExperimentReport) -> str:
    text = json.dumps(_prepare(report.to_dict()), sort_keys=True, indent=2)
    return _TAGGED.sub(r"\1", text) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format_float(v) if math.isfinite(v) else ""
    if isinstance(v, Fraction):
        return fraction_str(v)
    return str(v)


def to_csv(report: ExperimentReport) -> str:
    columns: list[str] = []
    for row in report.rows:
        columns.extend(k for k in row if k not in columns)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in report.rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()
