"""Report documents and deterministic emitters.

JSON output is byte-stable: sorted keys, rationals as "p/q" strings, LF
newlines, no trailing whitespace.  The schema identifier is versioned so
golden files can be pinned.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

SCHEMA = "derlie-report/1"


def rat(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


@dataclass
class ReportDocument:
    command: str
    inputs: dict
    max_degree: int
    result: dict
    schema: str = SCHEMA

    def payload(self) -> dict:
        return {
            "schema": self.schema,
            "command": self.command,
            "inputs": self.inputs,
            "max_degree": self.max_degree,
            "result": self.result,
        }


def emit(report: ReportDocument, format: str = "json") -> bytes:
    if format == "json":
        text = json.dumps(report.payload(), sort_keys=True, indent=2,
                          ensure_ascii=False)
        return (text + "\n").encode("utf-8")
    if format == "table":
        return (_table(report) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {format!r}")


def _table(report: ReportDocument) -> str:
    lines = [f"{report.command} (max degree {report.max_degree})"]
    lines.extend(_render(report.result, indent=2))
    return "\n".join(lines)


def _render(value, indent: int) -> list[str]:
    pad = " " * indent
    if isinstance(value, dict):
        out = []
        for k in value:
            v = value[k]
            if isinstance(v, (dict, list)):
                out.append(f"{pad}{k}:")
                out.extend(_render(v, indent + 2))
            else:
                out.append(f"{pad}{k}: {v}")
        return out
    if isinstance(value, list):
        out = []
        for v in value:
            if isinstance(v, (dict, list)):
                out.append(f"{pad}-")
                out.extend(_render(v, indent + 2))
            else:
                out.append(f"{pad}- {v}")
        return out
    return [f"{pad}{value}"]
