"""Deterministic check reports.

A report is the unit of CLI output: the command that ran, its configuration,
one verdict line per check, and a summary.  Identical inputs must produce
byte-identical JSON, so every wall-clock quantity lives inside the single
"timestamp" field, which comparison strips.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .serialize import SCHEMA_VERSION, Document, dumps_canonical


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    witness: Document | None = None


@dataclass
class Report:
    command: list[str]
    config: Document = field(default_factory=dict)
    checks: list[CheckResult] = field(default_factory=list)
    started: float = field(default_factory=time.monotonic)

    def add(self, name: str, ok: bool, detail: str = "",
            witness: Document | None = None) -> bool:
        self.checks.append(CheckResult(name, bool(ok), detail, witness))
        return bool(ok)

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.ok)

    def to_dict(self) -> Document:
        checks = []
        for c in self.checks:
            entry: Document = {"name": c.name, "ok": c.ok, "detail": c.detail}
            if c.witness is not None:
                entry["witness"] = c.witness
            checks.append(entry)
        return {
            "type": "report",
            "schema": SCHEMA_VERSION,
            "command": list(self.command),
            "config": dict(self.config),
            "checks": checks,
            "summary": {"checks": len(self.checks),
                        "failed": sum(1 for c in self.checks if not c.ok),
                        "ok": self.ok},
            "timestamp": {
                "written": datetime.now(timezone.utc).isoformat(timespec="seconds"),
                "elapsed_s": round(time.monotonic() - self.started, 3),
            },
        }

    def render_text(self) -> str:
        lines = [f"command: {' '.join(self.command)}"]
        for c in self.checks:
            mark = "  ok" if c.ok else "FAIL"
            detail = f"  {c.detail}" if c.detail else ""
            lines.append(f"[{mark}] {c.name}{detail}")
            if not c.ok and c.witness is not None:
                lines.append(f"       witness: {json.dumps(c.witness, sort_keys=True)}")
        failed = sum(1 for c in self.checks if not c.ok)
        verdict = "all checks passed" if failed == 0 else f"{failed} check(s) FAILED"
        lines.append(f"summary: {len(self.checks) - failed}/{len(self.checks)} ok; {verdict}")
        return "\n".join(lines) + "\n"


def strip_timestamp(doc: Document) -> Document:
    out = dict(doc)
    out.pop("timestamp", None)
    return out


def _as_doc(report: Document | str) -> Document:
    if isinstance(report, str):
        return json.loads(report)
    return report


def reports_equal_modulo_timestamp(a: Document | str, b: Document | str) -> bool:
    da, db = strip_timestamp(_as_doc(a)), strip_timestamp(_as_doc(b))
    return dumps_canonical(da) == dumps_canonical(db)
