"""Run reports and their human / JSON renderings.

JSON schema (one object per entry, in catalog order)::

    {
      "name": str, "mode": "formal" | "pair" | "strange" | "quantum",
      "params": {str: int | str | bool}, "options": {str: int},
      "status": "pass" | "fail" | "root_rejected" | "error",
      "witness": {...},          # only when status == "fail"
      "message": str,            # only for root_rejected / error
      "timing": {"seconds": float, "cached": bool},
      "engine_version": str, "catalog_digest": str
    }

Rationals are strings ``"p/q"`` (``"p"`` when integral); cyclotomic numbers
are ``{"order": M, "coords": ["p/q", ...]}``.  ``timing`` is the only field
outside the determinism contract.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional

STATUSES = ("pass", "fail", "root_rejected", "error")


def rational(c) -> str:
    return str(Fraction(c))


@dataclass
class RunReport:
    name: str
    mode: str
    params: Dict[str, Any]
    options: Dict[str, int]
    status: str
    witness: Optional[Dict[str, Any]] = None
    message: str = ""
    timing: Dict[str, Any] = field(default_factory=dict)
    engine_version: str = ""
    catalog_digest: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")
        if self.status == "fail" and self.witness is None:
            raise ValueError("a failing report needs a witness")
        if self.status != "fail":
            self.witness = None

    @property
    def failed(self) -> bool:
        return self.status in ("fail", "error")

    def to_record(self) -> Dict[str, Any]:
        rec: Dict[str, Any] = {
            "name": self.name,
            "mode": self.mode,
            "params": dict(self.params),
            "options": dict(self.options),
            "status": self.status,
        }
        if self.witness is not None:
            rec["witness"] = self.witness
        if self.message:
            rec["message"] = self.message
        rec["timing"] = dict(self.timing)
        rec["engine_version"] = self.engine_version
        rec["catalog_digest"] = self.catalog_digest
        return rec

    @classmethod
    def from_record(cls, rec: Dict[str, Any]) -> "RunReport":
        return cls(
            rec["name"],
            rec["mode"],
            dict(rec["params"]),
            dict(rec["options"]),
            rec["status"],
            rec.get("witness"),
            rec.get("message", ""),
            dict(rec.get("timing", {})),
            rec.get("engine_version", ""),
            rec.get("catalog_digest", ""),
        )


def _params_text(r: RunReport) -> str:
    items = list(r.params.items()) + [(k, v) for k, v in r.options.items()]
    return " ".join(f"{k}={str(v).lower() if isinstance(v, bool) else v}" for k, v in items)


def _witness_text(w: Dict[str, Any]) -> str:
    parts = []
    for k, v in w.items():
        if isinstance(v, dict) and "coords" in v:
            v = f"[{v['order']}]({', '.join(v['coords'])})"
        parts.append(f"{k}={v}")
    return " ".join(parts)


def emit_report(reports: Iterable[RunReport], fmt: str = "human") -> bytes:
    reports = list(reports)
    if fmt == "json":
        return (json.dumps([r.to_record() for r in reports], indent=2, sort_keys=False) + "\n").encode()
    if fmt != "human":
        raise ValueError(f"unknown format {fmt!r}")
    rows = [("STATUS", "MODE", "NAME", "PARAMS", "SECONDS")]
    for r in reports:
        secs = r.timing.get("seconds")
        rows.append((r.status.upper(), r.mode, r.name, _params_text(r), "" if secs is None else f"{secs:.2f}"))
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines: List[str] = []
    for i, row in enumerate(rows):
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
        elif reports[i - 1].witness is not None:
            lines.append("    witness: " + _witness_text(reports[i - 1].witness))
        elif reports[i - 1].message:
            lines.append("    note: " + reports[i - 1].message)
    counts = {s: sum(r.status == s for r in reports) for s in STATUSES}
    lines.append("")
    lines.append(", ".join(f"{n} {s}" for s, n in counts.items()) + f" ({len(reports)} entries)")
    return ("\n".join(lines) + "\n").encode()
