"""Check records and reports produced by every verification routine."""
from __future__ import annotations

import json
import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


def jsonable(obj):
    """Convert witnesses (elements, tuples, fractions, ...) into JSON values."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return "inf" if math.isinf(obj) else obj
    if isinstance(obj, Fraction):
        return str(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((jsonable(x) for x in obj), key=repr)
    return str(obj)


@dataclass
class Check:
    check_id: str
    anchor: str
    status: str
    witness: object = None
    window: tuple[int, int] | None = None
    detail: str = ""
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "check": self.check_id,
            "anchor": self.anchor,
            "status": self.status,
            "witness": jsonable(self.witness),
            "window": None if self.window is None else list(self.window),
            "detail": self.detail,
        }
        if timings:
            out["wall_time"] = round(self.wall_time, 6)
        return out


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    def add(self, check_id, anchor, ok, witness=None, window=None, detail="", status=None, wall_time=0.0):
        if status is None:
            status = PASS if ok else FAIL
        c = Check(check_id, anchor, status, None if status == PASS else witness, window, detail, wall_time)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = ""):
        for c in other.checks:
            if prefix:
                c.check_id = f"{prefix}{c.check_id}"
            self.checks.append(c)
        return self

    @contextmanager
    def timed(self):
        """Stamp the wall time of every check added inside the block."""
        start, n = time.perf_counter(), len(self.checks)
        yield
        elapsed = time.perf_counter() - start
        for c in self.checks[n:]:
            c.wall_time = elapsed

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def get(self, check_id: str) -> Check:
        for c in self.checks:
            if c.check_id == check_id:
                return c
        raise KeyError(check_id)

    def __iter__(self):
        return iter(self.checks)

    def __len__(self):
        return len(self.checks)


def emit_report(report: Report, format: str = "json", timings: bool = False) -> str:
    if format == "json":
        body = {
            "passed": report.passed,
            "counts": {
                s: sum(c.status == s for c in report.checks) for s in (PASS, FAIL, INCONCLUSIVE)
            },
            "checks": [c.to_json(timings) for c in report.checks],
        }
        return json.dumps(body, indent=2, sort_keys=True)
    if format != "text":
        raise ValueError(f"unknown format {format!r}")
    lines = []
    for c in report.checks:
        line = f"[{c.status.upper():>12}] {c.check_id}  ({c.anchor})"
        if c.window is not None:
            line += f"  window={c.window[0]}:{c.window[1]}"
        if timings:
            line += f"  {c.wall_time:.3f}s"
        lines.append(line)
        if c.detail:
            lines.append(f"               {c.detail}")
        if c.witness is not None and c.status != PASS:
            lines.append(f"               witness: {jsonable(c.witness)}")
    n_fail = len(report.failures())
    lines.append(f"{len(report.checks)} checks, {n_fail} failed")
    return "\n".join(lines)
