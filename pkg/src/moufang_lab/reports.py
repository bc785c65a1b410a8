"""Pass/fail/skip verdicts shared by every checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass
class Report:
    check: str
    status: str
    ref: str = ""
    reason: str = ""
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    clauses: list["Report"] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    @property
    def skipped(self) -> bool:
        return self.status == SKIP

    def clause(self, name: str) -> "Report":
        for c in self.clauses:
            if c.check == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"check": self.check, "status": self.status}
        if self.ref:
            out["ref"] = self.ref
        if self.reason:
            out["reason"] = self.reason
        if self.witnesses:
            out["witnesses"] = [_jsonable(w) for w in self.witnesses[:10]]
        if self.details:
            out["details"] = {k: _jsonable(v) for k, v in self.details.items()}
        if self.clauses:
            out["clauses"] = [c.to_dict() for c in self.clauses]
        return out

    def lines(self, indent: int = 0) -> list[str]:
        pad = "  " * indent
        head = f"{pad}[{self.status.upper():4}] {self.check}"
        if self.ref:
            head += f" ({self.ref})"
        if self.reason:
            head += f": {self.reason}"
        out = [head]
        for w in self.witnesses[:3]:
            out.append(f"{pad}    witness: {w}")
        for c in self.clauses:
            out.extend(c.lines(indent + 1))
        return out

    def __str__(self):
        return "\n".join(self.lines())


def outcome(check: str, ok: bool, ref: str = "", witnesses=None, reason: str = "", **details) -> Report:
    return Report(check, PASS if ok else FAIL, ref=ref, reason=reason, witnesses=list(witnesses or []), details=details)


def skipped(check: str, reason: str, ref: str = "", **details) -> Report:
    return Report(check, SKIP, ref=ref, reason=reason, details=details)


def combine(check: str, clauses: list[Report], ref: str = "", **details) -> Report:
    """Fail if any clause fails; skip only if every clause skipped."""
    if any(c.failed for c in clauses):
        status = FAIL
    elif clauses and all(c.skipped for c in clauses):
        status = SKIP
    else:
        status = PASS
    return Report(check, status, ref=ref, clauses=clauses, details=details)


def _jsonable(v):
    try:
        import numpy as np
    except ImportError:  # pragma: no cover
        np = None
    if np is not None:
        if isinstance(v, np.ndarray):
            return v.tolist()
        if isinstance(v, np.generic):
            return v.item()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v
