"""Pass/fail bookkeeping shared by the identity suites."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable


@dataclass
class Check:
    name: str
    passed: bool
    count: int = 0
    counterexample: dict | None = None
    note: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "count": self.count}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def compare(self, name: str, items: Iterable[tuple[Any, Any, Any]], note: str = "") -> Check:
        """items yields (key, lhs, rhs); the first mismatch is kept."""
        n = 0
        bad = None
        for key, lhs, rhs in items:
            n += 1
            if lhs != rhs and bad is None:
                bad = {"at": _plain(key), "lhs": repr(lhs), "rhs": repr(rhs)}
        return self.add(Check(name, bad is None, n, bad, note))

    def assert_all(self, name: str, items: Iterable[tuple[Any, bool, Any]], note: str = "") -> Check:
        """items yields (key, ok, detail)."""
        n = 0
        bad = None
        for key, ok, detail in items:
            n += 1
            if not ok and bad is None:
                bad = {"at": _plain(key), "detail": repr(detail)}
        return self.add(Check(name, bad is None, n, bad, note))

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.count, c.counterexample, c.note))
        for k, v in other.info.items():
            self.info[prefix + k] = v

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {"title": self.title, "ok": self.ok, "info": self.info,
                "checks": [c.to_json() for c in self.checks]}

    def summary(self) -> str:
        lines = [f"{self.title}: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            line = f"  [{mark}] {c.name} ({c.count})"
            if c.counterexample:
                line += f"  first counterexample: {c.counterexample}"
            lines.append(line)
        return "\n".join(lines)


def _plain(key):
    if isinstance(key, (tuple, list)):
        return [_plain(k) for k in key]
    if isinstance(key, (int, str)) or key is None:
        return key
    return repr(key)
