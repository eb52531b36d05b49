"""Pass/fail reports shared by every checker in the package."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator


@dataclass
class Check:
    name: str
    passed: bool
    witness: Any = None
    anchor: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "paper_anchor": self.anchor,
            "status": "pass" if self.passed else "fail",
            "witness": jsonable(self.witness),
        }


@dataclass
class Report:
    """An ordered list of named checks.

    A report is truthy iff every check passed. Checks are kept in insertion
    order so that JSON output is reproducible.
    """

    checks: list[Check] = field(default_factory=list)
    title: str = ""

    def add(self, name: str, passed: bool, witness: Any = None, anchor: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), witness, anchor))
        return bool(passed)

    def fail(self, name: str, witness: Any = None, anchor: str = "") -> bool:
        return self.add(name, False, witness, anchor)

    def extend(self, other: "Report", prefix: str = "") -> "Report":
        for c in other.checks:
            name = f"{prefix}{c.name}" if prefix else c.name
            self.checks.append(Check(name, c.passed, c.witness, c.anchor))
        return self

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def first_failure(self) -> Check | None:
        for c in self.checks:
            if not c.passed:
                return c
        return None

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __bool__(self) -> bool:
        return self.ok

    def __iter__(self) -> Iterator[Check]:
        return iter(self.checks)

    def __len__(self) -> int:
        return len(self.checks)

    def to_dict(self) -> dict:
        return {"title": self.title, "checks": [c.to_dict() for c in self.checks]}

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            w = "" if c.passed or c.witness is None else f"  witness={fmt(c.witness)}"
            lines.append(f"[{mark}] {c.name}{w}")
        return "\n".join(lines)


def fmt(x: Any) -> str:
    """Render an identifier (string or nested tuple) compactly."""
    if isinstance(x, tuple):
        return "(" + ",".join(fmt(y) for y in x) + ")"
    if isinstance(x, (list, frozenset, set)):
        items = sorted(x, key=repr) if not isinstance(x, list) else x
        return "[" + ", ".join(fmt(y) for y in items) + "]"
    if isinstance(x, dict):
        return "{" + ", ".join(f"{fmt(k)}: {fmt(v)}" for k, v in x.items()) + "}"
    return str(x)


def jsonable(x: Any) -> Any:
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    if isinstance(x, tuple):
        return fmt(x)
    if isinstance(x, dict):
        return {fmt(k) if not isinstance(k, str) else k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, set, frozenset)):
        items = list(x) if isinstance(x, list) else sorted(x, key=repr)
        return [jsonable(y) for y in items]
    return str(x)


def all_ok(reports: Iterable[Report]) -> bool:
    return all(r.ok for r in reports)
