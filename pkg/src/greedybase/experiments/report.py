"""Run reports: tagged numbers, pass/fail checks, and their serialisations."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

COMPUTED, EXPECTED = "computed", "expected"

EXIT_PASS, EXIT_FAIL, EXIT_CAP = 0, 1, 2


@dataclass
class Quantity:
    name: str
    value: Any
    source: str = COMPUTED

    def __post_init__(self):
        if self.source not in (COMPUTED, EXPECTED):
            raise ValueError(f"source must be {COMPUTED!r} or {EXPECTED!r}, got {self.source!r}")

    def to_json(self) -> dict:
        return {"name": self.name, "value": _plain(self.value), "source": self.source}


@dataclass
class Check:
    """One assertion: ``computed`` must relate to ``expected`` as ``relation`` says."""

    name: str
    passed: bool
    computed: Any = None
    expected: Any = None
    relation: str = "=="
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "computed": _plain(self.computed),
            "expected": _plain(self.expected),
            "relation": self.relation,
            "detail": self.detail,
        }


def _plain(value):
    # big ints stay exact in JSON; tuples become lists, fractions 'p/q'
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, Fraction):
        return str(value)
    if hasattr(value, "item"):
        return value.item()
    return value


@dataclass
class RunReport:
    command: str
    params: dict
    seed: int | None = None
    quantities: list[Quantity] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    capped: bool = False
    notes: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    elapsed: float | None = None

    def add(self, name: str, value, source: str = COMPUTED) -> Any:
        self.quantities.append(Quantity(name, value, source))
        return value

    def expect(self, name: str, computed, expected, relation: str = "==", detail: str = "") -> bool:
        ops = {
            "==": lambda a, b: a == b,
            "<=": lambda a, b: a <= b,
            ">=": lambda a, b: a >= b,
            "<": lambda a, b: a < b,
        }
        passed = bool(ops[relation](computed, expected))
        self.checks.append(Check(name, passed, computed, expected, relation, detail))
        return passed

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), detail=detail))
        return bool(passed)

    def cap(self, note: str):
        self.capped = True
        self.notes.append(note)

    def merge(self, other: "RunReport", prefix: str = ""):
        for q in other.quantities:
            self.quantities.append(Quantity(prefix + q.name, q.value, q.source))
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.computed, c.expected, c.relation, c.detail))
        self.capped |= other.capped
        self.notes.extend(other.notes)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def status(self) -> str:
        if not self.passed:
            return "fail"
        return "capped" if self.capped else "pass"

    @property
    def exit_code(self) -> int:
        if not self.passed:
            return EXIT_FAIL
        return EXIT_CAP if self.capped else EXIT_PASS

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "command": self.command,
            "params": _plain(self.params),
            "seed": self.seed,
            "status": self.status,
            "quantities": [q.to_json() for q in self.quantities],
            "checks": [c.to_json() for c in self.checks],
            "capped": self.capped,
            "notes": list(self.notes),
            "data": _plain(self.data),
        }
        if timing:
            out["elapsed"] = self.elapsed
        return out

    def dumps(self, fmt: str = "json", timing: bool = False) -> str:
        if fmt == "json":
            return json.dumps(self.to_json(timing), indent=2, sort_keys=False) + "\n"
        if fmt == "csv":
            return self._csv()
        if fmt == "text":
            return self._text()
        raise ValueError(f"unknown format {fmt!r}")

    def _csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "name", "value", "source_or_expected", "status"])
        for q in self.quantities:
            w.writerow(["quantity", q.name, json.dumps(_plain(q.value)), q.source, ""])
        for c in self.checks:
            w.writerow(
                [
                    "check",
                    c.name,
                    "" if c.expected is None else json.dumps(_plain(c.computed)),
                    "" if c.expected is None else f"{c.relation} {json.dumps(_plain(c.expected))}",
                    "pass" if c.passed else "fail",
                ]
            )
        return buf.getvalue()

    def _text(self) -> str:
        lines = [f"{self.command} {json.dumps(_plain(self.params), sort_keys=True)}  [{self.status}]"]
        if self.seed is not None:
            lines.append(f"seed {self.seed}")
        width = max([len(q.name) for q in self.quantities] + [len(c.name) for c in self.checks] + [4])
        for q in self.quantities:
            lines.append(f"  {q.name:<{width}}  {_short(q.value)}  ({q.source})")
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            rel = "" if c.expected is None else f"  {_short(c.computed)} {c.relation} {_short(c.expected)}"
            extra = f"  {c.detail}" if c.detail else ""
            lines.append(f"  {mark} {c.name:<{width}}{rel}{extra}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        return "\n".join(lines) + "\n"


def _short(value, limit: int = 60) -> str:
    s = json.dumps(_plain(value))
    return s if len(s) <= limit else s[: limit - 3] + "..."
