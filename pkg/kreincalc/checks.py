"""Residual reports produced by the verification operations.

Verification never raises for a failed identity.  Each identity becomes a
:class:`CheckEntry` carrying its residual, the tolerance it was compared
against and the verdict; a :class:`CheckReport` rolls the entries up.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np


@dataclass(frozen=True)
class CheckEntry:
    name: str
    residual: float
    tolerance: float
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "detail": self.detail,
        }


@dataclass
class CheckReport:
    title: str
    entries: list[CheckEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def add(self, name: str, residual: float, tolerance: float, detail: str = "") -> CheckEntry:
        residual = float(residual)
        tolerance = float(tolerance)
        entry = CheckEntry(name, residual, tolerance, bool(residual <= tolerance), detail)
        self.entries.append(entry)
        return entry

    def flag(self, name: str, passed: bool, detail: str = "") -> CheckEntry:
        """Record a yes/no check that has no natural residual."""
        passed = bool(passed)
        entry = CheckEntry(name, 0.0 if passed else 1.0, 0.0, passed, detail)
        self.entries.append(entry)
        return entry

    def add_matrix(self, name: str, lhs: np.ndarray, rhs: np.ndarray, tolerance: float, detail: str = "") -> CheckEntry:
        """Relative residual ``||lhs - rhs|| / max(1, ||lhs||, ||rhs||)``."""
        return self.add(name, relative_residual(lhs, rhs), tolerance, detail)

    def extend(self, entries: Iterable[CheckEntry]) -> None:
        self.entries.extend(entries)

    def merge(self, other: CheckReport) -> None:
        self.entries.extend(other.entries)

    def failures(self) -> list[CheckEntry]:
        return [e for e in self.entries if not e.passed]

    def max_residual(self, name: str | None = None) -> float:
        values = [e.residual for e in self.entries if name is None or e.name == name]
        return max(values, default=0.0)

    def summary(self) -> dict[str, dict[str, Any]]:
        """Per-identity worst residual, keyed by check name in insertion order."""
        table: dict[str, dict[str, Any]] = {}
        for e in self.entries:
            row = table.setdefault(e.name, {"residual": 0.0, "tolerance": e.tolerance, "passed": True, "count": 0})
            row["residual"] = max(row["residual"], e.residual)
            row["passed"] = row["passed"] and e.passed
            row["count"] += 1
        return table

    def as_dict(self) -> dict[str, Any]:
        return {
            "title": self.title,
            "passed": self.passed,
            "summary": self.summary(),
            "entries": [e.as_dict() for e in self.entries],
        }


def relative_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    if lhs.shape != rhs.shape:
        return float("inf")
    if lhs.size == 0:
        return 0.0
    scale = max(1.0, float(np.linalg.norm(lhs, 2)), float(np.linalg.norm(rhs, 2)))
    return float(np.linalg.norm(lhs - rhs, 2)) / scale
