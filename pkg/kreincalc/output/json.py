from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path
from typing import Any

from kreincalc.io.report import ProblemReport
from kreincalc.output.base import IndexEntry, ReportWriter


def _dump(data: Any, path: Path) -> None:
    path.write_text(json.dumps(data, indent=2) + "\n")


class JsonReportWriter(ReportWriter):
    """Machine-readable reports; ``generated_at`` is the only nondeterministic field."""

    name = "json"
    extension = "json"

    def write_problem(self, report: ProblemReport, path: Path, generated_at: str) -> None:
        _dump({"generated_at": generated_at, **report.as_dict()}, path)

    def write_index(self, out_dir: Path, entries: list[IndexEntry], generated_at: str) -> Path:
        path = out_dir / "index.json"
        _dump(
            {
                "generated_at": generated_at,
                "passed": all(e.passed for e in entries),
                "problems": [asdict(e) for e in entries],
            },
            path,
        )
        return path
