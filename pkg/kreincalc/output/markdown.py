from __future__ import annotations

from pathlib import Path

from kreincalc.io.report import ProblemReport, matrix_preview
from kreincalc.output.base import IndexEntry, ReportWriter
from kreincalc.templates import get_template


class MarkdownReportWriter(ReportWriter):
    """Human-readable summaries rendered from ``summary.md.j2`` and ``index.md.j2``."""

    name = "md"
    extension = "md"

    def write_problem(self, report: ProblemReport, path: Path, generated_at: str) -> None:
        template = get_template("summary.md.j2")
        previews = {label: matrix_preview(matrix) for label, matrix in report.outputs.items()}
        path.write_text(template.render(report=report, previews=previews, generated_at=generated_at))

    def write_index(self, out_dir: Path, entries: list[IndexEntry], generated_at: str) -> Path:
        path = out_dir / "index.md"
        template = get_template("index.md.j2")
        path.write_text(template.render(entries=entries, generated_at=generated_at))
        return path
