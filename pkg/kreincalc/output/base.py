from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path

from kreincalc.config import Config
from kreincalc.io.report import ProblemReport


@dataclass
class IndexEntry:
    """One problem in a batch index."""

    display_name: str
    rel_link: str
    passed: bool
    exit_code: int
    check_count: int = 0
    failure_count: int = 0


def slugify(name: str) -> str:
    slug = "".join(ch if ch.isalnum() or ch in "-_" else "-" for ch in name.strip().lower())
    return slug.strip("-") or "problem"


class ReportWriter(ABC):
    """Writes problem reports in one output format.

    Subclasses set :attr:`name` and :attr:`extension` and implement
    :meth:`write_problem` and :meth:`write_index`.  :meth:`setup` and
    :meth:`teardown` bracket a batch.
    """

    name: str = ""
    extension: str = ""

    def __init__(self, config: Config) -> None:
        self.config = config

    def setup(self) -> None:
        pass

    def teardown(self) -> None:
        pass

    def write_report(self, report: ProblemReport, out_dir: Path, generated_at: str) -> IndexEntry:
        """Write one report and return its index entry."""
        out_dir.mkdir(parents=True, exist_ok=True)
        filename = f"{slugify(report.name)}-{report.command}.{self.extension}"
        self.write_problem(report, out_dir / filename, generated_at)
        return IndexEntry(
            display_name=report.name,
            rel_link=filename,
            passed=report.passed,
            exit_code=report.exit_code,
            check_count=report.check_count,
            failure_count=report.failure_count,
        )

    @abstractmethod
    def write_problem(self, report: ProblemReport, path: Path, generated_at: str) -> None:
        """Render *report* to *path*."""

    @abstractmethod
    def write_index(self, out_dir: Path, entries: list[IndexEntry], generated_at: str) -> Path:
        """Write a batch index linking every problem report."""
