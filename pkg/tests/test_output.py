from __future__ import annotations

import json
from pathlib import Path

import pytest

from kreincalc.config import Config
from kreincalc.errors import NotNormal
from kreincalc.io.problem import ProblemSpec
from kreincalc.io.report import ProblemReport, analyze, calc
from kreincalc.output.base import IndexEntry, slugify
from kreincalc.output.json import JsonReportWriter
from kreincalc.output.markdown import MarkdownReportWriter
from kreincalc.templates import get_environment

GENERATED_AT = "2026-02-16T10:30:00+00:00"


@pytest.fixture
def config(tmp_path: Path) -> Config:
    return Config(report_dir=tmp_path)


@pytest.fixture
def ex1_report(ex1_problem: ProblemSpec) -> ProblemReport:
    return analyze(ex1_problem)


class TestSlugify:
    @pytest.mark.parametrize(
        ("name", "slug"),
        [("ex1", "ex1"), ("Jordan at i", "jordan-at-i"), ("random_3-6", "random_3-6"), ("  ", "problem")],
    )
    def test_slugify(self, name: str, slug: str) -> None:
        assert slugify(name) == slug


class TestJsonReportWriter:
    def test_write_report(self, tmp_path: Path, config: Config, ex1_report: ProblemReport) -> None:
        entry = JsonReportWriter(config).write_report(ex1_report, tmp_path / "json", GENERATED_AT)
        assert entry.rel_link == "ex1-analyze.json"
        assert entry.passed
        assert entry.check_count == ex1_report.check_count

        data = json.loads((tmp_path / "json" / entry.rel_link).read_text())
        assert data["generated_at"] == GENERATED_AT
        assert data["name"] == "ex1"
        assert data["exit_code"] == 0
        assert data["spectral"]["H_dim"] == 1

    def test_failed_report_records_the_error(self, tmp_path: Path, config: Config) -> None:
        report = ProblemReport.failed("broken", "verify", NotNormal("N N+ != N+ N"))
        path = tmp_path / "broken.json"
        JsonReportWriter(config).write_problem(report, path, GENERATED_AT)
        data = json.loads(path.read_text())
        assert data["passed"] is False
        assert data["exit_code"] == 2
        assert data["error"]["type"] == "NotNormal"

    def test_index(self, tmp_path: Path, config: Config) -> None:
        entries = [
            IndexEntry("ex1", "ex1-analyze.json", True, 0, 10, 0),
            IndexEntry("bad", "bad-analyze.json", False, 3, 10, 2),
        ]
        path = JsonReportWriter(config).write_index(tmp_path, entries, GENERATED_AT)
        data = json.loads(path.read_text())
        assert data["passed"] is False
        assert [p["display_name"] for p in data["problems"]] == ["ex1", "bad"]
        assert data["problems"][1]["failure_count"] == 2


class TestMarkdownReportWriter:
    def test_summary_sections(self, tmp_path: Path, config: Config, ex1_report: ProblemReport) -> None:
        path = tmp_path / "ex1.md"
        MarkdownReportWriter(config).write_problem(ex1_report, path, GENERATED_AT)
        content = path.read_text()
        assert content.startswith("# ex1 (analyze)")
        assert "**PASS**" in content
        assert "## Definitizing polynomials" in content
        assert "| (0, 1) | yes |" in content
        assert "dim H = 1" in content
        assert "## Checks" in content

    def test_outputs_are_previewed(self, tmp_path: Path, config: Config, ex2_problem: ProblemSpec) -> None:
        path = tmp_path / "ex2.md"
        MarkdownReportWriter(config).write_problem(calc(ex2_problem), path, GENERATED_AT)
        content = path.read_text()
        assert "## Outputs" in content
        assert "### riesz at i" in content

    def test_error(self, tmp_path: Path, config: Config) -> None:
        path = tmp_path / "bad.md"
        report = ProblemReport.failed("bad", "analyze", NotNormal("not normal"))
        MarkdownReportWriter(config).write_problem(report, path, GENERATED_AT)
        content = path.read_text()
        assert "**FAIL**" in content
        assert "`NotNormal`: not normal" in content

    def test_index_links_every_problem(self, tmp_path: Path, config: Config) -> None:
        entries = [IndexEntry("ex1", "ex1-analyze.md", True, 0), IndexEntry("ex2", "ex2-analyze.md", False, 3)]
        path = MarkdownReportWriter(config).write_index(tmp_path, entries, GENERATED_AT)
        content = path.read_text()
        assert "[ex1](ex1-analyze.md)" in content
        assert "| FAIL | 3 |" in content
        assert GENERATED_AT in content


class TestTemplateFilters:
    def test_sci(self) -> None:
        sci = get_environment().filters["sci"]
        assert sci(1.5e-10) == "1.500e-10"
        assert sci(None) == "n/a"

    def test_cplx(self) -> None:
        cplx = get_environment().filters["cplx"]
        assert cplx([2.0, -0.5]) == "2-0.5i"
        assert cplx([]) == ""
