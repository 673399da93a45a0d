from __future__ import annotations

import json
from pathlib import Path
from unittest.mock import MagicMock, patch

import pytest

from kreincalc.config import Config, Tolerances
from kreincalc.errors import ConfigError
from kreincalc.io.problem import loads_problem
from kreincalc.io.report import ProblemReport
from kreincalc.main import _parse_tolerances, _run_problem, main, run
from kreincalc.output.base import IndexEntry, ReportWriter


@pytest.fixture
def config_file(tmp_path: Path) -> Path:
    path = tmp_path / "config.toml"
    path.write_text(
        "[general]\n"
        f'report_dir = "{(tmp_path / "reports").as_posix()}"\n'
        'output_formats = ["json"]\n'
        "max_workers = 2\n"
        "samples = 3\n"
    )
    return path


def _make_mock_writer(name: str = "json") -> MagicMock:
    w = MagicMock(spec=ReportWriter)
    w.name = name
    w.write_report.return_value = IndexEntry(display_name="ex1", rel_link="ex1-analyze.json", passed=True, exit_code=0)
    return w


class TestParseTolerances:
    def test_values(self) -> None:
        assert _parse_tolerances(["calculus=1e-6", "max_denominator=1000"]) == {"calculus": 1e-6, "max_denominator": 1000}

    @pytest.mark.parametrize("item", ["calculus", "=1", "calculus=tight"])
    def test_rejects(self, item: str) -> None:
        with pytest.raises(ConfigError):
            _parse_tolerances([item])


class TestRunProblem:
    def test_analyze(self, fixtures_dir: Path) -> None:
        report = _run_problem("analyze", fixtures_dir / "ex1.json", Config(), seed=0, samples=2)
        assert report.passed
        assert report.command == "analyze"

    def test_calc_with_function_file(self, fixtures_dir: Path) -> None:
        report = _run_problem(
            "calc", fixtures_dir / "ex2.json", Config(), seed=0, samples=2,
            functions_path=fixtures_dir / "functions.json",
        )
        assert list(report.outputs) == ["identity", "square", "resolvent at 1", "exp"]

    def test_errors_become_failed_reports(self, fixtures_dir: Path) -> None:
        report = _run_problem("analyze", fixtures_dir / "not_normal.json", Config(), seed=0, samples=2)
        assert report.name == "not_normal"
        assert report.error_type == "NotNormal"
        assert report.exit_code == 2

    def test_missing_file(self, tmp_path: Path) -> None:
        report = _run_problem("verify", tmp_path / "absent.json", Config(), seed=0, samples=2)
        assert report.error_type == "ParseError"
        assert report.exit_code == 1


class TestRun:
    def test_analyze_writes_reports(self, tmp_path: Path, config_file: Path, fixtures_dir: Path) -> None:
        code = run(["--config", str(config_file), "analyze", str(fixtures_dir / "ex1.json"), str(fixtures_dir / "ex2.json")])
        assert code == 0
        out_dir = tmp_path / "reports" / "json"
        assert (out_dir / "ex1-analyze.json").exists()
        assert (out_dir / "ex2-analyze.json").exists()
        index = json.loads((out_dir / "index.json").read_text())
        assert [p["display_name"] for p in index["problems"]] == ["ex1", "ex2"]

    def test_single_json_report(self, tmp_path: Path, config_file: Path, fixtures_dir: Path) -> None:
        target = tmp_path / "out" / "ex1.json"
        code = run(["--config", str(config_file), "analyze", str(fixtures_dir / "ex1.json"), "--report", str(target)])
        assert code == 0
        assert json.loads(target.read_text())["name"] == "ex1"

    def test_verify(self, tmp_path: Path, config_file: Path, fixtures_dir: Path) -> None:
        code = run(["--config", str(config_file), "verify", str(fixtures_dir / "ex1.json"), "--samples", "2", "--seed", "5"])
        assert code == 0
        data = json.loads((tmp_path / "reports" / "json" / "ex1-verify.json").read_text())
        assert data["command"] == "verify"

    @pytest.mark.parametrize("fixture", ["not_normal.json", "not_definitizing.json"])
    def test_model_errors_exit_2(self, config_file: Path, fixtures_dir: Path, fixture: str) -> None:
        assert run(["--config", str(config_file), "analyze", str(fixtures_dir / fixture)]) == 2

    def test_worst_exit_code_wins(self, config_file: Path, fixtures_dir: Path, tmp_path: Path) -> None:
        missing = tmp_path / "absent.json"
        code = run(["--config", str(config_file), "analyze", str(fixtures_dir / "ex1.json"), str(missing), str(fixtures_dir / "not_normal.json")])
        assert code == 2

    def test_bad_tolerance_override(self, config_file: Path, fixtures_dir: Path) -> None:
        assert run(["--config", str(config_file), "--tol", "psd=-1", "analyze", str(fixtures_dir / "ex1.json")]) == 1

    def test_usage_error(self) -> None:
        with pytest.raises(SystemExit) as exc:
            run(["analyze"])
        assert exc.value.code == 1

    def test_uses_every_configured_writer(self, tmp_path: Path, fixtures_dir: Path) -> None:
        config_file = tmp_path / "config.toml"
        config_file.write_text(f'[general]\nreport_dir = "{tmp_path.as_posix()}"\noutput_formats = ["a", "b", "c"]\n')
        writers = {name: _make_mock_writer(name) for name in ("a", "b")}
        writer_map = {name: MagicMock(return_value=w) for name, w in writers.items()}
        with patch.dict("kreincalc.main.WRITER_MAP", writer_map, clear=True):
            code = run(["--config", str(config_file), "analyze", str(fixtures_dir / "ex1.json")])
        assert code == 0
        for w in writers.values():
            w.setup.assert_called_once()
            w.write_report.assert_called_once()
            w.write_index.assert_called_once()
            w.teardown.assert_called_once()
        report = writers["a"].write_report.call_args.args[0]
        assert isinstance(report, ProblemReport)
        assert report.name == "ex1"


class TestGenerate:
    def test_to_stdout(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(["--config", "absent.toml", "generate", "ex2"]) == 0
        spec = loads_problem(capsys.readouterr().out)
        assert spec.name == "ex2"
        assert spec.definitizing == ["x^2", "y^2 - y"]

    def test_to_file(self, tmp_path: Path) -> None:
        target = tmp_path / "random.json"
        assert run(["--config", "absent.toml", "generate", "random", "--seed", "2", "--dim", "4", "-o", str(target)]) == 0
        spec = loads_problem(target.read_text())
        assert spec.name == "random-2-4"
        assert spec.operator.shape == (4, 4)

    def test_all(self, tmp_path: Path) -> None:
        out_dir = tmp_path / "corpus"
        assert run(["--config", "absent.toml", "generate", "all", "--dim", "4", "-o", str(out_dir)]) == 0
        names = sorted(p.stem for p in out_dir.glob("*.json"))
        assert "ex1" in names
        assert "random-0-4" in names

    def test_bad_dimension(self) -> None:
        assert run(["--config", "absent.toml", "generate", "random", "--dim", "1", "-o", "unused.json"]) == 1


def test_main_exits_with_run_code(fixtures_dir: Path, config_file: Path) -> None:
    with pytest.raises(SystemExit) as exc:
        main(["--config", str(config_file), "analyze", str(fixtures_dir / "not_normal.json")])
    assert exc.value.code == 2


def test_default_tolerances_reach_the_pipeline(fixtures_dir: Path) -> None:
    config = Config(tolerances=Tolerances(calculus=1e-6))
    report = _run_problem("calc", fixtures_dir / "ex1.json", config, seed=0, samples=1)
    assert report.checks[0].entries[0].tolerance == pytest.approx(1e-6)
