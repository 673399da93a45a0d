from __future__ import annotations

from pathlib import Path

import pytest

from kreincalc.config import PROFILE_ENV_VAR, Config, Tolerances, load_config
from kreincalc.errors import EXIT_USAGE, ConfigError


@pytest.fixture
def config_file(tmp_path: Path) -> Path:
    p = tmp_path / "config.toml"
    p.write_text("""\
[general]
report_dir = "my_reports"
output_formats = ["json"]
max_workers = 2
tolerance_profile = "strict"
seed = 7
samples = 5

[tolerances]
calculus = 1e-6
""")
    return p


def test_load_config_report_dir(config_file: Path) -> None:
    config = load_config(config_file)
    assert config.report_dir == Path("my_reports")


def test_load_config_general(config_file: Path) -> None:
    config = load_config(config_file)
    assert config.output_formats == ["json"]
    assert config.max_workers == 2
    assert config.seed == 7
    assert config.samples == 5


def test_load_config_profile_then_table(config_file: Path) -> None:
    config = load_config(config_file)
    assert config.tolerance_profile == "strict"
    assert config.tolerances.psd == pytest.approx(Tolerances().psd * 0.1)
    assert config.tolerances.calculus == pytest.approx(1e-6)


def test_load_config_cli_overrides_win(config_file: Path) -> None:
    config = load_config(config_file, tolerance_overrides={"calculus": 1e-4})
    assert config.tolerances.calculus == pytest.approx(1e-4)


def test_load_config_missing_file_uses_defaults(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv(PROFILE_ENV_VAR, raising=False)
    config = load_config(tmp_path / "absent.toml")
    assert config == Config()


def test_load_config_profile_from_environment(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv(PROFILE_ENV_VAR, "loose")
    config = load_config(tmp_path / "absent.toml")
    assert config.tolerance_profile == "loose"
    assert config.tolerances.calculus == pytest.approx(Tolerances().calculus * 100)


def test_load_config_general_profile_beats_environment(config_file: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv(PROFILE_ENV_VAR, "loose")
    assert load_config(config_file).tolerance_profile == "strict"


def test_load_config_bad_toml(tmp_path: Path) -> None:
    p = tmp_path / "config.toml"
    p.write_text("[general\n")
    with pytest.raises(ConfigError):
        load_config(p)


def test_load_config_zero_workers(tmp_path: Path) -> None:
    p = tmp_path / "config.toml"
    p.write_text("[general]\nmax_workers = 0\n")
    with pytest.raises(ConfigError):
        load_config(p)


class TestTolerances:
    def test_profiles_leave_max_denominator_alone(self) -> None:
        assert Tolerances.for_profile("strict").max_denominator == Tolerances().max_denominator

    def test_unknown_profile(self) -> None:
        with pytest.raises(ConfigError, match="unknown tolerance profile"):
            Tolerances.for_profile("paranoid")

    def test_unknown_key(self) -> None:
        with pytest.raises(ConfigError, match="unknown tolerance"):
            Tolerances().with_overrides({"epsilon": 1e-3})

    def test_non_positive_value(self) -> None:
        with pytest.raises(ConfigError, match="positive"):
            Tolerances().with_overrides({"psd": 0})

    def test_non_numeric_value(self) -> None:
        with pytest.raises(ConfigError, match="numeric"):
            Tolerances().with_overrides({"psd": "tiny"})

    def test_max_denominator_is_integer(self) -> None:
        assert Tolerances().with_overrides({"max_denominator": "1000"}).max_denominator == 1000

    def test_empty_overrides_return_self(self) -> None:
        t = Tolerances()
        assert t.with_overrides({}) is t

    def test_config_error_exit_code(self) -> None:
        assert ConfigError("x").exit_code == EXIT_USAGE
