from __future__ import annotations

import os
import tomllib
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping

from kreincalc.errors import ConfigError

PROFILE_ENV_VAR = "KREINCALC_TOLERANCE_PROFILE"

# Multipliers applied to every float knob of the default profile.
PROFILES: dict[str, float] = {
    "default": 1.0,
    "strict": 0.1,
    "loose": 100.0,
}


@dataclass(frozen=True)
class Tolerances:
    """Numeric knobs for every float comparison in the pipeline.

    All values are relative to the natural scale of the quantity being
    compared unless the field name says otherwise.  ``max_denominator`` is
    the only integer knob and is not affected by profiles.
    """

    gram: float = 1e-12
    hermitian: float = 1e-10
    psd: float = 1e-9
    rank: float = 1e-9
    commute: float = 1e-10
    normal: float = 1e-10
    theta_residual: float = 1e-8
    cluster: float = 1e-8
    point_match: float = 1e-6
    spectrum_match: float = 1e-8
    snap: float = 1e-6
    invert_margin: float = 1e-10
    calculus: float = 1e-8
    denominator: float = 1e-12
    eigen_cluster_radius: float = 1e-4
    max_denominator: int = 10**6

    @classmethod
    def for_profile(cls, name: str) -> Tolerances:
        try:
            factor = PROFILES[name]
        except KeyError:
            raise ConfigError(
                f"unknown tolerance profile {name!r} (expected one of {', '.join(PROFILES)})"
            ) from None
        base = cls()
        if factor == 1.0:
            return base
        scaled = {
            f.name: getattr(base, f.name) * factor
            for f in fields(cls)
            if f.name != "max_denominator"
        }
        return replace(base, **scaled)

    def with_overrides(self, overrides: Mapping[str, Any]) -> Tolerances:
        """Return a copy with *overrides* applied; keys and values are validated."""
        if not overrides:
            return self
        known = {f.name for f in fields(self)}
        changes: dict[str, Any] = {}
        for key, raw in overrides.items():
            if key not in known:
                raise ConfigError(f"unknown tolerance {key!r}")
            try:
                value = int(raw) if key == "max_denominator" else float(raw)
            except (TypeError, ValueError):
                raise ConfigError(f"tolerance {key!r} must be numeric, got {raw!r}") from None
            if value <= 0:
                raise ConfigError(f"tolerance {key!r} must be positive, got {raw!r}")
            changes[key] = value
        return replace(self, **changes)

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class Config:
    report_dir: Path = Path("reports")
    output_formats: list[str] = field(default_factory=lambda: ["json", "md"])
    max_workers: int = 4
    tolerance_profile: str = "default"
    tolerances: Tolerances = field(default_factory=Tolerances)
    seed: int = 20240229
    samples: int = 20


def default_profile() -> str:
    return os.environ.get(PROFILE_ENV_VAR, "default")


def load_config(path: Path | None = None, *, tolerance_overrides: Mapping[str, Any] | None = None) -> Config:
    """Read ``config.toml`` (if present) and resolve the tolerance stack.

    Precedence, lowest first: profile from the environment, ``[general]``
    profile, ``[tolerances]`` table, *tolerance_overrides* (the CLI's
    ``--tol`` flags).
    """
    raw: dict[str, Any] = {}
    if path is not None and path.exists():
        with open(path, "rb") as f:
            try:
                raw = tomllib.load(f)
            except tomllib.TOMLDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from exc

    general = raw.get("general", {})
    profile = str(general.get("tolerance_profile", default_profile()))

    tolerances = Tolerances.for_profile(profile)
    tolerances = tolerances.with_overrides(raw.get("tolerances", {}))
    tolerances = tolerances.with_overrides(tolerance_overrides or {})

    max_workers = int(general.get("max_workers", 4))
    if max_workers < 1:
        raise ConfigError("max_workers must be at least 1")

    return Config(
        report_dir=Path(general.get("report_dir", "reports")),
        output_formats=list(general.get("output_formats", ["json", "md"])),
        max_workers=max_workers,
        tolerance_profile=profile,
        tolerances=tolerances,
        seed=int(general.get("seed", 20240229)),
        samples=int(general.get("samples", 20)),
    )
