"""Shared Jinja2 template environment for the Markdown reports.

Templates live in this package directory and are loaded via
``PackageLoader``.  The ``sci`` and ``cplx`` filters are registered once
when the environment is first created.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from jinja2 import Environment, PackageLoader


def _sci(value: float | None) -> str:
    """Format a residual or tolerance as ``1.234e-10``."""
    if value is None:
        return "n/a"
    try:
        return f"{float(value):.3e}"
    except (TypeError, ValueError):
        return str(value)


def _cplx(pair: Sequence[float] | None) -> str:
    """Format an encoded ``[re, im]`` pair as ``a+bi``."""
    if not pair:
        return ""
    z = complex(pair[0], pair[1])
    return f"{z.real:.6g}{z.imag:+.6g}i"


@lru_cache(maxsize=1)
def get_environment() -> Environment:
    """Return a shared Jinja2 Environment that loads from this package."""
    env = Environment(
        loader=PackageLoader("kreincalc", "templates"),
        autoescape=False,
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    env.filters["sci"] = _sci
    env.filters["cplx"] = _cplx
    return env


def get_template(name: str):
    """Load a template by file name from the ``kreincalc/templates/`` directory."""
    return get_environment().get_template(name)
