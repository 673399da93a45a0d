"""JSON problem files and function descriptions.

A problem file looks like::

    {
      "name": "ex1",
      "space": {"gram": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]},
      "operator": [[[0, 1], [1, 0]], [[0, 0], [0, 1]]],
      "definitizing": ["x", "y - 1"],
      "functions": [{"kind": "poly", "poly": "x + i*y"}],
      "options": {"calculus": 1e-7}
    }

Matrix entries are ``[re, im]`` pairs (plain numbers are accepted for real
entries).  Floats are written with ``repr``, which is the shortest string
that reads back to the same double.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

import numpy as np
import sympy as sp

from kreincalc.algebra.gaussian import GaussianRational
from kreincalc.algebra.groebner import Point
from kreincalc.algebra.poly2 import Poly2, parse_poly, parse_polys
from kreincalc.algebra.variety import find_point
from kreincalc.calculus.functions import (
    CalcFunction,
    calc_invert,
    calc_scale,
    calc_sharp,
    delta,
    embed_jet,
    embed_poly,
    jet_index_set,
    unit_delta,
)
from kreincalc.config import Tolerances
from kreincalc.errors import ParseError
from kreincalc.operators.embeddings import EmbeddingSystem
from kreincalc.operators.krein import KreinOperator, KreinSpace

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Complex numbers and matrices
# ---------------------------------------------------------------------------


def encode_complex(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def decode_complex(value: Any) -> complex:
    if isinstance(value, bool):
        raise ParseError(f"expected a number or [re, im] pair, got {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    raise ParseError(f"expected a number or [re, im] pair, got {value!r}")


def encode_matrix(M: np.ndarray) -> list[list[list[float]]]:
    return [[encode_complex(v) for v in row] for row in np.asarray(M, dtype=complex)]


def decode_matrix(data: Any, what: str = "matrix") -> np.ndarray:
    if not isinstance(data, list) or not data or not all(isinstance(row, list) for row in data):
        raise ParseError(f"{what} must be a nonempty list of rows")
    n = len(data)
    if any(len(row) != n for row in data):
        raise ParseError(f"{what} must be square, got {n} rows of lengths {[len(r) for r in data]}")
    return np.array([[decode_complex(v) for v in row] for row in data], dtype=complex)


def encode_point(point: Point) -> list[str]:
    return [str(point[0]), str(point[1])]


def decode_point(data: Any) -> Point:
    """``["0", "1"]`` or ``["1/2 + i", 0]`` as exact coordinates."""
    if not isinstance(data, (list, tuple)) or len(data) != 2:
        raise ParseError(f"a point is a pair of coordinates, got {data!r}")
    coords = []
    for value in data:
        p = parse_poly(str(value))
        if not p.is_constant():
            raise ParseError(f"point coordinate {value!r} is not a constant")
        coords.append(GaussianRational.coerce(p.coefficient((0, 0))))
    return coords[0], coords[1]


# ---------------------------------------------------------------------------
# Problems
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class ProblemSpec:
    name: str
    gram: np.ndarray
    operator: np.ndarray
    definitizing: list[str]
    functions: list[dict[str, Any]] = field(default_factory=list)
    options: dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], *, default_name: str = "problem") -> ProblemSpec:
        try:
            space = data["space"]
            gram = decode_matrix(space["gram"], "space.gram")
            operator = decode_matrix(data["operator"], "operator")
            definitizing = data["definitizing"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"problem is missing {exc}") from exc
        if not isinstance(definitizing, list) or not all(isinstance(p, str) for p in definitizing):
            raise ParseError("definitizing must be a list of polynomial strings")
        parse_polys(definitizing)
        options = dict(data.get("options", {}))
        for key, value in options.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
                raise ParseError(f"option {key!r} must be a positive number, got {value!r}")
        return cls(
            name=str(data.get("name", default_name)),
            gram=gram,
            operator=operator,
            definitizing=list(definitizing),
            functions=list(data.get("functions", [])),
            options=options,
        )

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "name": self.name,
            "space": {"gram": encode_matrix(self.gram)},
            "operator": encode_matrix(self.operator),
            "definitizing": list(self.definitizing),
        }
        if self.functions:
            out["functions"] = list(self.functions)
        if self.options:
            out["options"] = dict(self.options)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    # -- building ---------------------------------------------------------

    def tolerances(self, base: Tolerances | None = None) -> Tolerances:
        return (base or Tolerances()).with_overrides(self.options)

    def polynomials(self) -> list[Poly2]:
        return parse_polys(self.definitizing)

    def build_operator(self, tolerances: Tolerances | None = None) -> KreinOperator:
        tolerances = tolerances or Tolerances()
        space = KreinSpace.from_gram(self.gram, tolerances.gram)
        return space.operator(self.operator)


def loads_problem(text: str, *, default_name: str = "problem") -> ProblemSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("a problem file holds a JSON object")
    return ProblemSpec.from_dict(data, default_name=default_name)


def load_problem(path: Path) -> ProblemSpec:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return loads_problem(text, default_name=path.stem)


def save_problem(spec: ProblemSpec, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(spec.dumps())
    return path


# ---------------------------------------------------------------------------
# Functions
# ---------------------------------------------------------------------------


def load_functions(path: Path) -> list[dict[str, Any]]:
    """A JSON list of function descriptions, or an object with a ``functions`` list."""
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read functions from {path}: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("functions")
    if not isinstance(data, list) or not all(isinstance(d, dict) for d in data):
        raise ParseError(f"{path}: expected a list of function objects")
    return data


def function_label(data: Mapping[str, Any], index: int) -> str:
    if "name" in data:
        return str(data["name"])
    kind = data.get("kind", "?")
    detail = data.get("poly") or data.get("expr") or ""
    return f"{kind}:{detail}" if detail else f"{kind}#{index + 1}"


def _holomorphic(system: EmbeddingSystem, text: str) -> CalcFunction:
    """``g(x + iy)`` for an entire expression ``g`` in ``z``; jets come from ``d/dz``."""
    z = sp.Symbol("z")
    try:
        expr = sp.sympify(text, locals={"z": z, "i": sp.I, "I": sp.I})
    except (sp.SympifyError, TypeError) as exc:
        raise ParseError(f"cannot parse function {text!r}: {exc}") from exc
    stray = expr.free_symbols - {z}
    if stray:
        raise ParseError(f"function {text!r} may only depend on z, found {sorted(map(str, stray))}")

    cache: dict[int, Callable[[complex], complex]] = {}

    def derivative(order: int) -> Callable[[complex], complex]:
        if order not in cache:
            cache[order] = sp.lambdify(z, sp.diff(expr, z, order) if order else expr, "numpy")
        return cache[order]

    def value(w: complex, order: int = 0) -> complex:
        return complex(derivative(order)(complex(w)))

    jets = {}
    for pt in system.points:
        w = pt.image
        # d/dx = g', d/dy = i g'
        jets[pt.key] = {(k, l): (1j**l) * value(w, k + l) for k, l in jet_index_set(pt)}
    return embed_jet(system, lambda w: value(w), jets)


def build_function(system: EmbeddingSystem, data: Mapping[str, Any]) -> CalcFunction:
    """Turn one JSON function description into a :class:`CalcFunction`.

    Kinds: ``poly``, ``holomorphic``, ``delta``, ``sum``, ``product``,
    ``sharp``, ``inverse`` and ``scale``.
    """
    kind = data.get("kind")
    try:
        if kind == "poly":
            return embed_poly(system, parse_poly(str(data["poly"])))
        if kind == "holomorphic":
            return _holomorphic(system, str(data["expr"]))
        if kind == "delta":
            point = decode_point(data["point"])
            if "value" not in data:
                return unit_delta(system, point)
            target = find_point(list(system.points), point)
            algebra = target.algebra_A if target.is_real else target.algebra_B
            return delta(system, point, algebra.coset(parse_poly(str(data["value"]))))
        if kind in ("sum", "product"):
            parts = _operands(system, data["of"])
            result = parts[0]
            for part in parts[1:]:
                result = result + part if kind == "sum" else result * part
            return result
        if kind == "sharp":
            return calc_sharp(build_function(system, data["of"]))
        if kind == "inverse":
            return calc_invert(build_function(system, data["of"]))
        if kind == "scale":
            return calc_scale(build_function(system, data["of"]), decode_complex(data["by"]))
    except KeyError as exc:
        raise ParseError(f"function of kind {kind!r} is missing {exc}") from exc
    raise ParseError(f"unknown function kind {kind!r}")


def _operands(system: EmbeddingSystem, data: Any) -> list[CalcFunction]:
    if not isinstance(data, Sequence) or isinstance(data, (str, bytes)) or not data:
        raise ParseError("'of' must be a nonempty list of functions")
    return [build_function(system, d) for d in data]
