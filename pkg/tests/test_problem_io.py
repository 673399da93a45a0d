from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
import scipy.linalg

from kreincalc.algebra.gaussian import GaussianRational
from kreincalc.errors import ParseError
from kreincalc.io.problem import (
    ProblemSpec,
    build_function,
    decode_complex,
    decode_matrix,
    decode_point,
    function_label,
    load_functions,
    load_problem,
    loads_problem,
)
from kreincalc.calculus.triples import phi_of_N
from kreincalc.operators.embeddings import EmbeddingSystem


class TestDecoding:
    def test_complex(self) -> None:
        assert decode_complex(3) == 3
        assert decode_complex([1, -2.5]) == complex(1, -2.5)

    @pytest.mark.parametrize("value", [True, "1", [1, 2, 3], [1, None]])
    def test_complex_rejects(self, value: object) -> None:
        with pytest.raises(ParseError):
            decode_complex(value)

    def test_matrix_must_be_square(self) -> None:
        with pytest.raises(ParseError, match="square"):
            decode_matrix([[1, 2], [3]])

    def test_matrix_must_be_nonempty(self) -> None:
        with pytest.raises(ParseError):
            decode_matrix([])

    def test_point(self) -> None:
        assert decode_point(["1/2 + i", 0]) == (GaussianRational(Fraction(1, 2), 1), GaussianRational(0))

    def test_point_must_be_constant(self) -> None:
        with pytest.raises(ParseError, match="not a constant"):
            decode_point(["x", "0"])


class TestProblemSpec:
    def test_from_dict(self, ex1_data: dict) -> None:
        spec = ProblemSpec.from_dict(ex1_data)
        assert spec.name == "ex1"
        assert spec.definitizing == ["x", "y - 1"]
        np.testing.assert_array_equal(spec.operator, [[1j, 1], [0, 1j]])

    def test_missing_operator(self, ex1_data: dict) -> None:
        del ex1_data["operator"]
        with pytest.raises(ParseError, match="missing"):
            ProblemSpec.from_dict(ex1_data)

    def test_bad_polynomial(self, ex1_data: dict) -> None:
        ex1_data["definitizing"] = ["x +* y"]
        with pytest.raises(ParseError):
            ProblemSpec.from_dict(ex1_data)

    def test_bad_option(self, ex1_data: dict) -> None:
        ex1_data["options"] = {"calculus": -1}
        with pytest.raises(ParseError, match="positive"):
            ProblemSpec.from_dict(ex1_data)

    def test_options_override_tolerances(self, ex1_data: dict, tolerances) -> None:
        ex1_data["options"] = {"calculus": 1e-5}
        assert ProblemSpec.from_dict(ex1_data).tolerances(tolerances).calculus == pytest.approx(1e-5)

    def test_dumps_reads_back(self, ex2_problem: ProblemSpec) -> None:
        again = loads_problem(ex2_problem.dumps())
        assert again.name == "ex2"
        np.testing.assert_array_equal(again.gram, ex2_problem.gram)
        np.testing.assert_array_equal(again.operator, ex2_problem.operator)
        assert again.functions == ex2_problem.functions

    def test_invalid_json(self) -> None:
        with pytest.raises(ParseError, match="invalid JSON"):
            loads_problem("{")

    def test_not_an_object(self) -> None:
        with pytest.raises(ParseError):
            loads_problem("[]")

    def test_name_defaults_to_file_stem(self, tmp_path: Path, ex1_data: dict) -> None:
        del ex1_data["name"]
        path = tmp_path / "jordan.json"
        path.write_text(json.dumps(ex1_data))
        assert load_problem(path).name == "jordan"

    def test_unreadable_file(self, tmp_path: Path) -> None:
        with pytest.raises(ParseError, match="cannot read"):
            load_problem(tmp_path / "absent.json")


class TestFunctions:
    def test_load_object_form(self, fixtures_dir: Path) -> None:
        functions = load_functions(fixtures_dir / "functions.json")
        assert [f["name"] for f in functions] == ["identity", "square", "resolvent at 1", "exp"]

    def test_load_list_form(self, tmp_path: Path) -> None:
        path = tmp_path / "f.json"
        path.write_text('[{"kind": "poly", "poly": "x"}]')
        assert load_functions(path) == [{"kind": "poly", "poly": "x"}]

    def test_load_rejects_scalars(self, tmp_path: Path) -> None:
        path = tmp_path / "f.json"
        path.write_text("[1, 2]")
        with pytest.raises(ParseError):
            load_functions(path)

    def test_labels(self) -> None:
        assert function_label({"name": "exp", "kind": "holomorphic"}, 0) == "exp"
        assert function_label({"kind": "poly", "poly": "x"}, 0) == "poly:x"
        assert function_label({"kind": "delta"}, 2) == "delta#3"

    def test_holomorphic(self, ex2_system: EmbeddingSystem) -> None:
        phi = build_function(ex2_system, {"kind": "holomorphic", "expr": "exp(z)"})
        np.testing.assert_allclose(phi_of_N(phi).matrix, scipy.linalg.expm(ex2_system.N.matrix), atol=1e-9)

    def test_holomorphic_rejects_other_symbols(self, ex2_system: EmbeddingSystem) -> None:
        with pytest.raises(ParseError, match="only depend on z"):
            build_function(ex2_system, {"kind": "holomorphic", "expr": "exp(t*z)"})

    def test_scale(self, ex2_system: EmbeddingSystem) -> None:
        phi = build_function(ex2_system, {"kind": "scale", "by": [0, 1], "of": {"kind": "poly", "poly": "x + i*y"}})
        np.testing.assert_allclose(phi_of_N(phi).matrix, 1j * ex2_system.N.matrix, atol=1e-10)

    def test_product(self, ex2_system: EmbeddingSystem, functions_data: dict) -> None:
        phi = build_function(ex2_system, functions_data["functions"][1])
        N = ex2_system.N.matrix
        np.testing.assert_allclose(phi_of_N(phi).matrix, N @ N, atol=1e-10)

    def test_delta_with_value(self, ex2_system: EmbeddingSystem) -> None:
        phi = build_function(ex2_system, {"kind": "delta", "point": ["0", "1"], "value": "x"})
        nilpotent_part = np.array([[0, 0, 0], [0, 0, 1], [0, 0, 0]])
        np.testing.assert_allclose(phi_of_N(phi).matrix, nilpotent_part, atol=1e-10)

    def test_unknown_kind(self, ex2_system: EmbeddingSystem) -> None:
        with pytest.raises(ParseError, match="unknown function kind"):
            build_function(ex2_system, {"kind": "spline"})

    def test_missing_field(self, ex2_system: EmbeddingSystem) -> None:
        with pytest.raises(ParseError, match="missing"):
            build_function(ex2_system, {"kind": "poly"})

    def test_empty_operands(self, ex2_system: EmbeddingSystem) -> None:
        with pytest.raises(ParseError):
            build_function(ex2_system, {"kind": "sum", "of": []})
