from __future__ import annotations

import json
from pathlib import Path

import pytest

from kreincalc.config import Tolerances
from kreincalc.io.problem import ProblemSpec
from kreincalc.io.report import build_system
from kreincalc.operators.embeddings import EmbeddingSystem

FIXTURES_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture
def tolerances() -> Tolerances:
    return Tolerances()


@pytest.fixture
def ex1_data() -> dict:
    return json.loads((FIXTURES_DIR / "ex1.json").read_text())


@pytest.fixture
def ex2_data() -> dict:
    return json.loads((FIXTURES_DIR / "ex2.json").read_text())


@pytest.fixture
def functions_data() -> dict:
    return json.loads((FIXTURES_DIR / "functions.json").read_text())


@pytest.fixture
def ex1_problem(ex1_data: dict) -> ProblemSpec:
    return ProblemSpec.from_dict(ex1_data)


@pytest.fixture
def ex2_problem(ex2_data: dict) -> ProblemSpec:
    return ProblemSpec.from_dict(ex2_data)


@pytest.fixture
def ex1_system(ex1_problem: ProblemSpec, tolerances: Tolerances) -> EmbeddingSystem:
    return build_system(ex1_problem, tolerances)


@pytest.fixture
def ex2_system(ex2_problem: ProblemSpec, tolerances: Tolerances) -> EmbeddingSystem:
    return build_system(ex2_problem, tolerances)
