from __future__ import annotations

import numpy as np
import pytest

from kreincalc.config import Tolerances
from kreincalc.errors import DimensionMismatch, UnknownCorpusItem
from kreincalc.io.corpus import CORPUS, corpus_names, generate, random_problem, reference_corpus
from kreincalc.io.problem import ProblemSpec, loads_problem
from kreincalc.io.report import analyze, build_system, verify
from kreincalc.operators.embeddings import invariant_check


def test_names() -> None:
    assert corpus_names() == ["ex1", "ex2", "ex3", "jordan-at-i", "degenerate", "unitary", "selfadjoint", "random"]


def test_unknown_item() -> None:
    with pytest.raises(UnknownCorpusItem):
        generate("ex9")


@pytest.mark.parametrize("name", list(CORPUS))
def test_fixed_items_analyze_cleanly(name: str) -> None:
    report = analyze(generate(name), Tolerances(), seed=1)
    failures = [e for c in report.checks for e in c.failures()]
    assert report.passed, failures


@pytest.mark.parametrize("name", list(CORPUS))
def test_fixed_items_build(name: str) -> None:
    system = build_system(generate(name), Tolerances())
    assert invariant_check(system).passed


def test_jordan_block_of_size_three() -> None:
    system = build_system(generate("jordan-at-i"), Tolerances())
    assert system.Hdim == 1
    np.testing.assert_allclose(system.theta_N, [[1j]], atol=1e-10)


def test_random_is_seeded() -> None:
    a, b = generate("random", seed=3, dim=6), generate("random", seed=3, dim=6)
    np.testing.assert_array_equal(a.operator, b.operator)
    assert a.definitizing == b.definitizing
    assert a.name == "random-3-6"


def test_random_needs_two_dimensions() -> None:
    with pytest.raises(DimensionMismatch):
        random_problem(0, 1)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_random_problems_are_definitizable(seed: int) -> None:
    system = build_system(random_problem(seed, 6), Tolerances())
    assert system.ideal.is_zero_dimensional()
    assert invariant_check(system).passed


def test_random_problem_survives_json() -> None:
    spec = random_problem(4, 5)
    again = loads_problem(spec.dumps())
    np.testing.assert_array_equal(again.gram, spec.gram)
    assert again.definitizing == spec.definitizing


def test_reference_corpus() -> None:
    items = reference_corpus(range(2), dim=4)
    assert len(items) == len(CORPUS) + 2
    assert [s.name for s in items[-2:]] == ["random-0-4", "random-1-4"]


@pytest.mark.parametrize("n", range(2, 9))
@pytest.mark.parametrize("seed", range(4))
def test_random_problems_analyze_cleanly(seed: int, n: int) -> None:
    report = analyze(random_problem(seed, n), Tolerances(), seed=seed)
    failures = [e for c in report.checks for e in c.failures()]
    assert report.passed, failures
    assert all(row["ok"] for row in report.definitizing)


@pytest.mark.parametrize("spec", reference_corpus(), ids=lambda spec: spec.name)
def test_reference_corpus_verifies(spec: ProblemSpec) -> None:
    report = verify(spec, Tolerances(), samples=8, seed=3)
    assert report.passed, [e for c in report.checks for e in c.failures()]


@pytest.mark.slow
@pytest.mark.parametrize("spec", reference_corpus(), ids=lambda spec: spec.name)
def test_reference_corpus_verifies_at_full_size(spec: ProblemSpec) -> None:
    # 200 homomorphism pairs; the triple suite perturbs by 100 null triples
    report = verify(spec, Tolerances(), samples=200, seed=0)
    assert report.passed, [e for c in report.checks for e in c.failures()]
    calculus = next(c for c in report.checks if c.title == "calculus")
    assert calculus.summary()["well_defined"]["count"] == 100
