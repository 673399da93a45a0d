from __future__ import annotations

import numpy as np
import pytest

from kreincalc.algebra.gaussian import GaussianRational
from kreincalc.algebra.poly2 import parse_polys
from kreincalc.config import Tolerances
from kreincalc.errors import DimensionMismatch, NotDefinitizing, ResidualTooLarge
from kreincalc.io.corpus import generate
from kreincalc.io.report import build_system
from kreincalc.operators.embeddings import EmbeddingSystem, build_embedding, invariant_check, verify_transfer_lemmas


def test_ex1_dimensions(ex1_system: EmbeddingSystem) -> None:
    assert ex1_system.Hdim == 1
    assert ex1_system.Hjdims == (1, 0)


def test_ex1_theta_of_n(ex1_system: EmbeddingSystem) -> None:
    np.testing.assert_allclose(ex1_system.theta_N, [[1j]], atol=1e-12)


def test_ex2_theta_of_n(ex2_system: EmbeddingSystem) -> None:
    assert ex2_system.Hjdims == (1, 0)
    np.testing.assert_allclose(ex2_system.theta_N, [[2.0]], atol=1e-12)


def test_tplus_t_reproduces_the_sum(ex2_system: EmbeddingSystem) -> None:
    np.testing.assert_allclose(ex2_system.xi(np.eye(1)), sum(ex2_system.polys_at_AB), atol=1e-12)


@pytest.mark.parametrize("name", ["ex1_system", "ex2_system"])
def test_invariants_hold(name: str, request: pytest.FixtureRequest) -> None:
    report = invariant_check(request.getfixturevalue(name))
    assert report.passed, report.failures()


@pytest.mark.parametrize("name", ["ex1_system", "ex2_system"])
def test_transfer_lemmas_hold(name: str, request: pytest.FixtureRequest) -> None:
    report = verify_transfer_lemmas(request.getfixturevalue(name), samples=2, seed=5)
    assert report.passed, report.failures()


def test_real_point_lookup(ex1_system: EmbeddingSystem) -> None:
    point = ex1_system.real_point_at(0)
    assert point is not None
    assert point.key == (GaussianRational(0), GaussianRational(1))
    assert ex1_system.spectral_index_of(point) == 0
    assert ex1_system.off_real_indices() == []


def test_eigenvalue_off_the_real_variety(ex2_system: EmbeddingSystem) -> None:
    assert ex2_system.off_real_indices() == [0]
    assert ex2_system.sum_at(2.0) == pytest.approx(4.0)
    assert ex2_system.sum_ratios()[0][0] == pytest.approx(1.0)


def test_trivial_hilbert_space() -> None:
    system = build_system(generate("degenerate"), Tolerances())
    assert system.Hdim == 0
    assert len(system.spectral) == 0
    assert invariant_check(system).passed


def test_theta_rejects_operators_leaving_the_range(ex1_system: EmbeddingSystem) -> None:
    lower = np.array([[0, 0], [1, 0]], dtype=complex)
    with pytest.raises(ResidualTooLarge):
        ex1_system.theta(lower)


def test_xi_shape(ex1_system: EmbeddingSystem) -> None:
    with pytest.raises(DimensionMismatch):
        ex1_system.xi(np.eye(2))


def test_not_definitizing(ex1_system: EmbeddingSystem) -> None:
    with pytest.raises(NotDefinitizing):
        build_embedding(ex1_system.N, parse_polys(["-x", "y - 1"]))


def test_needs_polynomials(ex1_system: EmbeddingSystem) -> None:
    with pytest.raises(ValueError):
        build_embedding(ex1_system.N, [])
