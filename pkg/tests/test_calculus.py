from __future__ import annotations

import cmath

import numpy as np
import pytest
import scipy.linalg

from kreincalc.algebra.gaussian import GaussianRational
from kreincalc.algebra.poly2 import Poly2, parse_poly
from kreincalc.calculus.functions import (
    calc_invert,
    calc_sharp,
    chi_separated,
    compute_chi,
    embed_jet,
    embed_poly,
    identity_function,
    unit,
    unit_delta,
)
from kreincalc.calculus.properties import (
    verify_calculus,
    verify_homomorphism,
    verify_inversion,
    verify_triples,
)
from kreincalc.calculus.spectrum import effective_set, riesz_projection, spectrum_formula_check, spectrum_of
from kreincalc.calculus.triples import (
    Triple,
    decompose,
    in_ideal_N,
    is_decomposition,
    null_triple,
    phi_of_N,
    poly_triple,
    psi_apply,
    triple_sharp,
)
from kreincalc.errors import DimensionMismatch, MissingValue, NotInvertible
from kreincalc.operators.embeddings import EmbeddingSystem
from kreincalc.operators.krein import adjoint

AT_I = (GaussianRational(0), GaussianRational(1))
AT_0 = (GaussianRational(0), GaussianRational(0))


class TestCalculusOnPolynomials:
    def test_unit_maps_to_identity(self, ex2_system: EmbeddingSystem) -> None:
        np.testing.assert_allclose(phi_of_N(unit(ex2_system)).matrix, np.eye(3), atol=1e-10)

    @pytest.mark.parametrize("name", ["ex1_system", "ex2_system"])
    def test_identity_maps_to_n(self, name: str, request: pytest.FixtureRequest) -> None:
        system = request.getfixturevalue(name)
        np.testing.assert_allclose(phi_of_N(identity_function(system)).matrix, system.N.matrix, atol=1e-10)

    def test_sharp_maps_to_krein_adjoint(self, ex2_system: EmbeddingSystem) -> None:
        result = phi_of_N(calc_sharp(identity_function(ex2_system))).matrix
        np.testing.assert_allclose(result, adjoint(ex2_system.N).matrix, atol=1e-10)

    def test_square(self, ex2_system: EmbeddingSystem) -> None:
        phi = identity_function(ex2_system)
        N = ex2_system.N.matrix
        np.testing.assert_allclose(phi_of_N(phi * phi).matrix, N @ N, atol=1e-10)

    def test_polynomial_substitution(self, ex1_system: EmbeddingSystem) -> None:
        s = parse_poly("x^2 - 3*i*x*y + y")
        A, B = ex1_system.A, ex1_system.B
        np.testing.assert_allclose(phi_of_N(embed_poly(ex1_system, s)).matrix, A @ A - 3j * A @ B + B, atol=1e-10)


class TestSmoothFunctions:
    def test_exponential_of_a_jordan_block(self, ex1_system: EmbeddingSystem) -> None:
        e = cmath.exp(1j)
        jets = {AT_I: {(0, 0): e, (1, 0): e, (0, 1): 1j * e}}
        phi = embed_jet(ex1_system, cmath.exp, jets)
        np.testing.assert_allclose(phi_of_N(phi).matrix, scipy.linalg.expm(ex1_system.N.matrix), atol=1e-10)

    def test_missing_jet(self, ex1_system: EmbeddingSystem) -> None:
        with pytest.raises(MissingValue):
            embed_jet(ex1_system, cmath.exp, {AT_I: {(0, 0): 1}})


class TestDecomposition:
    def test_decomposition_represents_the_function(self, ex2_system: EmbeddingSystem) -> None:
        phi = identity_function(ex2_system)
        t = decompose(phi)
        report = is_decomposition(phi, t)
        assert report.passed, report.failures()

    def test_large_cancelling_terms_are_tolerated(self, ex2_system: EmbeddingSystem) -> None:
        # every eigenvalue of Theta(N) lies off the real variety, so adding a null triple keeps a decomposition
        assert all(ex2_system.real_point_at(k) is None for k in range(len(ex2_system.spectral)))
        phi = identity_function(ex2_system)
        null = null_triple(ex2_system, [parse_poly("(1/3)*x + 1"), parse_poly("(1/7)*y")]).scale(10**12)
        report = is_decomposition(phi, decompose(phi) + null)
        assert report.passed, report.failures()
        assert report.max_residual("scalar_values") < 1e-12

    def test_spectral_part_fills_the_gap(self, ex2_system: EmbeddingSystem) -> None:
        t = decompose(identity_function(ex2_system))
        r_at_2 = t.r.eval_complex(2.0)
        assert t.f[0][0] == pytest.approx((2.0 - r_at_2) / 4.0)

    def test_triple_shape(self, ex2_system: EmbeddingSystem) -> None:
        with pytest.raises(DimensionMismatch):
            Triple(ex2_system, Poly2.one(), ())


class TestNullTriples:
    @pytest.mark.parametrize("name", ["ex1_system", "ex2_system"])
    def test_null_triple_is_a_member(self, name: str, request: pytest.FixtureRequest) -> None:
        system = request.getfixturevalue(name)
        membership = in_ideal_N(system, null_triple(system, [parse_poly("x + 1"), parse_poly("y")]))
        assert membership, membership.reason
        assert len(membership.witnesses) == 2

    def test_unit_is_not_a_member(self, ex2_system: EmbeddingSystem) -> None:
        assert not in_ideal_N(ex2_system, poly_triple(ex2_system, Poly2.one()))

    def test_null_triple_needs_all_cofactors(self, ex2_system: EmbeddingSystem) -> None:
        with pytest.raises(DimensionMismatch):
            null_triple(ex2_system, [Poly2.one()])


class TestSpectralConsequences:
    def test_riesz_projection_of_a_single_point(self, ex1_system: EmbeddingSystem) -> None:
        np.testing.assert_allclose(riesz_projection(ex1_system, AT_I), np.eye(2), atol=1e-10)

    def test_riesz_projection_onto_the_jordan_block(self, ex2_system: EmbeddingSystem) -> None:
        np.testing.assert_allclose(riesz_projection(ex2_system, AT_I), np.diag([0, 1, 1]), atol=1e-10)

    def test_riesz_projection_off_the_spectrum(self, ex2_system: EmbeddingSystem) -> None:
        np.testing.assert_allclose(riesz_projection(ex2_system, AT_0), np.zeros((3, 3)), atol=1e-10)

    def test_spectrum(self, ex2_system: EmbeddingSystem) -> None:
        assert spectrum_of(ex2_system) == pytest.approx([1j, 2])
        report = spectrum_formula_check(ex2_system)
        assert report.passed, report.failures()

    def test_effective_set(self, ex2_system: EmbeddingSystem) -> None:
        effective = effective_set(ex2_system)
        assert effective.spectral_indices == (0,)
        assert AT_I in effective
        assert AT_0 not in effective

    def test_local_size_of_the_ideal(self, ex2_system: EmbeddingSystem) -> None:
        z = 2 + 1j
        assert compute_chi(ex2_system, AT_I, z) == pytest.approx(4.0)
        assert chi_separated(parse_poly("x^2"), parse_poly("y^2 - y"), AT_I, z) == pytest.approx(4.0)


class TestInversion:
    def test_resolvent(self, ex2_system: EmbeddingSystem) -> None:
        phi = embed_poly(ex2_system, parse_poly("x + i*y - 1"))
        expected = np.linalg.inv(ex2_system.N.matrix - np.eye(3))
        np.testing.assert_allclose(phi_of_N(calc_invert(phi)).matrix, expected, atol=1e-10)
        assert verify_inversion(ex2_system, phi).passed

    def test_vanishing_on_the_spectrum(self, ex2_system: EmbeddingSystem) -> None:
        with pytest.raises(NotInvertible):
            calc_invert(embed_poly(ex2_system, parse_poly("x + i*y - i")))

    def test_vanishing_outside_the_effective_set(self, ex2_system: EmbeddingSystem) -> None:
        phi = embed_poly(ex2_system, parse_poly("x + i*y"))
        inverse = phi_of_N(calc_invert(phi)).matrix
        np.testing.assert_allclose(inverse, np.linalg.inv(ex2_system.N.matrix), atol=1e-10)


class TestVerificationSuites:
    def test_homomorphism(self, ex2_system: EmbeddingSystem) -> None:
        report = verify_homomorphism(ex2_system, samples=3, seed=2)
        assert report.passed, report.failures()

    def test_triples(self, ex1_system: EmbeddingSystem) -> None:
        report = verify_triples(ex1_system, samples=2, seed=4)
        assert report.passed, report.failures()

    @pytest.mark.parametrize("name", ["ex1_system", "ex2_system"])
    def test_full_suite(self, name: str, request: pytest.FixtureRequest) -> None:
        report = verify_calculus(request.getfixturevalue(name), samples=4, seed=1)
        assert report.passed, report.failures()

    def test_riesz_projection_is_a_unit_delta(self, ex2_system: EmbeddingSystem) -> None:
        P = phi_of_N(unit_delta(ex2_system, AT_I)).matrix
        np.testing.assert_allclose(P @ P, P, atol=1e-10)


class TestRestrictionAndInvolution:
    def test_restrict_keeps_phi_of_n(self, ex2_system: EmbeddingSystem) -> None:
        phi = identity_function(ex2_system)
        restricted = phi.restrict()
        assert restricted.real_cosets[AT_0].is_zero(1e-12)
        np.testing.assert_allclose(phi_of_N(restricted).matrix, phi_of_N(phi).matrix, atol=1e-10)

    def test_triple_sharp_is_the_krein_adjoint(self, ex2_system: EmbeddingSystem) -> None:
        t = decompose(identity_function(ex2_system))
        lhs = psi_apply(ex2_system, triple_sharp(t)).matrix
        np.testing.assert_allclose(lhs, adjoint(psi_apply(ex2_system, t)).matrix, atol=1e-10)
