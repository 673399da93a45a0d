from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kreincalc.algebra.gaussian import GaussianRational
from kreincalc.algebra.poly2 import (
    Poly2,
    check_commuting,
    is_phi_real,
    mat_subst,
    parse_poly,
    phi_inverse,
    phi_transform,
    varpi,
)
from kreincalc.errors import NonCommuting, ParseError, VariableTagError, ZeroPolynomial

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)
gaussians = st.builds(GaussianRational, fractions, fractions)
monomials = st.tuples(st.integers(0, 2), st.integers(0, 2))
polys = st.dictionaries(monomials, gaussians, max_size=4).map(Poly2)

X = Poly2.gen(0)
Y = Poly2.gen(1)
I = GaussianRational(0, 1)


class TestGaussianRational:
    def test_arithmetic_stays_exact(self) -> None:
        a = GaussianRational(Fraction(1, 2), 1)
        b = GaussianRational(3, Fraction(-1, 3))
        assert a + b == GaussianRational(Fraction(7, 2), Fraction(2, 3))
        assert a * b == GaussianRational(Fraction(3, 2) + Fraction(1, 3), Fraction(-1, 6) + 3)
        assert (a / b) * b == a

    def test_mixing_with_complex_leaves_exact_world(self) -> None:
        result = GaussianRational(1, 1) * 0.5j
        assert isinstance(result, complex)
        assert result == pytest.approx(-0.5 + 0.5j)

    def test_inverse_of_zero(self) -> None:
        with pytest.raises(ZeroDivisionError):
            GaussianRational(0).inverse()

    def test_snap(self) -> None:
        snapped = GaussianRational.snap(0.5 + 0.3333333333j, tol=1e-6, max_denominator=100)
        assert snapped == GaussianRational(Fraction(1, 2), Fraction(1, 3))

    def test_snap_rejects_far_values(self) -> None:
        assert GaussianRational.snap(np.pi + 0j, tol=1e-12, max_denominator=10) is None

    def test_str(self) -> None:
        assert str(GaussianRational(Fraction(1, 2), -1)) == "(1/2-i)"
        assert str(GaussianRational(0, 2)) == "2*i"
        assert str(GaussianRational(3)) == "3"

    def test_equal_to_int(self) -> None:
        assert GaussianRational(2) == 2
        assert hash(GaussianRational(2)) == hash(Fraction(2))

    @given(gaussians, gaussians, gaussians)
    def test_distributive(self, a: GaussianRational, b: GaussianRational, c: GaussianRational) -> None:
        assert a * (b + c) == a * b + a * c

    @given(gaussians)
    def test_conjugate_is_involution(self, a: GaussianRational) -> None:
        assert a.conjugate().conjugate() == a


class TestParsePoly:
    def test_coefficients(self) -> None:
        p = parse_poly("x^2 + (1/2+1/3*i)*x*y - 1")
        assert p.coefficient((2, 0)) == 1
        assert p.coefficient((1, 1)) == GaussianRational(Fraction(1, 2), Fraction(1, 3))
        assert p.coefficient((0, 0)) == -1
        assert len(p.terms) == 3

    def test_products_are_expanded(self) -> None:
        assert parse_poly("(x - 1)*(x + 1)") == X * X - 1

    def test_zw_variables(self) -> None:
        q = parse_poly("z*w - 1", "zw")
        assert q.variables == "zw"
        assert q.coefficient((1, 1)) == 1

    def test_unknown_symbol(self) -> None:
        with pytest.raises(ParseError, match="unexpected symbols"):
            parse_poly("x + q")

    def test_irrational_coefficient(self) -> None:
        with pytest.raises(ParseError):
            parse_poly("sqrt(2)*x")

    def test_not_a_polynomial(self) -> None:
        with pytest.raises(ParseError):
            parse_poly("1/x")

    def test_garbage(self) -> None:
        with pytest.raises(ParseError):
            parse_poly("x +* y")

    def test_zero_prints_as_zero(self) -> None:
        assert str(Poly2.zero()) == "0"
        assert parse_poly("x - x").is_zero()

    @given(polys)
    def test_print_parse_round_trip(self, p: Poly2) -> None:
        assert parse_poly(str(p)) == p


class TestPoly2:
    def test_graded_lex_order(self) -> None:
        p = parse_poly("y^3 + x*y + x^2 + 1")
        assert list(p.terms) == [(0, 3), (2, 0), (1, 1), (0, 0)]
        assert p.leading_monomial() == (0, 3)

    def test_leading_monomial_of_zero(self) -> None:
        with pytest.raises(ZeroPolynomial):
            Poly2.zero().leading_monomial()

    def test_variable_tags_do_not_mix(self) -> None:
        with pytest.raises(VariableTagError):
            X + Poly2.gen(0, "zw")

    def test_derivative(self) -> None:
        p = parse_poly("x^3*y^2 + 2*x*y")
        assert p.derivative(1, 1) == parse_poly("6*x^2*y + 2")

    def test_taylor_coefficients(self) -> None:
        coeffs = parse_poly("x^2").taylor_coefficients((GaussianRational(1), GaussianRational(0)))
        assert coeffs == {(2, 0): 1, (1, 0): 2, (0, 0): 1}

    def test_eval_matches_exact(self) -> None:
        p = parse_poly("x^2*y - (2+i)*y + 3")
        point = (GaussianRational(Fraction(1, 2)), GaussianRational(-1, 2))
        assert p.eval((complex(point[0]), complex(point[1]))) == pytest.approx(complex(p.eval_exact(point)))

    def test_real_part(self) -> None:
        p = parse_poly("(1+i)*x + 2*i")
        assert p.real_part() == X
        assert p.real_part().is_real()

    @given(polys, polys, polys)
    @settings(max_examples=50)
    def test_ring_laws(self, p: Poly2, q: Poly2, r: Poly2) -> None:
        assert p * q == q * p
        assert (p + q) * r == p * r + q * r
        assert p - p == Poly2.zero()

    @given(polys, polys)
    @settings(max_examples=50)
    def test_sharp_is_an_involutive_homomorphism(self, p: Poly2, q: Poly2) -> None:
        assert p.sharp().sharp() == p
        assert (p * q).sharp() == p.sharp() * q.sharp()

    @given(polys)
    @settings(max_examples=50)
    def test_compose_with_generators_is_identity(self, p: Poly2) -> None:
        assert p.compose(X, Y) == p


class TestChangeOfVariables:
    @given(polys)
    @settings(max_examples=50)
    def test_phi_is_invertible(self, p: Poly2) -> None:
        assert phi_inverse(phi_transform(p)) == p

    @given(polys)
    @settings(max_examples=50)
    def test_real_polynomials_map_to_phi_real(self, p: Poly2) -> None:
        assert is_phi_real(phi_transform(p.real_part()))

    def test_phi_of_x(self) -> None:
        half = GaussianRational(Fraction(1, 2))
        z, w = Poly2.gen(0, "zw"), Poly2.gen(1, "zw")
        assert phi_transform(X) == (z + w).scale(half)

    def test_phi_wrong_tag(self) -> None:
        with pytest.raises(VariableTagError):
            phi_transform(Poly2.gen(0, "zw"))
        with pytest.raises(VariableTagError):
            phi_inverse(X)

    def test_varpi_reverses_coefficients(self) -> None:
        q = parse_poly("z^2*w + 1", "zw")
        assert varpi(q) == parse_poly("w + z^2*w^2", "zw")

    def test_varpi_of_zero(self) -> None:
        with pytest.raises(ZeroPolynomial):
            varpi(Poly2.zero("zw"))


class TestMatSubst:
    def test_substitution(self) -> None:
        A = np.diag([1.0, 2.0])
        B = np.diag([3.0, -1.0])
        p = parse_poly("x^2 + i*x*y - 1")
        expected = A @ A + 1j * A @ B - np.eye(2)
        np.testing.assert_allclose(mat_subst(p, A, B), expected)

    def test_zw_polynomials_read_n_and_nplus(self) -> None:
        A = np.array([[1.0, 2.0], [2.0, -1.0]])
        B = A @ A - np.eye(2)
        p = parse_poly("x^2*y + (2-i)*y^2 + x")
        N, Nplus = A + 1j * B, A - 1j * B
        np.testing.assert_allclose(mat_subst(phi_transform(p), N, Nplus), mat_subst(p, A, B), atol=1e-10)

    def test_non_commuting(self) -> None:
        E = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(NonCommuting):
            check_commuting(E, np.diag([1.0, -1.0]), 1e-10)
