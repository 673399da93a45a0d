from __future__ import annotations

import itertools

import pytest

from kreincalc.algebra.gaussian import GaussianRational
from kreincalc.algebra.groebner import (
    divide,
    express,
    groebner,
    maximal_power,
    product_ideal,
    same_ideal,
    standard_monomials,
)
from kreincalc.algebra.poly2 import Poly2, parse_poly, parse_polys
from kreincalc.errors import InexactCoefficient, MembershipFailed, NotZeroDimensional, VariableTagError

ORIGIN = (GaussianRational(0), GaussianRational(0))


def test_reduced_basis() -> None:
    ideal = groebner(parse_polys(["x^2 - 1", "y - x"]))
    assert set(ideal.groebner) == set(parse_polys(["x - y", "y^2 - 1"]))
    assert all(g.leading_coefficient() == 1 for g in ideal.groebner)


def test_basis_is_permutation_invariant() -> None:
    gens = parse_polys(["x^2*y - 1", "x*y^2 - x", "x^3 - y"])
    bases = {groebner(perm).groebner for perm in itertools.permutations(gens)}
    assert len(bases) == 1


def test_cofactors_reproduce_basis() -> None:
    ideal = groebner(parse_polys(["x^2 + y^2 - 1", "x*y - 1/2"]))
    assert ideal.verify_cofactors()


def test_express_member() -> None:
    gens = parse_polys(["x^2 - 1", "y - x"])
    ideal = groebner(gens)
    p = parse_poly("(x + 1)*(x^2 - 1) + y*(y - x)")
    u = express(p, ideal)
    assert sum((ui * g for ui, g in zip(u, gens)), Poly2.zero()) == p


def test_express_non_member() -> None:
    ideal = groebner(parse_polys(["x^2 - 1", "y - x"]))
    with pytest.raises(MembershipFailed):
        express(parse_poly("x + 1"), ideal)


def test_division_remainder_is_reduced() -> None:
    basis = parse_polys(["x^2", "y^2"])
    quotients, r = divide(parse_poly("x^3 + x*y + y^2 + 1"), basis)
    assert r == parse_poly("x*y + 1")
    assert quotients[0] == Poly2.gen(0)


def test_zero_dimensional() -> None:
    assert groebner(parse_polys(["x^2", "y"])).is_zero_dimensional()
    assert not groebner(parse_polys(["x"])).is_zero_dimensional()


def test_unit_ideal() -> None:
    ideal = groebner(parse_polys(["x", "x - 1"]))
    assert ideal.is_unit()
    assert standard_monomials(ideal) == []


def test_standard_monomials() -> None:
    ideal = groebner(parse_polys(["x^2", "y^2"]))
    assert standard_monomials(ideal) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_standard_monomials_need_zero_dimension() -> None:
    with pytest.raises(NotZeroDimensional):
        standard_monomials(groebner(parse_polys(["x*y"])))


def test_inexact_generators_are_rejected() -> None:
    with pytest.raises(InexactCoefficient):
        groebner([Poly2({(1, 0): 0.5 + 0j})])


def test_mixed_variables_are_rejected() -> None:
    with pytest.raises(VariableTagError):
        groebner([Poly2.gen(0), Poly2.gen(0, "zw")])


def test_maximal_power() -> None:
    square = maximal_power(ORIGIN, 2)
    assert square.contains(parse_poly("x*y"))
    assert not square.contains(parse_poly("x"))
    assert maximal_power(ORIGIN, 0).is_unit()


def test_product_ideal() -> None:
    m = groebner(parse_polys(["x", "y"]))
    assert same_ideal(product_ideal(m, m), maximal_power(ORIGIN, 2))
