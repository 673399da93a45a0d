"""Reduced Groebner bases with cofactor tracking (graded-lex, x > y).

Every basis element remembers how it was obtained from the input
generators, so membership can be turned into an explicit combination
``p = sum u_i * generators[i]``.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from kreincalc.algebra.gaussian import ZERO, GaussianRational, Scalar
from kreincalc.algebra.poly2 import Monomial, Poly2, grlex_key, is_zero_coefficient
from kreincalc.errors import (
    InexactCoefficient,
    MembershipFailed,
    NotZeroDimensional,
    VariableTagError,
)

logger = logging.getLogger(__name__)

Point = tuple[GaussianRational, GaussianRational]


def _divides(a: Monomial, b: Monomial) -> bool:
    return a[0] <= b[0] and a[1] <= b[1]


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return (max(a[0], b[0]), max(a[1], b[1]))


def divide(p: Poly2, basis: Sequence[Poly2]) -> tuple[list[Poly2], Poly2]:
    """Multivariate division: ``p = sum q_k basis[k] + remainder``.

    The remainder has no term divisible by a leading monomial of *basis*.
    Inexact coefficients in *p* are allowed; the basis should be exact.
    """
    work: dict[Monomial, Scalar] = dict(p.terms)
    quotients: list[dict[Monomial, Scalar]] = [{} for _ in basis]
    remainder: dict[Monomial, Scalar] = {}
    leads = [(g.leading_monomial(), g.leading_coefficient()) for g in basis]
    while work:
        m = max(work, key=grlex_key)
        c = work.pop(m)
        for k, (lm, lc) in enumerate(leads):
            if not _divides(lm, m):
                continue
            shift = (m[0] - lm[0], m[1] - lm[1])
            q = c / lc
            quotients[k][shift] = quotients[k].get(shift, ZERO) + q
            for gm, gc in basis[k].items():
                if gm == lm:
                    continue
                t = (gm[0] + shift[0], gm[1] + shift[1])
                v = work.get(t, ZERO) - q * gc
                if is_zero_coefficient(v):
                    work.pop(t, None)
                else:
                    work[t] = v
            break
        else:
            remainder[m] = c
    return [Poly2(q, p.variables) for q in quotients], Poly2(remainder, p.variables)


@dataclass(frozen=True)
class IdealData:
    """An ideal given by generators together with its reduced Groebner basis.

    ``cofactors[k][i]`` is the coefficient of ``generators[i]`` in the
    expression of ``groebner[k]``.
    """

    generators: tuple[Poly2, ...]
    groebner: tuple[Poly2, ...]
    cofactors: tuple[tuple[Poly2, ...], ...]
    variables: str = "xy"

    def leading_monomials(self) -> list[Monomial]:
        return [g.leading_monomial() for g in self.groebner]

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.groebner)

    def is_zero_ideal(self) -> bool:
        return not self.groebner

    def is_zero_dimensional(self) -> bool:
        return is_zero_dimensional(self)

    def normal_form(self, p: Poly2) -> Poly2:
        return normal_form(p, self)

    def contains(self, p: Poly2) -> bool:
        return normal_form(p, self).is_zero()

    def express(self, p: Poly2) -> tuple[Poly2, ...]:
        return express(p, self)

    def verify_cofactors(self) -> bool:
        """Each basis element equals its recorded generator combination."""
        for g, cof in zip(self.groebner, self.cofactors):
            combo = Poly2.zero(self.variables)
            for c, gen in zip(cof, self.generators):
                combo = combo + c * gen
            if combo != g:
                return False
        return True

    def __str__(self) -> str:
        return "<" + ", ".join(str(g) for g in self.groebner) + ">"


def _check_inputs(gens: Sequence[Poly2]) -> str:
    variables = gens[0].variables if gens else "xy"
    for g in gens:
        if g.variables != variables:
            raise VariableTagError("generators live in different variable pairs")
        if not g.is_exact():
            raise InexactCoefficient(f"generator {g} has floating-point coefficients")
    return variables


def groebner(gens: Iterable[Poly2]) -> IdealData:
    """Reduced Groebner basis of ``<gens>`` under graded-lex order, x > y."""
    return _groebner(tuple(gens))


@lru_cache(maxsize=1024)
def _groebner(gens: tuple[Poly2, ...]) -> IdealData:
    variables = _check_inputs(gens)
    m = len(gens)
    zero = Poly2.zero(variables)

    def unit_cofactor(i: int) -> tuple[Poly2, ...]:
        return tuple(Poly2.one(variables) if k == i else zero for k in range(m))

    polys: list[Poly2] = []
    cofs: list[tuple[Poly2, ...]] = []
    for i, g in enumerate(gens):
        if not g.is_zero():
            polys.append(g)
            cofs.append(unit_cofactor(i))

    def reduce_tracked(p: Poly2, cof: tuple[Poly2, ...]) -> tuple[Poly2, tuple[Poly2, ...]]:
        quotients, r = divide(p, polys)
        new_cof = list(cof)
        for q, qcof in zip(quotients, cofs):
            if q.is_zero():
                continue
            new_cof = [a - q * b for a, b in zip(new_cof, qcof)]
        return r, tuple(new_cof)

    queue: list[tuple[tuple[int, int], int, int]] = []

    def push_pairs(j: int) -> None:
        lm_j = polys[j].leading_monomial()
        for i in range(j):
            lm_i = polys[i].leading_monomial()
            if lm_i[0] * lm_j[0] == 0 and lm_i[1] * lm_j[1] == 0:
                # coprime leading monomials: the S-polynomial reduces to zero
                continue
            heapq.heappush(queue, (grlex_key(_lcm(lm_i, lm_j)), i, j))

    for j in range(len(polys)):
        push_pairs(j)

    processed = 0
    while queue:
        _, i, j = heapq.heappop(queue)
        processed += 1
        fi, fj = polys[i], polys[j]
        lm_i, lm_j = fi.leading_monomial(), fj.leading_monomial()
        lcm = _lcm(lm_i, lm_j)
        si = (lcm[0] - lm_i[0], lcm[1] - lm_i[1])
        sj = (lcm[0] - lm_j[0], lcm[1] - lm_j[1])
        ci = fi.leading_coefficient().inverse()
        cj = fj.leading_coefficient().inverse()
        s_poly = fi.shift_monomial(si).scale(ci) - fj.shift_monomial(sj).scale(cj)
        s_cof = tuple(
            a.shift_monomial(si).scale(ci) - b.shift_monomial(sj).scale(cj)
            for a, b in zip(cofs[i], cofs[j])
        )
        r, r_cof = reduce_tracked(s_poly, s_cof)
        if r.is_zero():
            continue
        polys.append(r)
        cofs.append(r_cof)
        push_pairs(len(polys) - 1)
    logger.debug("Buchberger: %d generators, %d pairs, %d basis elements", m, processed, len(polys))

    # minimize: drop elements whose leading monomial is a multiple of another's
    keep: list[int] = []
    for k, p in enumerate(polys):
        lm = p.leading_monomial()
        dominated = False
        for other, q in enumerate(polys):
            if other == k:
                continue
            lq = q.leading_monomial()
            if _divides(lq, lm) and (lq != lm or other < k):
                dominated = True
                break
        if not dominated:
            keep.append(k)
    basis = [polys[k] for k in keep]
    basis_cofs = [cofs[k] for k in keep]

    # interreduce and normalize
    for k in range(len(basis)):
        others = basis[:k] + basis[k + 1:]
        quotients, r = divide(basis[k], others) if others else ([], basis[k])
        cof = list(basis_cofs[k])
        for q, qcof in zip(quotients, basis_cofs[:k] + basis_cofs[k + 1:]):
            if not q.is_zero():
                cof = [a - q * b for a, b in zip(cof, qcof)]
        inv = r.leading_coefficient().inverse()
        basis[k] = r.scale(inv)
        basis_cofs[k] = tuple(c.scale(inv) for c in cof)

    order = sorted(range(len(basis)), key=lambda k: grlex_key(basis[k].leading_monomial()))
    return IdealData(
        generators=gens,
        groebner=tuple(basis[k] for k in order),
        cofactors=tuple(basis_cofs[k] for k in order),
        variables=variables,
    )


def normal_form(p: Poly2, ideal: IdealData) -> Poly2:
    if p.variables != ideal.variables:
        raise VariableTagError("polynomial and ideal live in different variable pairs")
    if not ideal.groebner:
        return p
    return divide(p, ideal.groebner)[1]


def express(p: Poly2, ideal: IdealData) -> tuple[Poly2, ...]:
    """Cofactors ``u`` with ``p = sum u_i * ideal.generators[i]``."""
    if not ideal.groebner:
        if p.is_zero():
            return tuple(Poly2.zero(ideal.variables) for _ in ideal.generators)
        raise MembershipFailed(f"{p} is not in the zero ideal")
    quotients, r = divide(p, ideal.groebner)
    if not r.is_zero():
        raise MembershipFailed(f"{p} is not in {ideal} (normal form {r})")
    result = [Poly2.zero(ideal.variables) for _ in ideal.generators]
    for q, cof in zip(quotients, ideal.cofactors):
        if q.is_zero():
            continue
        result = [u + q * c for u, c in zip(result, cof)]
    return tuple(result)


def is_zero_dimensional(ideal: IdealData) -> bool:
    """A pure power of x and a pure power of y among the leading monomials."""
    leads = ideal.leading_monomials()
    return any(m[1] == 0 for m in leads) and any(m[0] == 0 for m in leads)


def standard_monomials(ideal: IdealData) -> list[Monomial]:
    """Monomials outside the leading-term ideal, ascending in graded-lex order."""
    if not is_zero_dimensional(ideal):
        raise NotZeroDimensional(f"{ideal} is not zero-dimensional")
    leads = ideal.leading_monomials()
    bound_x = min(m[0] for m in leads if m[1] == 0)
    bound_y = min(m[1] for m in leads if m[0] == 0)
    monos = [
        (i, j)
        for i in range(bound_x)
        for j in range(bound_y)
        if not any(_divides(lm, (i, j)) for lm in leads)
    ]
    return sorted(monos, key=grlex_key)


def contains_ideal(big: IdealData, small: IdealData) -> bool:
    """``small`` is a subset of ``big``."""
    return all(big.contains(g) for g in small.groebner)


def same_ideal(a: IdealData, b: IdealData) -> bool:
    return contains_ideal(a, b) and contains_ideal(b, a)


def sum_ideal(a: IdealData, b: IdealData) -> IdealData:
    return groebner(a.groebner + b.groebner)


def product_ideal(p: IdealData, q: IdealData) -> IdealData:
    """Groebner basis of the ideal generated by all pairwise products."""
    return groebner(f * g for f in p.groebner for g in q.groebner)


def maximal_ideal(point: Point, variables: str = "xy") -> IdealData:
    return groebner([Poly2.linear(point, 0, variables), Poly2.linear(point, 1, variables)])


def maximal_power(point: Point, k: int, variables: str = "xy") -> IdealData:
    """``<x - a_x, y - a_y>^k``; the unit ideal for ``k == 0``."""
    if k == 0:
        return groebner([Poly2.one(variables)])
    lx = Poly2.linear(point, 0, variables)
    ly = Poly2.linear(point, 1, variables)
    return groebner(lx**i * ly ** (k - i) for i in range(k + 1))
