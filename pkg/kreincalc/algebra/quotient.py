"""Finite-dimensional quotient algebras ``C[x, y] / I`` and their cosets.

A :class:`QuotientAlgebra` is described by the standard monomials of a
zero-dimensional ideal and the two multiplication matrices.  ``mult_x[r][c]``
is coordinate ``r`` of the normal form of ``x * basis[c]``.

:class:`Coset` coordinates are exact Gaussian rationals for cosets of exact
polynomials and complex floats for cosets built from numeric jets.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from kreincalc.algebra import linalg
from kreincalc.algebra.gaussian import ZERO, GaussianRational, Scalar
from kreincalc.algebra.groebner import IdealData, Point, is_zero_dimensional, normal_form, standard_monomials
from kreincalc.algebra.poly2 import Monomial, Poly2
from kreincalc.errors import AlgebraMismatch, NotInvertible, NotZeroDimensional

logger = logging.getLogger(__name__)

KINDS = ("A", "B", "global")


def conjugate_point(point: Point) -> Point:
    return (point[0].conjugate(), point[1].conjugate())


def point_is_real(point: Point) -> bool:
    return point[0].is_real() and point[1].is_real()


@dataclass(frozen=True, eq=False)
class QuotientAlgebra:
    ideal: IdealData
    basis: tuple[Monomial, ...]
    mult_x: linalg.Matrix
    mult_y: linalg.Matrix
    point: Point | None = None
    kind: str = "global"
    # multiplication by each basis monomial, aligned with ``basis``
    basis_matrices: tuple[linalg.Matrix, ...] = field(default=(), repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def variables(self) -> str:
        return self.ideal.variables

    def index(self, m: Monomial) -> int:
        return self.basis.index(m)

    def compatible(self, other: QuotientAlgebra) -> bool:
        return self is other or (
            self.ideal.groebner == other.ideal.groebner and self.point == other.point
        )

    # -- coordinates ------------------------------------------------------

    def coords_of(self, p: Poly2) -> tuple[Scalar, ...]:
        nf = normal_form(p, self.ideal)
        coords: list[Scalar] = [ZERO] * self.dim
        for m, c in nf.items():
            coords[self.index(m)] = c
        return tuple(coords)

    def poly_of(self, coords: Sequence[Scalar]) -> Poly2:
        return Poly2(dict(zip(self.basis, coords)), self.variables)

    def coset(self, p: Poly2) -> Coset:
        return Coset(self, self.coords_of(p))

    def unit(self) -> Coset:
        return self.coset(Poly2.one(self.variables))

    def zero(self) -> Coset:
        return Coset(self, tuple([ZERO] * self.dim))

    # -- multiplication ---------------------------------------------------

    def monomial_matrix(self, m: Monomial) -> linalg.Matrix:
        """Matrix of multiplication by ``x^i y^j`` in the basis."""
        if m in self.basis and self.basis_matrices:
            return self.basis_matrices[self.index(m)]
        return _monomial_matrix(m, self.mult_x, self.mult_y, self.dim)

    def multiplication_matrix(self, c: Coset) -> list[list[Scalar]]:
        """Matrix of multiplication by the coset *c*."""
        out: list[list[Scalar]] = [[ZERO] * self.dim for _ in range(self.dim)]
        for coeff, m in zip(c.coords, self.basis):
            if isinstance(coeff, GaussianRational) and coeff.is_zero():
                continue
            mat = self.monomial_matrix(m)
            for r in range(self.dim):
                row = out[r]
                for k in range(self.dim):
                    if not mat[r][k].is_zero():
                        row[k] = row[k] + coeff * mat[r][k]
        return out


@lru_cache(maxsize=512)
def quotient_algebra(ideal: IdealData, *, point: Point | None = None, kind: str = "global") -> QuotientAlgebra:
    """Build ``C[x, y] / ideal``; the ideal must be zero-dimensional."""
    if not is_zero_dimensional(ideal):
        raise NotZeroDimensional(f"{ideal} is not zero-dimensional")
    if kind not in KINDS:
        raise ValueError(f"unknown algebra kind {kind!r}")
    basis = tuple(standard_monomials(ideal))
    index = {m: k for k, m in enumerate(basis)}
    dim = len(basis)

    def matrix_for(shift: Monomial) -> linalg.Matrix:
        mat = linalg.zeros(dim, dim)
        for col, m in enumerate(basis):
            nf = normal_form(Poly2.monomial((m[0] + shift[0], m[1] + shift[1]), 1, ideal.variables), ideal)
            for mono, coeff in nf.items():
                mat[index[mono]][col] = coeff
        return mat

    mult_x = matrix_for((1, 0))
    mult_y = matrix_for((0, 1))
    if linalg.matmul(mult_x, mult_y) != linalg.matmul(mult_y, mult_x):
        raise AssertionError("multiplication matrices do not commute")
    # the basis is closed under division, so every predecessor is built first
    powers: dict[Monomial, linalg.Matrix] = {}
    for m in sorted(basis, key=lambda m: (m[0] + m[1], m)):
        if m == (0, 0):
            powers[m] = linalg.identity(dim)
        elif m[0] > 0:
            powers[m] = linalg.matmul(mult_x, powers[(m[0] - 1, m[1])])
        else:
            powers[m] = linalg.matmul(mult_y, powers[(0, m[1] - 1)])
    logger.debug("quotient algebra of %s: dim %d (%s)", ideal, dim, kind)
    return QuotientAlgebra(ideal, basis, mult_x, mult_y, point, kind, tuple(powers[m] for m in basis))


def _monomial_matrix(m: Monomial, mult_x: linalg.Matrix, mult_y: linalg.Matrix, dim: int) -> linalg.Matrix:
    result = linalg.identity(dim)
    for _ in range(m[0]):
        result = linalg.matmul(mult_x, result)
    for _ in range(m[1]):
        result = linalg.matmul(mult_y, result)
    return result


@dataclass(frozen=True)
class Coset:
    algebra: QuotientAlgebra = field(compare=False)
    coords: tuple[Scalar, ...]

    def is_exact(self) -> bool:
        return all(isinstance(c, GaussianRational) for c in self.coords)

    def is_zero(self, tol: float = 0.0) -> bool:
        return linalg.is_zero_vector(self.coords, tol)

    def poly(self) -> Poly2:
        return self.algebra.poly_of(self.coords)

    def value(self) -> Scalar:
        """Value of any representative at the algebra's point."""
        point = self.algebra.point
        if point is None:
            raise AlgebraMismatch("coset value needs an algebra attached to a point")
        p = self.poly()
        if p.is_exact():
            return p.eval_exact(point)
        return p.eval((complex(point[0]), complex(point[1])))

    def max_abs(self) -> float:
        return max((abs(complex(c)) for c in self.coords), default=0.0)

    def allclose(self, other: Coset, tol: float) -> bool:
        return len(self.coords) == len(other.coords) and all(
            abs(complex(a) - complex(b)) <= tol for a, b in zip(self.coords, other.coords)
        )

    def _check(self, other: Coset) -> None:
        if not self.algebra.compatible(other.algebra):
            raise AlgebraMismatch("cosets live in different algebras")

    def __add__(self, other: Coset) -> Coset:
        self._check(other)
        return Coset(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: Coset) -> Coset:
        self._check(other)
        return Coset(self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> Coset:
        return Coset(self.algebra, tuple(-a for a in self.coords))

    def scale(self, c: Scalar | int) -> Coset:
        return Coset(self.algebra, tuple(a * c for a in self.coords))

    def __mul__(self, other: Coset) -> Coset:
        return coset_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Coset):
            return NotImplemented
        return self.algebra.compatible(other.algebra) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __str__(self) -> str:
        return f"{self.poly()} + I"


def coset(p: Poly2, algebra: QuotientAlgebra) -> Coset:
    return algebra.coset(p)


def coset_add(c: Coset, d: Coset) -> Coset:
    return c + d


def coset_mul(c: Coset, d: Coset) -> Coset:
    c._check(d)
    mat = c.algebra.multiplication_matrix(c)
    return Coset(c.algebra, tuple(linalg.matvec(mat, d.coords)))


def coset_invert(c: Coset, *, margin: float = 0.0) -> Coset:
    """Inverse in the local algebra; ``NotInvertible`` when the value at the point vanishes."""
    value = c.value()
    if (isinstance(value, GaussianRational) and value.is_zero()) or abs(complex(value)) <= margin:
        raise NotInvertible("coset is not invertible", point=c.algebra.point)
    algebra = c.algebra
    mat = algebra.multiplication_matrix(c)
    unit = list(algebra.unit().coords)
    if c.is_exact():
        solution = linalg.solve(mat, unit)  # type: ignore[arg-type]
        if solution is None:
            raise NotInvertible("singular multiplication matrix", point=algebra.point)
        return Coset(algebra, tuple(solution))
    try:
        return Coset(algebra, tuple(linalg.solve_numeric(mat, unit)))  # type: ignore[arg-type]
    except np.linalg.LinAlgError as exc:
        raise NotInvertible("singular multiplication matrix", point=algebra.point) from exc


def coset_sharp(c: Coset, target: QuotientAlgebra | None = None) -> Coset:
    """Conjugate the coefficients of a representative.

    The image lives in the algebra at the conjugated point.  Without a
    *target* the source algebra is reused, which requires a real point and
    an ideal with real generators.
    """
    source = c.algebra
    if target is None:
        if source.point is not None and not point_is_real(source.point):
            raise AlgebraMismatch("sharp of a coset at a nonreal point needs the conjugate algebra")
        if not all(g.is_real() for g in source.ideal.groebner):
            raise AlgebraMismatch("sharp needs a #-invariant ideal")
        return Coset(source, tuple(a.conjugate() for a in c.coords))
    if source.point is not None and target.point != conjugate_point(source.point):
        raise AlgebraMismatch("target algebra is not attached to the conjugate point")
    return target.coset(c.poly().sharp())


def pi_project(c: Coset, target: QuotientAlgebra) -> Coset:
    """``f + P(w)Q(w)  ->  f + Q(w)``."""
    source = c.algebra
    if source.kind != "A" or target.kind != "B" or source.point != target.point:
        raise AlgebraMismatch("pi_project maps A(w) onto B(w) at the same point")
    return target.coset(c.poly())
