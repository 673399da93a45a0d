"""Variety points of zero-dimensional ideals and their local data.

Points are found numerically from the eigenvalues of the multiplication
matrices, snapped to Gaussian rationals and then verified exactly.  Each
point carries its primary component ``Q(a)``, the maximal ideal ``P(a)``
and the local algebras ``A(a) = C[x,y]/(P(a)Q(a))``, ``B(a) = C[x,y]/Q(a)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import product

import numpy as np

from kreincalc.algebra import linalg
from kreincalc.algebra.gaussian import GaussianRational
from kreincalc.algebra.groebner import (
    IdealData,
    Point,
    groebner,
    maximal_ideal,
    maximal_power,
    normal_form,
    product_ideal,
    same_ideal,
    sum_ideal,
)
from kreincalc.algebra.poly2 import Poly2
from kreincalc.algebra.quotient import QuotientAlgebra, conjugate_point, point_is_real, quotient_algebra
from kreincalc.config import Tolerances
from kreincalc.errors import (
    IncompleteVariety,
    NonRationalVarietyPoint,
    NotInVariety,
    NotZeroDimensional,
    VariableTagError,
)
from kreincalc.utils.clustering import cluster_values

logger = logging.getLogger(__name__)

# Fixed so that variety runs are reproducible.
_COMBINATION_SEED = 1729


@dataclass(frozen=True, eq=False)
class VarietyPoint:
    coords: Point
    local_Q: IdealData
    local_P: IdealData
    d_x: int
    d_y: int
    algebra_A: QuotientAlgebra
    algebra_B: QuotientAlgebra

    @property
    def key(self) -> Point:
        return self.coords

    @property
    def is_real(self) -> bool:
        return point_is_real(self.coords)

    @property
    def image(self) -> complex:
        """``a_x + i a_y`` as a complex number."""
        return complex(self.coords[0]) + 1j * complex(self.coords[1])

    @property
    def as_complex(self) -> complex | None:
        return self.image if self.is_real else None

    @property
    def conjugate_key(self) -> Point:
        return conjugate_point(self.coords)

    def __str__(self) -> str:
        return f"({self.coords[0]}, {self.coords[1]})"


def vanishes_at(ideal: IdealData, point: Point) -> bool:
    return all(g.eval_exact(point).is_zero() for g in ideal.groebner)


def local_component(ideal: IdealData, point: Point) -> IdealData:
    """Primary component ``Q(a) = I + M_a^k`` with the least stabilising ``k``."""
    if not vanishes_at(ideal, point):
        raise NotInVariety(f"({point[0]}, {point[1]}) is not a zero of {ideal}")
    bound = quotient_algebra(ideal).dim + 1
    current = sum_ideal(ideal, maximal_power(point, 1, ideal.variables))
    for k in range(1, bound + 1):
        following = sum_ideal(ideal, maximal_power(point, k + 1, ideal.variables))
        if same_ideal(current, following):
            logger.debug("Q(%s, %s) stabilised at k=%d: %s", point[0], point[1], k, current)
            return current
        current = following
    raise NotZeroDimensional(f"local component of {ideal} did not stabilise within k={bound}")


def nilpotency_index(ideal: IdealData, point: Point, index: int) -> int:
    """Least ``m`` with ``(x - a_x)^m`` (``index=0``) resp. ``(y - a_y)^m`` in the ideal."""
    linear = Poly2.linear(point, index, ideal.variables)
    power = Poly2.one(ideal.variables)
    for m in range(0, quotient_algebra(ideal).dim + 1):
        if normal_form(power, ideal).is_zero():
            return m
        power = power * linear
    raise NotZeroDimensional(f"{linear} is not nilpotent modulo {ideal}")


def build_point(ideal: IdealData, point: Point) -> VarietyPoint:
    q = local_component(ideal, point)
    p = maximal_ideal(point, ideal.variables)
    return VarietyPoint(
        coords=point,
        local_Q=q,
        local_P=p,
        d_x=nilpotency_index(q, point, 0),
        d_y=nilpotency_index(q, point, 1),
        algebra_A=quotient_algebra(product_ideal(p, q), point=point, kind="A"),
        algebra_B=quotient_algebra(q, point=point, kind="B"),
    )


def _sort_key(point: Point) -> tuple:
    return (point[0].re, point[0].im, point[1].re, point[1].im)


def _candidate_points(algebra: QuotientAlgebra, tolerances: Tolerances) -> list[tuple[complex, complex]]:
    mx = linalg.to_numpy(algebra.mult_x)
    my = linalg.to_numpy(algebra.mult_y)
    rng = np.random.default_rng(_COMBINATION_SEED)
    t = complex(rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8))
    mc = t * mx + (1 - t) * my

    scale = max(1.0, float(np.linalg.norm(mx, 2)), float(np.linalg.norm(my, 2)))
    radius = tolerances.eigen_cluster_radius * scale
    xs = [c.centroid for c in cluster_values(np.linalg.eigvals(mx), radius)]
    ys = [c.centroid for c in cluster_values(np.linalg.eigvals(my), radius)]
    combos = [c.centroid for c in cluster_values(np.linalg.eigvals(mc), radius)]

    candidates: list[tuple[complex, complex]] = []
    for combo in combos:
        best = min(product(xs, ys), key=lambda xy: abs(t * xy[0] + (1 - t) * xy[1] - combo))
        distance = abs(t * best[0] + (1 - t) * best[1] - combo)
        if distance > tolerances.point_match * scale:
            raise NonRationalVarietyPoint(
                "no coordinate pair matches a joint eigenvalue", coords=best,
            )
        candidates.append(best)
    return candidates


def variety(ideal: IdealData, tolerances: Tolerances | None = None) -> list[VarietyPoint]:
    """All points of ``V(ideal)`` with their local data, sorted by coordinates."""
    if ideal.variables != "xy":
        raise VariableTagError("variety expects an ideal in (x, y)")
    tolerances = tolerances or Tolerances()
    algebra = quotient_algebra(ideal)
    if algebra.dim == 0:
        return []

    exact: list[Point] = []
    for ax, ay in _candidate_points(algebra, tolerances):
        sx = GaussianRational.snap(ax, tol=tolerances.snap, max_denominator=tolerances.max_denominator)
        sy = GaussianRational.snap(ay, tol=tolerances.snap, max_denominator=tolerances.max_denominator)
        if sx is None or sy is None:
            raise NonRationalVarietyPoint("variety coordinate is not a Gaussian rational", coords=(ax, ay))
        point = (sx, sy)
        if not vanishes_at(ideal, point):
            raise NonRationalVarietyPoint("snapped point is not an exact zero", coords=(ax, ay))
        if point not in exact:
            exact.append(point)

    points = [build_point(ideal, pt) for pt in sorted(exact, key=_sort_key)]
    total = sum(p.algebra_B.dim for p in points)
    if total != algebra.dim:
        raise IncompleteVariety(
            f"local dimensions add up to {total}, quotient of {ideal} has dimension {algebra.dim}"
        )
    logger.debug("variety of %s: %s", ideal, ", ".join(str(p) for p in points))
    return points


def separated_local_ideal(p1: Poly2, p2: Poly2, point: Point) -> IdealData:
    """Closed form ``<(x - z)^d1, (y - w)^d2>`` for ``I = <p1(x), p2(y)>``.

    ``d1`` and ``d2`` are the root multiplicities of ``z`` in ``p1`` and of
    ``w`` in ``p2``.
    """
    if not (p1.is_univariate_in(0) and p2.is_univariate_in(1)):
        raise VariableTagError("separated generators must be p1(x) and p2(y)")
    d1 = _root_multiplicity(p1, point, 0)
    d2 = _root_multiplicity(p2, point, 1)
    if d1 == 0 or d2 == 0:
        raise NotInVariety(f"({point[0]}, {point[1]}) is not a common zero")
    lx = Poly2.linear(point, 0, p1.variables)
    ly = Poly2.linear(point, 1, p1.variables)
    return groebner([lx**d1, ly**d2])


def _root_multiplicity(p: Poly2, point: Point, index: int) -> int:
    d = 0
    current = p
    while not current.is_zero() and current.eval_exact(point).is_zero():
        d += 1
        current = current.derivative(1, 0) if index == 0 else current.derivative(0, 1)
    return d


def is_sharp_invariant(ideal: IdealData) -> bool:
    return all(g.is_real() for g in ideal.groebner)


def conjugate_ideal(ideal: IdealData) -> IdealData:
    return groebner(g.sharp() for g in ideal.groebner)


def find_point(points: list[VarietyPoint], key: Point) -> VarietyPoint:
    for p in points:
        if p.key == key:
            return p
    raise NotInVariety(f"({key[0]}, {key[1]}) is not a variety point")
