"""Chinese-remainder interpolation and constrained ideal membership.

Both operate on the local data of a zero-dimensional ideal: interpolation
finds one polynomial with prescribed cosets modulo pairwise comaximal
local ideals, membership lifting writes an element of a product of local
ideals as a combination of the generators with cofactors vanishing on a
prescribed set of points.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from kreincalc.algebra import linalg
from kreincalc.algebra.groebner import IdealData, Point, express, groebner, product_ideal
from kreincalc.algebra.poly2 import Poly2
from kreincalc.algebra.quotient import Coset, QuotientAlgebra, quotient_algebra
from kreincalc.algebra.variety import VarietyPoint
from kreincalc.errors import InconsistentTargets, MembershipFailed, MissingValue

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CrtInterpolator:
    """Inverse of ``C[x,y]/J -> prod_a C[x,y]/modulus(a)`` with ``J`` the product of the moduli."""

    keys: tuple[Point, ...]
    moduli: tuple[QuotientAlgebra, ...]
    joint: QuotientAlgebra
    inverse: linalg.Matrix

    def interpolate(self, targets: Mapping[Point, Coset]) -> Poly2:
        missing = [k for k in self.keys if k not in targets]
        if missing:
            raise MissingValue(f"no target coset at {len(missing)} point(s)")
        extra = [k for k in targets if k not in self.keys]
        if extra:
            raise InconsistentTargets(f"{len(extra)} target(s) at points outside the variety")
        rhs: list = []
        for key, algebra in zip(self.keys, self.moduli):
            target = targets[key]
            if target.algebra.ideal.groebner != algebra.ideal.groebner:
                raise InconsistentTargets(f"target at {key} lives in a different local algebra")
            rhs.extend(target.coords)
        return self.joint.poly_of(linalg.matvec(self.inverse, rhs))


def build_interpolator(moduli: Sequence[tuple[Point, QuotientAlgebra]]) -> CrtInterpolator:
    return _build_interpolator(tuple(moduli))


@lru_cache(maxsize=256)
def _build_interpolator(moduli: tuple[tuple[Point, QuotientAlgebra], ...]) -> CrtInterpolator:
    joint_ideal = groebner([Poly2.one()])
    for _, algebra in moduli:
        joint_ideal = product_ideal(joint_ideal, algebra.ideal)
    joint = quotient_algebra(joint_ideal)

    rows: linalg.Matrix = []
    for _, algebra in moduli:
        columns = [algebra.coords_of(Poly2.monomial(m)) for m in joint.basis]
        for r in range(algebra.dim):
            rows.append([col[r] for col in columns])  # type: ignore[misc]
    if len(rows) != joint.dim:
        raise InconsistentTargets(
            f"moduli are not comaximal: {len(rows)} local coordinates for a quotient of dimension {joint.dim}"
        )
    inverse = linalg.inverse(rows) if rows else []
    if inverse is None:
        raise InconsistentTargets("moduli are not comaximal")
    logger.debug("CRT interpolator over %d moduli, dim %d", len(moduli), joint.dim)
    return CrtInterpolator(
        keys=tuple(k for k, _ in moduli),
        moduli=tuple(a for _, a in moduli),
        joint=joint,
        inverse=inverse,
    )


def modulus(point: VarietyPoint, which: str) -> QuotientAlgebra:
    if which == "A":
        return point.algebra_A
    if which == "B":
        return point.algebra_B
    raise ValueError(f"unknown algebra selector {which!r}")


def crt_interpolate(targets: Mapping[VarietyPoint, tuple[Coset, str]]) -> Poly2:
    """Polynomial whose coset at every point equals the given target."""
    ordered = sorted(targets.items(), key=lambda item: _key_order(item[0].key))
    interpolator = build_interpolator([(pt.key, modulus(pt, which)) for pt, (_, which) in ordered])
    return interpolator.interpolate({pt.key: c for pt, (c, _) in ordered})


def _key_order(key: Point) -> tuple:
    return (key[0].re, key[0].im, key[1].re, key[1].im)


# ---------------------------------------------------------------------------
# Membership with vanishing cofactors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _LiftSystem:
    ideal: IdealData
    multipliers: tuple[Poly2, ...]


@lru_cache(maxsize=256)
def _lift_system(generators: tuple[Poly2, ...], vanishing: tuple[Point, ...]) -> _LiftSystem:
    """Groebner data of ``I * prod_{a in W} P(a)`` generated by ``p_j * g``."""
    radical = groebner([Poly2.one()])
    for key in vanishing:
        radical = product_ideal(
            radical, groebner([Poly2.linear(key, 0), Poly2.linear(key, 1)])
        )
    multipliers = radical.groebner
    products = [p * g for p in generators for g in multipliers]
    return _LiftSystem(groebner(products), multipliers)


def lift_membership(
    p: Poly2,
    ideal: IdealData,
    vanishing: Iterable[VarietyPoint],
    points: Sequence[VarietyPoint] = (),
) -> tuple[Poly2, ...]:
    """Cofactors ``u_j`` with ``p = sum u_j p_j`` and ``u_j(a) = 0`` for ``a`` in *vanishing*.

    When *points* is given, the precondition ``p in J`` is checked first
    through normal forms modulo ``Q(a)`` (``a`` outside *vanishing*) resp.
    ``P(a)Q(a)`` (``a`` in *vanishing*).
    """
    w_points = sorted(vanishing, key=lambda pt: _key_order(pt.key))
    w_keys = tuple(pt.key for pt in w_points)
    for pt in points:
        algebra = pt.algebra_A if pt.key in w_keys else pt.algebra_B
        if not algebra.coset(p).is_zero():
            raise MembershipFailed(f"{p} is not in the local modulus at {pt}")

    generators = ideal.generators
    system = _lift_system(generators, w_keys)
    try:
        cofactors = express(p, system.ideal)
    except MembershipFailed as exc:
        raise MembershipFailed(f"{p} is not in I * prod P(a) over the vanishing set") from exc

    width = len(system.multipliers)
    result: list[Poly2] = []
    for j in range(len(generators)):
        u = Poly2.zero(p.variables)
        for k, g in enumerate(system.multipliers):
            u = u + cofactors[j * width + k] * g
        result.append(u)

    combo = Poly2.zero(p.variables)
    for u, gen in zip(result, generators):
        combo = combo + u * gen
    if combo != p:
        raise MembershipFailed("lifted cofactors do not reproduce the polynomial")
    return tuple(result)
