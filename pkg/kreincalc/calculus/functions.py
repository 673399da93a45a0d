"""The function class of the calculus.

A :class:`CalcFunction` is a finite map: complex numbers on the clustered
eigenvalues of Theta(N) that are not images of real variety points, cosets
in ``A(w) = C[x,y] / P(w)Q(w)`` at the real variety points and cosets in
``B(a) = C[x,y] / Q(a)`` at the nonreal ones.  Spectral points are keyed by
their cluster index in ``system.spectral``, variety points by their exact
coordinates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import factorial
from typing import Callable, Mapping

import numpy as np

from kreincalc.algebra.gaussian import GaussianRational, Scalar
from kreincalc.algebra.groebner import Point
from kreincalc.algebra.interpolation import lift_membership
from kreincalc.algebra.poly2 import Monomial, Poly2
from kreincalc.algebra.quotient import Coset, QuotientAlgebra, coset_invert, coset_sharp, pi_project
from kreincalc.algebra.variety import VarietyPoint, find_point, nilpotency_index, separated_local_ideal
from kreincalc.errors import AlgebraMismatch, MembershipFailed, MissingValue, NotInVariety, NotInvertible
from kreincalc.operators.embeddings import EmbeddingSystem

logger = logging.getLogger(__name__)

# Partial derivatives d^(k+l) f / dx^k dy^l keyed by (k, l).
Jet = Mapping[Monomial, Scalar | complex | int]


@dataclass(frozen=True, eq=False)
class CalcFunction:
    system: EmbeddingSystem
    scalar_values: Mapping[int, complex]
    real_cosets: Mapping[Point, Coset]
    nonreal_cosets: Mapping[Point, Coset]

    def __post_init__(self) -> None:
        expected = set(self.system.off_real_indices())
        if set(self.scalar_values) != expected:
            raise MissingValue(
                f"scalar values given at {sorted(self.scalar_values)}, expected spectral indices {sorted(expected)}"
            )
        for points, cosets, which in (
            (self.system.real_points, self.real_cosets, "A"),
            (self.system.nonreal_points, self.nonreal_cosets, "B"),
        ):
            keys = {pt.key for pt in points}
            if set(cosets) != keys:
                raise MissingValue(f"cosets must be given at exactly the {len(keys)} variety point(s) of kind {which}")
            for pt in points:
                algebra = pt.algebra_A if which == "A" else pt.algebra_B
                if not algebra.compatible(cosets[pt.key].algebra):
                    raise AlgebraMismatch(f"value at {pt} does not live in its local algebra")

    # -- access -----------------------------------------------------------

    def coset_at(self, point: Point | VarietyPoint) -> Coset:
        key = point.key if isinstance(point, VarietyPoint) else point
        if key in self.real_cosets:
            return self.real_cosets[key]
        if key in self.nonreal_cosets:
            return self.nonreal_cosets[key]
        raise NotInVariety(f"({key[0]}, {key[1]}) is not a variety point")

    def value_at_index(self, k: int) -> complex:
        """Scalar value at the k-th eigenvalue of Theta(N); a real variety point contributes its coset's value."""
        point = self.system.real_point_at(k)
        if point is None:
            return complex(self.scalar_values[k])
        return complex(self.real_cosets[point.key].value())

    def sup_norm(self) -> float:
        return max((abs(v) for v in self.scalar_values.values()), default=0.0)

    def max_coset_coordinate(self) -> float:
        cosets = list(self.real_cosets.values()) + list(self.nonreal_cosets.values())
        return max((c.max_abs() for c in cosets), default=0.0)

    @property
    def scale(self) -> float:
        return max(1.0, self.system.N.norm(), self.sup_norm(), self.max_coset_coordinate())

    # -- algebra ----------------------------------------------------------

    def __add__(self, other: CalcFunction) -> CalcFunction:
        return calc_add(self, other)

    def __mul__(self, other: CalcFunction) -> CalcFunction:
        return calc_mul(self, other)

    def __neg__(self) -> CalcFunction:
        return calc_scale(self, -1)

    def __sub__(self, other: CalcFunction) -> CalcFunction:
        return calc_add(self, calc_scale(other, -1))

    def sharp(self) -> CalcFunction:
        return calc_sharp(self)

    def allclose(self, other: CalcFunction, tol: float) -> bool:
        _check_same_system(self, other)
        return (
            all(abs(self.scalar_values[k] - other.scalar_values[k]) <= tol for k in self.scalar_values)
            and all(c.allclose(other.real_cosets[key], tol) for key, c in self.real_cosets.items())
            and all(c.allclose(other.nonreal_cosets[key], tol) for key, c in self.nonreal_cosets.items())
        )

    def restrict(self) -> CalcFunction:
        """Zero every value outside the effective set; ``phi(N)`` does not change."""
        from kreincalc.calculus.spectrum import effective_set

        effective = effective_set(self.system)
        return CalcFunction(
            self.system,
            dict(self.scalar_values),
            {key: c if key in effective.real_keys else c.algebra.zero() for key, c in self.real_cosets.items()},
            {key: c if key in effective.nonreal_keys else c.algebra.zero() for key, c in self.nonreal_cosets.items()},
        )


def _check_same_system(phi: CalcFunction, psi: CalcFunction) -> None:
    if phi.system is not psi.system:
        raise AlgebraMismatch("functions belong to different embedding systems")


def _build(
    system: EmbeddingSystem,
    scalar: Callable[[int, complex], complex],
    real: Callable[[VarietyPoint], Coset],
    nonreal: Callable[[VarietyPoint], Coset],
) -> CalcFunction:
    eigenvalues = system.spectral.eigenvalues
    return CalcFunction(
        system,
        {k: complex(scalar(k, eigenvalues[k])) for k in system.off_real_indices()},
        {pt.key: real(pt) for pt in system.real_points},
        {pt.key: nonreal(pt) for pt in system.nonreal_points},
    )


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def embed_poly(system: EmbeddingSystem, s: Poly2) -> CalcFunction:
    """``s_N``: values ``s(z)`` on the spectrum and cosets of ``s`` at the variety points."""
    return _build(
        system,
        lambda k, z: s.eval_complex(z),
        lambda pt: pt.algebra_A.coset(s),
        lambda pt: pt.algebra_B.coset(s),
    )


def unit(system: EmbeddingSystem) -> CalcFunction:
    return embed_poly(system, Poly2.one())


def zero(system: EmbeddingSystem) -> CalcFunction:
    return embed_poly(system, Poly2.zero())


def identity_function(system: EmbeddingSystem) -> CalcFunction:
    """The function ``x + iy``, which is mapped to ``N``."""
    return embed_poly(system, Poly2.gen(0) + Poly2.gen(1).scale(GaussianRational(0, 1)))


def jet_index_set(point: VarietyPoint) -> list[Monomial]:
    """Derivative orders that determine a value in the local algebra of *point*."""
    orders = [(k, l) for k in range(point.d_x) for l in range(point.d_y)]
    if point.is_real:
        orders += [(point.d_x, 0), (0, point.d_y)]
    return orders


def taylor_coset(point: VarietyPoint, jet: Jet) -> Coset:
    """Coset of the Taylor polynomial built from the partial derivatives in *jet*."""
    algebra = point.algebra_A if point.is_real else point.algebra_B
    lx = Poly2.linear(point.coords, 0)
    ly = Poly2.linear(point.coords, 1)
    taylor = Poly2.zero()
    for k, l in jet_index_set(point):
        try:
            derivative = jet[(k, l)]
        except KeyError:
            raise MissingValue(f"jet at {point} lacks the derivative of order ({k}, {l})") from None
        coefficient = _exact_or_complex(derivative) / (factorial(k) * factorial(l))
        taylor = taylor + (lx**k * ly**l).scale(coefficient)
    return algebra.coset(taylor)


def _exact_or_complex(value: object) -> Scalar:
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, int):
        return GaussianRational(value)
    return complex(value)  # type: ignore[arg-type]


def embed_jet(
    system: EmbeddingSystem,
    values: Mapping[int, complex] | Callable[[complex], complex],
    jets: Mapping[Point, Jet],
) -> CalcFunction:
    """``f_N`` for a smooth ``f`` known through its values on the spectrum and its jets at the variety."""

    def scalar(k: int, z: complex) -> complex:
        if callable(values):
            return values(z)
        try:
            return values[k]
        except KeyError:
            raise MissingValue(f"no value at spectral point {z:.6g}") from None

    def local(pt: VarietyPoint) -> Coset:
        try:
            jet = jets[pt.key]
        except KeyError:
            raise MissingValue(f"no jet at variety point {pt}") from None
        return taylor_coset(pt, jet)

    return _build(system, scalar, local, local)


def delta(system: EmbeddingSystem, point: Point | VarietyPoint, value: Coset) -> CalcFunction:
    """``a * delta_zeta``: the coset *value* at *point*, zero everywhere else."""
    target = find_point(list(system.points), point.key if isinstance(point, VarietyPoint) else point)
    algebra = target.algebra_A if target.is_real else target.algebra_B
    if not algebra.compatible(value.algebra):
        raise AlgebraMismatch(f"value does not live in the local algebra at {target}")
    return _build(
        system,
        lambda k, z: 0j,
        lambda pt: value if pt is target else pt.algebra_A.zero(),
        lambda pt: value if pt is target else pt.algebra_B.zero(),
    )


def unit_delta(system: EmbeddingSystem, point: Point | VarietyPoint) -> CalcFunction:
    """``e * delta_zeta`` with ``e`` the unit of the local algebra."""
    target = find_point(list(system.points), point.key if isinstance(point, VarietyPoint) else point)
    algebra = target.algebra_A if target.is_real else target.algebra_B
    return delta(system, target, algebra.unit())


def random_function(system: EmbeddingSystem, rng: np.random.Generator, *, degree: int = 2) -> CalcFunction:
    """Random scalar values plus cosets of random exact polynomials."""
    from kreincalc.utils.sampling import random_complex, random_poly

    return _build(
        system,
        lambda k, z: random_complex(rng),
        lambda pt: pt.algebra_A.coset(random_poly(rng, degree)),
        lambda pt: pt.algebra_B.coset(random_poly(rng, degree)),
    )


# ---------------------------------------------------------------------------
# Pointwise operations
# ---------------------------------------------------------------------------


def calc_add(phi: CalcFunction, psi: CalcFunction) -> CalcFunction:
    _check_same_system(phi, psi)
    return CalcFunction(
        phi.system,
        {k: v + psi.scalar_values[k] for k, v in phi.scalar_values.items()},
        {key: c + psi.real_cosets[key] for key, c in phi.real_cosets.items()},
        {key: c + psi.nonreal_cosets[key] for key, c in phi.nonreal_cosets.items()},
    )


def calc_mul(phi: CalcFunction, psi: CalcFunction) -> CalcFunction:
    _check_same_system(phi, psi)
    return CalcFunction(
        phi.system,
        {k: v * psi.scalar_values[k] for k, v in phi.scalar_values.items()},
        {key: c * psi.real_cosets[key] for key, c in phi.real_cosets.items()},
        {key: c * psi.nonreal_cosets[key] for key, c in phi.nonreal_cosets.items()},
    )


def calc_scale(phi: CalcFunction, c: complex | int) -> CalcFunction:
    factor: Scalar = GaussianRational(c) if isinstance(c, int) else complex(c)
    return CalcFunction(
        phi.system,
        {k: v * complex(c) for k, v in phi.scalar_values.items()},
        {key: d.scale(factor) for key, d in phi.real_cosets.items()},
        {key: d.scale(factor) for key, d in phi.nonreal_cosets.items()},
    )


def calc_sharp(phi: CalcFunction) -> CalcFunction:
    """``phi#(xi, eta) = phi(conj xi, conj eta)#``; conjugate nonreal points trade places."""
    system = phi.system
    nonreal: dict[Point, Coset] = {}
    for pt in system.nonreal_points:
        source = phi.nonreal_cosets.get(pt.conjugate_key)
        if source is None:
            raise AlgebraMismatch(f"variety has no point conjugate to {pt}; the ideal is not #-invariant")
        nonreal[pt.key] = coset_sharp(source, pt.algebra_B)
    return CalcFunction(
        system,
        {k: v.conjugate() for k, v in phi.scalar_values.items()},
        {key: coset_sharp(c) for key, c in phi.real_cosets.items()},
        nonreal,
    )


def calc_invert(phi: CalcFunction) -> CalcFunction:
    """Pointwise inverse.

    Values outside the effective set do not influence ``phi(N)``; where they
    are not invertible they are replaced by the unit.
    """
    from kreincalc.calculus.spectrum import effective_set

    system = phi.system
    margin = system.tolerances.invert_margin
    effective = effective_set(system)
    scalars: dict[int, complex] = {}
    for k, v in phi.scalar_values.items():
        if abs(v) <= margin:
            raise NotInvertible("scalar value is not invertible", point=system.spectral.eigenvalues[k])
        scalars[k] = 1 / v

    def invert(c: Coset, key: Point, effective_keys: frozenset[Point]) -> Coset:
        try:
            return coset_invert(c, margin=margin)
        except NotInvertible:
            if key in effective_keys:
                raise
            logger.debug("coset at %s is not invertible but outside the effective set", key)
            return c.algebra.unit()

    return CalcFunction(
        system,
        scalars,
        {key: invert(c, key, effective.real_keys) for key, c in phi.real_cosets.items()},
        {key: invert(c, key, effective.nonreal_keys) for key, c in phi.nonreal_cosets.items()},
    )


# ---------------------------------------------------------------------------
# Local diagnostics
# ---------------------------------------------------------------------------


def _real_point(system: EmbeddingSystem, point: Point | VarietyPoint) -> VarietyPoint:
    key = point.key if isinstance(point, VarietyPoint) else point
    target = find_point(list(system.points), key)
    if not target.is_real:
        raise NotInVariety(f"{target} is not a real variety point")
    return target


def compute_chi(system: EmbeddingSystem, point: Point | VarietyPoint, z: complex) -> float:
    """``chi_w(z) = max_j |h_j(z)|`` over the generators ``h_j`` of ``Q(w)``."""
    w = _real_point(system, point)
    return max((abs(h.eval_complex(z)) for h in w.local_Q.groebner), default=0.0)


def chi_separated(p1: Poly2, p2: Poly2, point: Point, z: complex) -> float:
    """Closed form of ``chi_w`` when ``I = <p1(x), p2(y)>``: ``max(|Re z - a|^d1, |Im z - b|^d2)``."""
    q = separated_local_ideal(p1, p2, point)
    d1 = nilpotency_index(q, point, 0)
    d2 = nilpotency_index(q, point, 1)
    a, b = complex(point[0]).real, complex(point[1]).real
    return max(abs(z.real - a) ** d1, abs(z.imag - b) ** d2)


def _snap_poly(p: Poly2, system: EmbeddingSystem) -> Poly2:
    if p.is_exact():
        return p
    tol = system.tolerances
    terms = {}
    for m, c in p.items():
        snapped = GaussianRational.snap(complex(c), tol=tol.snap, max_denominator=tol.max_denominator)
        if snapped is None:
            raise MembershipFailed(f"coefficient {c} of {m} is not close to a Gaussian rational")
        terms[m] = snapped
    return Poly2(terms, p.variables)


def local_correction(phi: CalcFunction, point: Point | VarietyPoint) -> tuple[dict[int, complex], ...]:
    """Functions ``g_j`` on the spectrum of Theta(N) with ``phi(N) = Psi(0; g)``.

    *phi* must vanish away from the real point ``w`` and its value there must
    lie in ``Q(w)``.  The ``g_j`` vanish everywhere except at ``w``.
    """
    from kreincalc.calculus.triples import decompose

    system = phi.system
    w = _real_point(system, point)
    tol = system.tolerances.calculus * phi.scale
    if any(abs(v) > tol for v in phi.scalar_values.values()):
        raise MembershipFailed("function has nonzero scalar values")
    for key, c in list(phi.real_cosets.items()) + list(phi.nonreal_cosets.items()):
        if key != w.key and not c.is_zero(tol):
            raise MembershipFailed(f"function does not vanish at ({key[0]}, {key[1]})")
    if not pi_project(phi.real_cosets[w.key], w.algebra_B).is_zero(tol):
        raise MembershipFailed(f"value at {w} does not project to zero in B(w)")

    p = _snap_poly(decompose(phi).r, system)
    others = [pt for pt in system.real_points if pt is not w]
    u = lift_membership(p, system.ideal, others, points=system.points)
    k = system.spectral_index_of(w)
    g: list[dict[int, complex]] = []
    for uj in u:
        gj = {i: 0j for i in range(len(system.spectral))}
        if k is not None:
            gj[k] = complex(uj.eval_exact(w.coords))
        g.append(gj)
    return tuple(g)
