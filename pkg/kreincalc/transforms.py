"""Transport of definitizing polynomials under ``N + beta I``, ``alpha N`` and ``N^-1``.

Shifting and scaling are ring automorphisms of ``C[x, y]``, so they carry
real definitizing polynomials and zero-dimensional ideals along.  The
inverse goes through the ``(z, w)`` variables: ``Phi^-1(varpi(Phi(p)))``
is definitizing for ``N^-1`` whenever ``p`` is definitizing for ``N``.

The selfadjoint and unitary cases get a sanity report of their own.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from kreincalc.algebra.gaussian import ExactLike, GaussianRational
from kreincalc.algebra.groebner import groebner
from kreincalc.algebra.poly2 import Poly2, mat_subst, phi_inverse, phi_transform, varpi
from kreincalc.algebra.variety import variety
from kreincalc.checks import CheckReport
from kreincalc.config import Tolerances
from kreincalc.errors import InexactCoefficient, NotInvertible, ZeroPolynomial
from kreincalc.operators.embeddings import EmbeddingSystem
from kreincalc.operators.krein import (
    DefinitizingResult,
    KreinOperator,
    adjoint,
    is_definitizing,
    normality_residual,
    opnorm,
    real_imag,
)
from kreincalc.utils.clustering import cluster_values

logger = logging.getLogger(__name__)

_X = Poly2.gen(0)
_Y = Poly2.gen(1)


def _exact(value: ExactLike | complex, tolerances: Tolerances) -> GaussianRational:
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussianRational.coerce(value)
    snapped = GaussianRational.snap(
        complex(value), tol=tolerances.snap, max_denominator=tolerances.max_denominator
    )
    if snapped is None:
        raise InexactCoefficient(f"{value} is not close to a Gaussian rational")
    return snapped


# ---------------------------------------------------------------------------
# Polynomial transforms
# ---------------------------------------------------------------------------


def shift_definitizing(p: Poly2, beta: ExactLike | complex, tolerances: Tolerances | None = None) -> Poly2:
    """``p(x - Re beta, y - Im beta)``, definitizing for ``N + beta I``."""
    b = _exact(beta, tolerances or Tolerances())
    return p.compose(_X - b.re, _Y - b.im)


def scale_definitizing(p: Poly2, alpha: ExactLike | complex, tolerances: Tolerances | None = None) -> Poly2:
    """``p(x Re(1/alpha) - y Im(1/alpha), x Im(1/alpha) + y Re(1/alpha))``, definitizing for ``alpha N``."""
    a = _exact(alpha, tolerances or Tolerances())
    if a.is_zero():
        raise NotInvertible("scaling factor must be nonzero", point=0)
    inv = a.inverse()
    re, im = GaussianRational(inv.re), GaussianRational(inv.im)
    return p.compose(_X.scale(re) - _Y.scale(im), _X.scale(im) + _Y.scale(re))


def strip_zw(q: Poly2) -> Poly2:
    """Divide out the largest power of ``zw`` that divides *q*."""
    k = min(min(i, j) for (i, j), _ in q.items())
    if k == 0:
        return q
    return Poly2({(i - k, j - k): c for (i, j), c in q.items()}, q.variables)


def invert_definitizing(p: Poly2, *, strip_common: bool = False) -> Poly2:
    """``Phi^-1(varpi(Phi(p)))``, definitizing for ``N^-1``.

    The reversal degree is taken from the exact term map of ``Phi(p)``;
    common ``zw`` factors are removed only with ``strip_common=True``.
    """
    if p.is_zero():
        raise ZeroPolynomial("cannot invert the zero polynomial")
    reversed_ = varpi(phi_transform(p))
    if strip_common:
        reversed_ = strip_zw(reversed_)
    return phi_inverse(reversed_)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TransformReport:
    kind: str
    original: Poly2
    transformed: Poly2
    target_op: KreinOperator
    definitizing_ok: bool
    ideal_zero_dim_ok: bool
    definitizing: DefinitizingResult | None = None

    @property
    def passed(self) -> bool:
        return self.definitizing_ok and self.ideal_zero_dim_ok

    def as_dict(self) -> dict[str, object]:
        return {
            "kind": self.kind,
            "original": str(self.original),
            "transformed": str(self.transformed),
            "definitizing_ok": self.definitizing_ok,
            "ideal_zero_dim_ok": self.ideal_zero_dim_ok,
            "min_eigenvalue": self.definitizing.min_eigenvalue if self.definitizing else None,
        }


def _reports(
    kind: str,
    originals: Sequence[Poly2],
    transformed: Sequence[Poly2],
    target: KreinOperator,
    tolerances: Tolerances,
) -> list[TransformReport]:
    zero_dim = groebner(transformed).is_zero_dimensional()
    out = []
    for p, q in zip(originals, transformed):
        result = is_definitizing(q, target, tolerances)
        logger.debug("%s: %s -> %s definitizing=%s", kind, p, q, result.ok)
        out.append(TransformReport(kind, p, q, target, result.ok, zero_dim, result))
    return out


def inverse_transport_check(system: EmbeddingSystem) -> list[TransformReport]:
    """Transform every ``p_j`` for ``N^-1`` and test the results.

    Raises :class:`~kreincalc.errors.SingularOperator` when ``N`` has an
    eigenvalue at 0.
    """
    tolerances = system.tolerances
    target = system.N.inverse(tolerances.invert_margin)
    transformed = [invert_definitizing(p) for p in system.defpolys]
    return _reports("inverse", system.defpolys, transformed, target, tolerances)


def transport_check(
    system: EmbeddingSystem,
    beta: ExactLike | complex = 0,
    alpha: ExactLike | complex = 1,
) -> list[TransformReport]:
    """Shifted polynomials against ``N + beta I`` and scaled ones against ``alpha N``."""
    tolerances = system.tolerances
    N = system.N
    b = _exact(beta, tolerances)
    a = _exact(alpha, tolerances)
    shifted = [shift_definitizing(p, b) for p in system.defpolys]
    scaled = [scale_definitizing(p, a) for p in system.defpolys]
    shifted_op = system.space.operator(N.matrix + complex(b) * np.eye(N.dim))
    scaled_op = N.scale(complex(a))
    return _reports("shift", system.defpolys, shifted, shifted_op, tolerances) + _reports(
        "scale", system.defpolys, scaled, scaled_op, tolerances
    )


# ---------------------------------------------------------------------------
# Selfadjoint and unitary operators
# ---------------------------------------------------------------------------


def _distinct_eigenvalues(N: KreinOperator, tolerances: Tolerances) -> list[complex]:
    radius = tolerances.eigen_cluster_radius * max(1.0, N.norm())
    return [c.centroid for c in cluster_values(np.linalg.eigvals(N.matrix), radius)]


def _contains(values: list[complex], z: complex, tol: float) -> bool:
    return any(abs(z - v) <= tol for v in values)


def _variety_images(defpolys: Sequence[Poly2], tolerances: Tolerances) -> list[complex] | None:
    ideal = groebner(defpolys)
    if not ideal.is_zero_dimensional():
        return None
    return [pt.image for pt in variety(ideal, tolerances)]


def x_part(p: Poly2) -> Poly2:
    """``t(x)`` in ``p = y s(x, y) + t(x)``."""
    return Poly2({(i, j): c for (i, j), c in p.items() if j == 0}, p.variables)


def special_case_check(
    N: KreinOperator,
    defpolys: Sequence[Poly2] = (),
    tolerances: Tolerances | None = None,
) -> CheckReport:
    """Detect selfadjoint and unitary ``N`` and check what follows for them.

    A selfadjoint ``N`` is annihilated by ``y``, its nonreal eigenvalues come
    in conjugate pairs and every generator's ``t(x)`` part is definitizing
    for ``A``.  A unitary ``N`` is annihilated by ``x^2 + y^2 - 1``, its
    eigenvalues off the unit circle come in pairs ``lambda, 1/conj(lambda)``
    and ``<Phi(p_j), zw - 1>`` is zero-dimensional.  When *defpolys* span a
    zero-dimensional ideal the exceptional eigenvalues must be variety
    images.
    """
    tolerances = tolerances or Tolerances()
    report = CheckReport("special cases")
    scale = max(1.0, N.norm())
    n = N.dim
    Np = adjoint(N).matrix
    selfadjoint = opnorm(N.matrix - Np) <= tolerances.hermitian * scale
    unitary = (
        opnorm(Np @ N.matrix - np.eye(n)) <= tolerances.hermitian * scale
        and opnorm(N.matrix @ Np - np.eye(n)) <= tolerances.hermitian * scale
    )
    if selfadjoint:
        report.flag("selfadjoint", True)
    if unitary:
        report.flag("unitary", True)
    if not (selfadjoint or unitary):
        logger.debug("special cases: N is neither selfadjoint nor unitary")
        return report

    tol = tolerances.spectrum_match * scale
    sigma = _distinct_eigenvalues(N, tolerances)
    images = _variety_images(defpolys, tolerances) if defpolys else None
    A, B = real_imag(N)
    if normality_residual(N) > tolerances.normal:
        report.flag("normal", False)
        return report

    if selfadjoint:
        report.add_matrix("y_annihilates", B, np.zeros_like(B), tolerances.calculus)
        report.flag("y_definitizing", is_definitizing(_Y, N, tolerances).ok)
        exceptional = [z for z in sigma if abs(z.imag) > tol]
        for z in exceptional:
            report.flag("nonreal_spectrum_symmetric", _contains(sigma, z.conjugate(), tol), f"z={z:.6g}")
            if images is not None:
                report.flag("nonreal_spectrum_in_variety", _contains(images, z, tol), f"z={z:.6g}")
        parts = [x_part(p) for p in defpolys]
        if defpolys:
            report.flag("x_part_nonzero", any(not t.is_zero() for t in parts))
        for p, t in zip(defpolys, parts):
            if t.is_zero():
                continue
            report.flag("x_part_definitizing", is_definitizing(t, N, tolerances).ok, f"t={t}")

    if unitary:
        circle = _X * _X + _Y * _Y - 1
        report.add_matrix(
            "circle_annihilates", mat_subst(circle, A, B, tol=tolerances.commute), np.zeros((n, n)), tolerances.calculus
        )
        report.flag("circle_definitizing", is_definitizing(circle, N, tolerances).ok)
        exceptional = [z for z in sigma if abs(abs(z) - 1.0) > tol]
        for z in exceptional:
            partner = 1.0 / z.conjugate()
            report.flag("off_circle_spectrum_symmetric", _contains(sigma, partner, tol), f"z={z:.6g}")
            if images is not None:
                report.flag("off_circle_spectrum_in_variety", _contains(images, z, tol), f"z={z:.6g}")
        if defpolys:
            z, w = Poly2.gen(0, "zw"), Poly2.gen(1, "zw")
            gens = [phi_transform(p) for p in defpolys] + [z * w - 1]
            report.flag("circle_ideal_zero_dimensional", groebner(gens).is_zero_dimensional())
    return report
