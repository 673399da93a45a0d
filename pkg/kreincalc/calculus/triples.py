"""Triples ``(r, f_1, ..., f_m)``, the map Psi and the calculus ``phi -> phi(N)``.

``Psi(r, f) = r(A, B) + sum_k Xi_k(int f_k dE_k)`` is a homomorphism on the
triple algebra; its kernel contains the ideal of null triples.  A function
of the calculus is decomposed into a triple through interpolation of its
cosets and division by ``sum_k p_k`` on the spectrum.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from kreincalc.algebra.gaussian import GaussianRational
from kreincalc.algebra.interpolation import build_interpolator, crt_interpolate, lift_membership
from kreincalc.algebra.poly2 import Poly2, mat_subst
from kreincalc.algebra.quotient import quotient_algebra
from kreincalc.algebra.groebner import maximal_ideal
from kreincalc.calculus.functions import CalcFunction
from kreincalc.checks import CheckReport
from kreincalc.errors import DimensionMismatch, MembershipFailed, VanishingDenominator
from kreincalc.operators.embeddings import EmbeddingSystem
from kreincalc.operators.krein import KreinOperator
from kreincalc.operators.spectral import integrate_j, poly_magnitude

logger = logging.getLogger(__name__)

SpectralFunction = dict[int, complex]


@dataclass(frozen=True, eq=False)
class Triple:
    system: EmbeddingSystem = field(repr=False)
    r: Poly2
    f: tuple[SpectralFunction, ...]

    def __post_init__(self) -> None:
        if len(self.f) != self.system.m:
            raise DimensionMismatch(f"triple needs {self.system.m} spectral functions, got {len(self.f)}")
        indices = set(range(len(self.system.spectral)))
        for j, fj in enumerate(self.f):
            if set(fj) != indices:
                raise DimensionMismatch(f"f_{j + 1} must be defined on every eigenvalue of Theta(N)")

    def __add__(self, other: Triple) -> Triple:
        _check_same_system(self, other)
        return Triple(
            self.system,
            self.r + other.r,
            tuple({k: a[k] + b[k] for k in a} for a, b in zip(self.f, other.f)),
        )

    def __sub__(self, other: Triple) -> Triple:
        return self + other.scale(-1)

    def __mul__(self, other: Triple) -> Triple:
        return triple_mul(self, other)

    def scale(self, c: complex | int) -> Triple:
        factor = GaussianRational(c) if isinstance(c, int) else complex(c)
        return Triple(self.system, self.r.scale(factor), tuple({k: v * c for k, v in fj.items()} for fj in self.f))

    def sharp(self) -> Triple:
        return triple_sharp(self)


def _check_same_system(t: Triple, u: Triple) -> None:
    if t.system is not u.system:
        raise DimensionMismatch("triples belong to different embedding systems")


def _zero_functions(system: EmbeddingSystem) -> tuple[SpectralFunction, ...]:
    return tuple({k: 0j for k in range(len(system.spectral))} for _ in range(system.m))


def poly_triple(system: EmbeddingSystem, r: Poly2) -> Triple:
    """``(r, 0, ..., 0)``."""
    return Triple(system, r, _zero_functions(system))


def _poly_values(system: EmbeddingSystem, p: Poly2) -> list[complex]:
    return [p.eval_complex(z) for z in system.spectral.eigenvalues]


def triple_mul(t: Triple, u: Triple) -> Triple:
    """``(rs, r g_j + s f_j + f_j sum_k g_k p_k)``."""
    _check_same_system(t, u)
    system = t.system
    r_vals = _poly_values(system, t.r)
    s_vals = _poly_values(system, u.r)
    p_vals = [_poly_values(system, p) for p in system.defpolys]
    g_sum = {k: sum(u.f[j][k] * p_vals[j][k] for j in range(system.m)) for k in range(len(system.spectral))}
    f = tuple(
        {k: r_vals[k] * u.f[j][k] + s_vals[k] * t.f[j][k] + t.f[j][k] * g_sum[k] for k in g_sum}
        for j in range(system.m)
    )
    return Triple(system, t.r * u.r, f)


def triple_sharp(t: Triple) -> Triple:
    """``(r#, conj f_1, ..., conj f_m)``."""
    return Triple(t.system, t.r.sharp(), tuple({k: v.conjugate() for k, v in fj.items()} for fj in t.f))


def psi_apply(system: EmbeddingSystem, t: Triple) -> KreinOperator:
    """``r(A, B) + sum_k Xi_k(int f_k dE_k)``."""
    matrix = mat_subst(t.r, system.A, system.B, tol=system.tolerances.commute)
    for k in range(system.m):
        matrix = matrix + system.xi_j(integrate_j(system, t.f[k], k), k)
    return system.space.operator(matrix)


# ---------------------------------------------------------------------------
# Decomposition of a function
# ---------------------------------------------------------------------------


def decompose(phi: CalcFunction) -> Triple:
    """The canonical triple with ``Psi(decompose(phi)) = phi(N)``.

    ``r`` interpolates the cosets of *phi*; every ``f_j`` equals
    ``(phi - r) / sum_k p_k`` off the real variety and vanishes on it.
    """
    system = phi.system
    targets = {pt: (phi.real_cosets[pt.key], "A") for pt in system.real_points}
    targets.update({pt: (phi.nonreal_cosets[pt.key], "B") for pt in system.nonreal_points})
    r = crt_interpolate(targets)

    scale = max(1.0, phi.scale)
    quotient: SpectralFunction = {k: 0j for k in range(len(system.spectral))}
    for k in system.off_real_indices():
        z = system.spectral.eigenvalues[k]
        total = system.sum_at(z)
        if abs(total) <= system.tolerances.denominator * scale:
            raise VanishingDenominator("sum of the definitizing polynomials vanishes", point=z)
        quotient[k] = (phi.scalar_values[k] - r.eval_complex(z)) / total
    logger.debug("decomposed function: r = %s", r)
    return Triple(system, r, tuple(dict(quotient) for _ in range(system.m)))


def phi_of_N(phi: CalcFunction) -> KreinOperator:
    """The calculus: ``Psi(decompose(phi))``."""
    return psi_apply(phi.system, decompose(phi))


def is_decomposition(phi: CalcFunction, t: Triple, tol: float | None = None) -> CheckReport:
    """Check that *t* represents *phi*.

    Off the real variety ``phi(z) = r(z) + sum_j f_j(z) p_j(z)``; on real
    spectral points every ``f_j`` vanishes; at each variety point the coset
    of ``r`` equals the value of *phi*.
    """
    system = phi.system
    tol = system.tolerances.calculus if tol is None else tol
    eigenvalues = system.spectral.eigenvalues
    terms: dict[int, list[complex]] = {
        k: [t.r.eval_complex(z)] + [t.f[j][k] * p.eval_complex(z) for j, p in enumerate(system.defpolys)]
        for k, z in enumerate(eigenvalues)
        if system.real_point_at(k) is None
    }
    r_cosets = {
        pt.key: (pt.algebra_A if pt.is_real else pt.algebra_B).coset(t.r) for pt in system.points
    }
    # phi.scale already covers ||N||, sup |phi| and the cosets of phi
    scale = max(
        phi.scale,
        max((abs(v) for values in terms.values() for v in values), default=0.0),
        max((c.max_abs() for c in r_cosets.values()), default=0.0),
    )
    report = CheckReport("decomposition")
    for k, z in enumerate(eigenvalues):
        if k in terms:
            report.add("scalar_values", abs(phi.scalar_values[k] - sum(terms[k])) / scale, tol, f"z={z:.6g}")
        else:
            worst = max((abs(fj[k]) for fj in t.f), default=0.0)
            report.add("vanishes_on_real_variety", worst / scale, tol, f"z={z:.6g}")
    for pt in system.points:
        diff = r_cosets[pt.key] - phi.coset_at(pt)
        report.add("local_values", diff.max_abs() / scale, tol, str(pt))
    return report


# ---------------------------------------------------------------------------
# The ideal of null triples
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NullMembership:
    member: bool
    reason: str = ""
    witnesses: tuple[Poly2, ...] = ()
    residual: float = 0.0

    def __bool__(self) -> bool:
        return self.member


def _snap(value: complex, system: EmbeddingSystem) -> GaussianRational | None:
    tol = system.tolerances
    return GaussianRational.snap(value, tol=tol.snap, max_denominator=tol.max_denominator)


def in_ideal_N(system: EmbeddingSystem, t: Triple, tol: float | None = None) -> NullMembership:
    """Decide whether *t* is a null triple and produce witnesses ``u_j``.

    The witnesses satisfy ``r = sum u_j p_j`` exactly and
    ``f_j(w) + u_j(w) = 0`` at the real variety points in the spectrum.
    """
    tol = system.tolerances.calculus if tol is None else tol
    scale = max(1.0, system.scale, max((abs(v) for fj in t.f for v in fj.values()), default=0.0))

    worst = 0.0
    for k in system.off_real_indices():
        z = system.spectral.eigenvalues[k]
        value = t.r.eval_complex(z) + sum(t.f[j][k] * p.eval_complex(z) for j, p in enumerate(system.defpolys))
        magnitude = max(1.0, poly_magnitude(t.r, z))
        worst = max(worst, abs(value) / max(scale, magnitude))
    if worst > tol:
        return NullMembership(False, "r + sum f_k p_k does not vanish off the real variety", residual=worst)

    r = t.r
    if not r.is_exact():
        terms = {}
        for m, c in r.items():
            snapped = _snap(complex(c), system)
            if snapped is None:
                return NullMembership(False, f"coefficient {c} of r is not a Gaussian rational")
            terms[m] = snapped
        r = Poly2(terms, r.variables)

    W = [pt for pt in system.real_points if system.spectral_index_of(pt) is not None]
    v = [Poly2.zero() for _ in range(system.m)]
    if W:
        interpolator = build_interpolator(
            [(pt.key, quotient_algebra(maximal_ideal(pt.key), point=pt.key, kind="B")) for pt in W]
        )
        for j in range(system.m):
            targets = {}
            for pt, algebra in zip(W, interpolator.moduli):
                snapped = _snap(-t.f[j][system.spectral_index_of(pt)], system)
                if snapped is None:
                    return NullMembership(False, f"f_{j + 1}({pt}) is not a Gaussian rational")
                targets[pt.key] = algebra.coset(Poly2.constant(snapped))
            v[j] = interpolator.interpolate(targets)

    remainder = r
    for vj, p in zip(v, system.defpolys):
        remainder = remainder - vj * p
    try:
        e = lift_membership(remainder, system.ideal, W, points=system.points)
    except MembershipFailed as exc:
        return NullMembership(False, str(exc))
    u = tuple(vj + ej for vj, ej in zip(v, e))

    # the snapped witnesses must reproduce f on W within tolerance
    for pt in W:
        k = system.spectral_index_of(pt)
        for j, uj in enumerate(u):
            gap = abs(t.f[j][k] + complex(uj.eval_exact(pt.coords)))
            if gap > tol * scale:
                return NullMembership(False, f"f_{j + 1} + u_{j + 1} does not vanish at {pt}", u, gap)
    return NullMembership(True, "", u, worst)


def null_triple(system: EmbeddingSystem, u: Sequence[Poly2]) -> Triple:
    """A member of the null ideal built from cofactors ``u_j``.

    ``r = sum u_j p_j``; off the real variety ``f_j = -r / sum p``; at real
    spectral points ``f_j = -u_j``.
    """
    if len(u) != system.m:
        raise DimensionMismatch(f"need {system.m} cofactors, got {len(u)}")
    r = Poly2.zero()
    for uj, p in zip(u, system.defpolys):
        r = r + uj * p
    f: list[SpectralFunction] = [dict() for _ in range(system.m)]
    for k, z in enumerate(system.spectral.eigenvalues):
        point = system.real_point_at(k)
        for j in range(system.m):
            if point is None:
                f[j][k] = -r.eval_complex(z) / system.sum_at(z)
            else:
                f[j][k] = -complex(u[j].eval_exact(point.coords))
    return Triple(system, r, tuple(f))


def random_null_triple(system: EmbeddingSystem, rng: np.random.Generator, *, degree: int = 2) -> Triple:
    from kreincalc.utils.sampling import random_poly

    return null_triple(system, [random_poly(rng, degree) for _ in range(system.m)])


def random_triple(system: EmbeddingSystem, rng: np.random.Generator, *, degree: int = 2) -> Triple:
    from kreincalc.utils.sampling import random_complex, random_poly

    f = tuple({k: random_complex(rng) for k in range(len(system.spectral))} for _ in range(system.m))
    return Triple(system, random_poly(rng, degree), f)
