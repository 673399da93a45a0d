"""Spectral consequences of the calculus: Riesz projections, the effective set and sigma(N)."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from kreincalc.algebra.groebner import Point
from kreincalc.algebra.variety import VarietyPoint
from kreincalc.calculus.functions import unit_delta
from kreincalc.calculus.triples import phi_of_N
from kreincalc.checks import CheckReport
from kreincalc.operators.embeddings import EmbeddingSystem
from kreincalc.utils.clustering import cluster_values

logger = logging.getLogger(__name__)


def spectrum_of(system: EmbeddingSystem) -> list[complex]:
    """Distinct eigenvalues of ``N``.

    Eigenvalues of a Jordan block split by roughly ``eps^(1/k)``; they are
    grouped with the loose ``eigen_cluster_radius`` and represented by the
    cluster centroid, which is accurate to rounding.
    """
    radius = system.tolerances.eigen_cluster_radius * system.scale
    return [c.centroid for c in cluster_values(np.linalg.eigvals(system.N.matrix), radius)]


def _in_set(z: complex, values: list[complex], tol: float) -> bool:
    return any(abs(z - v) <= tol for v in values)


def _conjugate_image(point: VarietyPoint) -> complex:
    xi, eta = complex(point.coords[0]), complex(point.coords[1])
    return xi.conjugate() + 1j * eta.conjugate()


@dataclass(frozen=True)
class EffectiveSet:
    """The points on which ``phi(N)`` actually depends."""

    spectral_indices: tuple[int, ...]
    real_keys: frozenset[Point]
    nonreal_keys: frozenset[Point]

    def __contains__(self, key: object) -> bool:
        return key in self.real_keys or key in self.nonreal_keys


def effective_set(system: EmbeddingSystem) -> EffectiveSet:
    """sigma(Theta(N)), the real variety points in sigma(N) and the nonreal points
    ``(a, b)`` with both ``a + ib`` and ``conj a + i conj b`` in sigma(N)."""
    sigma = spectrum_of(system)
    tol = system.tolerances.spectrum_match * system.scale
    real = frozenset(
        pt.key
        for pt in system.real_points
        if system.spectral_index_of(pt) is not None or _in_set(pt.image, sigma, tol)
    )
    nonreal = frozenset(
        pt.key
        for pt in system.nonreal_points
        if _in_set(pt.image, sigma, tol) and _in_set(_conjugate_image(pt), sigma, tol)
    )
    return EffectiveSet(tuple(range(len(system.spectral))), real, nonreal)


def riesz_projection(system: EmbeddingSystem, point: Point | VarietyPoint) -> np.ndarray:
    """``(e delta_zeta)(N)``."""
    return phi_of_N(unit_delta(system, point)).matrix


def _range_basis(P: np.ndarray, tol: float) -> np.ndarray:
    if not P.size:
        return np.zeros((0, 0), dtype=complex)
    U, s, _ = scipy.linalg.svd(P)
    rank = int(np.sum(s > tol * max(1.0, s[0] if len(s) else 0.0)))
    return U[:, :rank]


def riesz_check(system: EmbeddingSystem, point: VarietyPoint) -> CheckReport:
    """Idempotence, commutation with N and the restricted spectrum of one Riesz projection."""
    tol = system.tolerances.calculus
    report = CheckReport(f"Riesz projection at {point}")
    N = system.N.matrix
    P = riesz_projection(system, point)
    report.add_matrix("riesz_idempotent", P @ P, P, tol, str(point))
    report.add_matrix("riesz_commutes_with_N", P @ N, N @ P, tol, str(point))
    Q = _range_basis(P, system.tolerances.rank)
    if Q.shape[1]:
        restricted = np.linalg.eigvals(Q.conj().T @ N @ Q)
        spread = float(np.max(np.abs(restricted - point.image)))
        report.add(
            "riesz_restricted_spectrum",
            spread / system.scale,
            system.tolerances.eigen_cluster_radius,
            f"{point}: rank {Q.shape[1]}",
        )
    return report


def spectrum_formula_check(system: EmbeddingSystem) -> CheckReport:
    """sigma(N) against sigma(Theta(N)), the real variety points in sigma(N) and the
    nonreal variety images whose conjugate partners are in sigma(N) too."""
    tol = system.tolerances.spectrum_match * system.scale
    report = CheckReport("spectrum of N")
    sigma = spectrum_of(system)
    theta = list(system.spectral.eigenvalues)
    formula = list(theta)
    formula += [pt.image for pt in system.real_points if _in_set(pt.image, sigma, tol)]
    formula += [
        pt.image
        for pt in system.nonreal_points
        if _in_set(pt.image, sigma, tol) and _in_set(_conjugate_image(pt), sigma, tol)
    ]
    formula = [c.centroid for c in cluster_values(formula, tol)]

    for z in theta:
        report.flag("theta_spectrum_in_spectrum", _in_set(z, sigma, tol), f"z={z:.6g}")
    for z in sigma:
        report.flag("spectrum_covered_by_formula", _in_set(z, formula, tol), f"z={z:.6g}")
    for z in formula:
        report.flag("formula_in_spectrum", _in_set(z, sigma, tol), f"z={z:.6g}")
    outside = [z for z in sigma if not _in_set(z, theta, tol)]
    logger.debug("sigma(N) = %s; %d point(s) outside sigma(Theta(N))", sigma, len(outside))
    return report
