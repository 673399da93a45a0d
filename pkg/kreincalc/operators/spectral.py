"""Spectral measures of normal Hilbert-space matrices.

A normal matrix ``M`` is diagonalised through its Hermitian parts: the
eigenspaces of ``Re M`` are computed first, ``Im M`` is then diagonalised on
each of them.  Eigenvalues closer than the cluster tolerance are merged and
their eigenvectors assembled into one orthogonal projection.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Mapping, Sequence

import numpy as np
import scipy.linalg

from kreincalc.algebra.poly2 import Poly2
from kreincalc.checks import CheckReport
from kreincalc.config import Tolerances
from kreincalc.errors import MissingValue, NotNormal
from kreincalc.operators.krein import opnorm
from kreincalc.utils.clustering import cluster_values, match_index

if TYPE_CHECKING:
    from kreincalc.operators.embeddings import EmbeddingSystem

logger = logging.getLogger(__name__)

ScalarFunction = Mapping[int, complex] | Callable[[complex], complex]


def poly_magnitude(p: Poly2, z: complex) -> float:
    """Crude bound for |p(z)|: coefficient magnitudes weighted by max(1, |z|)^degree."""
    r = max(1.0, abs(z))
    return sum(abs(complex(c)) * r ** (i + j) for (i, j), c in p.items())


@dataclass(frozen=True, eq=False)
class SpectralData:
    eigenvalues: tuple[complex, ...]
    projections: tuple[np.ndarray, ...]
    unitary: np.ndarray
    dim: int

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def index_of(self, z: complex, tol: float) -> int | None:
        return match_index(z, self.eigenvalues, tol)

    def measure(self, indices: Sequence[int]) -> np.ndarray:
        """``E(Delta)`` for the set of clustered eigenvalues with the given indices."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for k in indices:
            out = out + self.projections[k]
        return out

    def integrate(self, f: ScalarFunction) -> np.ndarray:
        return integrate(f, self)


def _value(f: ScalarFunction, k: int, z: complex) -> complex:
    if callable(f):
        return complex(f(z))
    try:
        return complex(f[k])
    except KeyError:
        raise MissingValue(f"function has no value at spectral point {z:.6g}") from None


def integrate(f: ScalarFunction, E: SpectralData) -> np.ndarray:
    """``sum f(lambda) P_lambda``; *f* is keyed by cluster index or callable on eigenvalues."""
    out = np.zeros((E.dim, E.dim), dtype=complex)
    for k, (z, P) in enumerate(zip(E.eigenvalues, E.projections)):
        out = out + _value(f, k, z) * P
    return out


def spectral_decomposition(M: np.ndarray, tolerances: Tolerances | None = None) -> SpectralData:
    tolerances = tolerances or Tolerances()
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    if n == 0:
        return SpectralData((), (), np.zeros((0, 0), dtype=complex), 0)
    scale = opnorm(M)
    residual = opnorm(M @ M.conj().T - M.conj().T @ M)
    if residual > tolerances.normal * max(scale * scale, 1.0):
        raise NotNormal(f"matrix is not normal: ||MM* - M*M|| = {residual:.3e}")

    radius = tolerances.cluster * max(1.0, scale)
    H1 = (M + M.conj().T) / 2
    H2 = (M - M.conj().T) / 2j
    w1, V1 = scipy.linalg.eigh(H1)

    values: list[complex] = []
    vectors: list[np.ndarray] = []
    for group in cluster_values(w1, radius):
        idx = list(group.members)
        Vg = V1[:, idx]
        w2, U2 = scipy.linalg.eigh(Vg.conj().T @ H2 @ Vg)
        Wg = Vg @ U2
        for k in range(len(idx)):
            values.append(complex(group.centroid.real, w2[k]))
            vectors.append(Wg[:, k])

    eigenvalues: list[complex] = []
    projections: list[np.ndarray] = []
    columns: list[np.ndarray] = []
    for cluster in cluster_values(values, radius):
        V = np.column_stack([vectors[k] for k in cluster.members])
        eigenvalues.append(cluster.centroid)
        projections.append(V @ V.conj().T)
        columns.append(V)
    unitary = np.column_stack(columns)
    logger.debug("spectral decomposition: %d distinct eigenvalues of %d", len(eigenvalues), n)
    return SpectralData(tuple(eigenvalues), tuple(projections), unitary, n)


def spectral_invariants(E: SpectralData, M: np.ndarray, tolerances: Tolerances | None = None) -> CheckReport:
    """Resolution of identity, orthogonality, idempotence and ``M = sum lambda P``."""
    tolerances = tolerances or Tolerances()
    report = CheckReport("spectral data")
    tol = tolerances.calculus
    report.add_matrix("resolution_of_identity", E.measure(range(len(E))), np.eye(E.dim), tol)
    report.add_matrix("reconstruction", integrate(lambda z: z, E), M, tol)
    for a, P in enumerate(E.projections):
        report.add_matrix("projection_idempotent", P @ P, P, tol)
        report.add_matrix("projection_hermitian", P.conj().T, P, tol)
        for b in range(a + 1, len(E)):
            report.add_matrix("projections_orthogonal", P @ E.projections[b], np.zeros_like(P), tol)
    return report


# ---------------------------------------------------------------------------
# Spectral identities of an embedding system
# ---------------------------------------------------------------------------


def integrate_j(system: EmbeddingSystem, f: ScalarFunction, j: int) -> np.ndarray:
    """``int f dE_j`` for *f* given on the clusters of the spectrum of Theta(N)."""
    Ej = system.spectral_j[j]
    index_map = system.index_map_j[j]
    if callable(f):
        return integrate(f, Ej)
    return integrate({k: _value(f, index_map[k], Ej.eigenvalues[k]) for k in range(len(Ej))}, Ej)


def off_real_variety(system: EmbeddingSystem) -> list[int]:
    """Indices of the eigenvalues of Theta(N) that are not images of real variety points."""
    return [k for k in range(len(system.spectral)) if system.real_point_at(k) is None]


def spectrum_sum_check(system: EmbeddingSystem) -> CheckReport:
    """Eigenvalues of Theta(N) versus the zeros of ``sum p_k``."""
    tol = system.tolerances
    report = CheckReport("definitizing polynomials on the spectrum of Theta(N)")
    for k, z in enumerate(system.spectral.eigenvalues):
        total = sum(p.eval_complex(z) for p in system.defpolys)
        magnitude = max(1.0, sum(poly_magnitude(p, z) for p in system.defpolys))
        for j, p in enumerate(system.defpolys):
            bound = opnorm(system.RRstar[j]) * abs(total)
            excess = max(0.0, abs(p.eval_complex(z)) - bound)
            report.add("bounded_by_sum", excess / magnitude, tol.calculus, f"z={z:.6g}, j={j + 1}")
        if abs(total) <= tol.calculus * magnitude:
            in_variety = system.real_point_at(k) is not None
            report.flag("zero_of_sum_in_real_variety", in_variety, f"z={z:.6g}")
    return report


def off_variety_measure_check(system: EmbeddingSystem, samples: int = 3, seed: int = 0) -> CheckReport:
    """Compressions ``R_j R_j* E(C minus real variety)`` and the split of ``Xi_j(int f dE_j)``."""
    tol = system.tolerances.calculus
    report = CheckReport("spectral measure off the real variety")
    E = system.spectral
    off = off_real_variety(system)
    on = [k for k in range(len(E)) if k not in off]
    ratios = system.sum_ratios()
    for j in range(system.m):
        lhs = system.RRstar[j] @ E.measure(off)
        rhs = integrate({k: ratios[j][k] if k in off else 0.0 for k in range(len(E))}, E)
        report.add_matrix("compression_off_real_variety", lhs, rhs, tol, f"j={j + 1}")

    rng = np.random.default_rng(seed)
    for _ in range(samples):
        f = {k: complex(rng.normal(), rng.normal()) for k in range(len(E))}
        for j in range(system.m):
            lhs = system.xi_j(integrate_j(system, f, j), j)
            off_part = integrate({k: f[k] * ratios[j][k] if k in off else 0.0 for k in range(len(E))}, E)
            on_part = system.RRstar[j] @ integrate({k: f[k] if k in on else 0.0 for k in range(len(E))}, E)
            report.add_matrix("xi_j_split", lhs, system.xi(off_part + on_part), tol, f"j={j + 1}")
    return report


def measure_transfer_check(system: EmbeddingSystem, samples: int = 3, seed: int = 0) -> CheckReport:
    """``Gamma_j`` carries the spectral measure of Theta(N) to that of Theta_j(N)."""
    tol = system.tolerances.calculus
    report = CheckReport("spectral measure transfer")
    E = system.spectral
    for j in range(system.m):
        Ej = system.spectral_j[j]
        index_map = system.index_map_j[j]
        for k in range(len(E)):
            lhs = system.gamma_j(E.projections[k], j)
            rhs = Ej.measure([i for i, target in index_map.items() if target == k])
            report.add_matrix("gamma_j_of_projection", lhs, rhs, tol, f"j={j + 1}, z={E.eigenvalues[k]:.6g}")

    rng = np.random.default_rng(seed)
    for _ in range(samples):
        h = {k: complex(rng.normal(), rng.normal()) for k in range(len(E))}
        for j in range(system.m):
            report.add_matrix(
                "gamma_j_of_integral",
                system.gamma_j(integrate(h, E), j),
                integrate_j(system, h, j),
                tol,
                f"j={j + 1}",
            )
            report.add_matrix(
                "xi_j_of_integral",
                system.xi_j(integrate_j(system, h, j), j),
                system.xi(system.RRstar[j] @ integrate(h, E)),
                tol,
                f"j={j + 1}",
            )
    return report
