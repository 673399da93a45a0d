"""Hilbert-space embeddings of a definitizable normal operator.

For every definitizing polynomial ``p_j`` the Gram-weighted operator
``J p_j(A, B)`` is factored as ``S_j* S_j``; ``T_j = J^-1 S_j*`` then maps the
Hilbert space ``H_j = C^{r_j}`` into the Krein space with ``T_j+ = S_j`` and
``T_j T_j+ = p_j(A, B)``.  ``T`` is built the same way from ``sum_k p_k(A, B)``
and the contractions ``R_j`` satisfy ``T R_j = T_j``.

The transfer maps are

* ``theta(C)   = T^-1 C T``        (operators commuting with ``T T+``),
* ``theta_j(C) = T_j^-1 C T_j``,
* ``gamma_j(D) = R_j^-1 D R_j``,
* ``xi(D)      = T D T+``, ``xi_j(D) = T_j D T_j+``, ``lambda_j(D) = R_j D R_j*``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
import scipy.linalg

from kreincalc.algebra.groebner import IdealData, groebner
from kreincalc.algebra.poly2 import Poly2, mat_subst
from kreincalc.algebra.variety import VarietyPoint, variety
from kreincalc.checks import CheckReport
from kreincalc.config import Tolerances
from kreincalc.errors import DimensionMismatch, ResidualTooLarge, VariableTagError
from kreincalc.operators.krein import (
    DefinitizingResult,
    KreinOperator,
    KreinSpace,
    adjoint,
    is_definitizing,
    opnorm,
    psd_factor,
    require_normal,
)
from kreincalc.operators.spectral import SpectralData, spectral_decomposition
from kreincalc.utils.clustering import match_index
from kreincalc.utils.sampling import make_rng, random_poly

logger = logging.getLogger(__name__)


def _pinv(M: np.ndarray) -> np.ndarray:
    if M.size == 0:
        return np.zeros((M.shape[1], M.shape[0]), dtype=complex)
    return scipy.linalg.pinv(M)


def _as_matrix(C: KreinOperator | np.ndarray) -> np.ndarray:
    return C.matrix if isinstance(C, KreinOperator) else np.asarray(C, dtype=complex)


@dataclass(frozen=True, eq=False)
class EmbeddingSystem:
    space: KreinSpace
    N: KreinOperator
    A: np.ndarray
    B: np.ndarray
    defpolys: tuple[Poly2, ...]
    ideal: IdealData
    Tj: tuple[np.ndarray, ...]
    Sj: tuple[np.ndarray, ...]
    T: np.ndarray
    S: np.ndarray
    Rj: tuple[np.ndarray, ...]
    definitizing: tuple[DefinitizingResult, ...] = ()
    tolerances: Tolerances = field(default_factory=Tolerances)

    # -- shape ------------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.defpolys)

    @property
    def Hdim(self) -> int:
        return self.T.shape[1]

    @property
    def Hjdims(self) -> tuple[int, ...]:
        return tuple(t.shape[1] for t in self.Tj)

    @cached_property
    def scale(self) -> float:
        return max(1.0, self.N.norm())

    @cached_property
    def Nplus(self) -> KreinOperator:
        return adjoint(self.N)

    @cached_property
    def RRstar(self) -> tuple[np.ndarray, ...]:
        return tuple(R @ R.conj().T for R in self.Rj)

    @cached_property
    def TplusT(self) -> np.ndarray:
        return self.S @ self.T

    @cached_property
    def polys_at_AB(self) -> tuple[np.ndarray, ...]:
        return tuple(mat_subst(p, self.A, self.B, tol=self.tolerances.commute) for p in self.defpolys)

    # -- transfer maps ----------------------------------------------------

    def _compress(self, C: KreinOperator | np.ndarray, T: np.ndarray, what: str) -> np.ndarray:
        M = _as_matrix(C)
        if M.shape != (self.space.dim, self.space.dim):
            raise DimensionMismatch(f"{what} expects a {self.space.dim}x{self.space.dim} operator")
        D = _pinv(T) @ M @ T
        residual = opnorm(T @ D - M @ T)
        bound = self.tolerances.theta_residual * max(opnorm(M) * opnorm(T), 1e-300)
        if residual > bound and residual > 0.0:
            raise ResidualTooLarge(f"{what}: operator does not leave the range invariant", residual=residual, tolerance=bound)
        return D

    def theta(self, C: KreinOperator | np.ndarray) -> np.ndarray:
        return self._compress(C, self.T, "theta")

    def theta_j(self, C: KreinOperator | np.ndarray, j: int) -> np.ndarray:
        return self._compress(C, self.Tj[j], f"theta_{j + 1}")

    def gamma_j(self, D: np.ndarray, j: int) -> np.ndarray:
        R = self.Rj[j]
        if D.shape != (self.Hdim, self.Hdim):
            raise DimensionMismatch(f"gamma_{j + 1} expects a {self.Hdim}x{self.Hdim} operator")
        Dj = _pinv(R) @ D @ R
        residual = opnorm(R @ Dj - D @ R)
        bound = self.tolerances.theta_residual * max(opnorm(D) * opnorm(R), 1.0)
        if residual > bound:
            raise ResidualTooLarge(f"gamma_{j + 1}: range of R_j is not invariant", residual=residual, tolerance=bound)
        return Dj

    def xi(self, D: np.ndarray) -> np.ndarray:
        if D.shape != (self.Hdim, self.Hdim):
            raise DimensionMismatch(f"xi expects a {self.Hdim}x{self.Hdim} operator")
        return self.T @ D @ self.S

    def xi_j(self, D: np.ndarray, j: int) -> np.ndarray:
        r = self.Hjdims[j]
        if D.shape != (r, r):
            raise DimensionMismatch(f"xi_{j + 1} expects a {r}x{r} operator")
        return self.Tj[j] @ D @ self.Sj[j]

    def lambda_j(self, D: np.ndarray, j: int) -> np.ndarray:
        r = self.Hjdims[j]
        if D.shape != (r, r):
            raise DimensionMismatch(f"lambda_{j + 1} expects a {r}x{r} operator")
        return self.Rj[j] @ D @ self.Rj[j].conj().T

    # -- spectral data ----------------------------------------------------

    @cached_property
    def theta_N(self) -> np.ndarray:
        return self.theta(self.N)

    @cached_property
    def theta_j_N(self) -> tuple[np.ndarray, ...]:
        return tuple(self.theta_j(self.N, j) for j in range(self.m))

    @cached_property
    def spectral(self) -> SpectralData:
        return spectral_decomposition(self.theta_N, self.tolerances)

    @cached_property
    def spectral_j(self) -> tuple[SpectralData, ...]:
        return tuple(spectral_decomposition(M, self.tolerances) for M in self.theta_j_N)

    @cached_property
    def index_map_j(self) -> tuple[dict[int, int | None], ...]:
        """For each j, cluster index in sigma(Theta_j(N)) -> cluster index in sigma(Theta(N))."""
        tol = self.tolerances.spectrum_match * self.scale
        maps = []
        for Ej in self.spectral_j:
            maps.append({i: match_index(z, self.spectral.eigenvalues, tol) for i, z in enumerate(Ej.eigenvalues)})
        return tuple(maps)

    # -- variety ----------------------------------------------------------

    @cached_property
    def points(self) -> tuple[VarietyPoint, ...]:
        return tuple(variety(self.ideal, self.tolerances))

    @property
    def real_points(self) -> tuple[VarietyPoint, ...]:
        return tuple(p for p in self.points if p.is_real)

    @property
    def nonreal_points(self) -> tuple[VarietyPoint, ...]:
        return tuple(p for p in self.points if not p.is_real)

    @cached_property
    def _real_point_by_index(self) -> dict[int, VarietyPoint | None]:
        images = [p.image for p in self.real_points]
        tol = self.tolerances.point_match * self.scale
        out: dict[int, VarietyPoint | None] = {}
        for k, z in enumerate(self.spectral.eigenvalues):
            hit = match_index(z, images, tol)
            out[k] = None if hit is None else self.real_points[hit]
        return out

    def real_point_at(self, k: int) -> VarietyPoint | None:
        """The real variety point whose image is the k-th eigenvalue of Theta(N), if any."""
        return self._real_point_by_index[k]

    def spectral_index_of(self, point: VarietyPoint) -> int | None:
        for k, hit in self._real_point_by_index.items():
            if hit is point:
                return k
        return None

    def off_real_indices(self) -> list[int]:
        return [k for k in range(len(self.spectral)) if self.real_point_at(k) is None]

    def sum_at(self, z: complex) -> complex:
        return sum((p.eval_complex(z) for p in self.defpolys), 0j)

    def sum_ratios(self) -> list[dict[int, complex]]:
        """``p_j(z) / sum_k p_k(z)`` at the eigenvalues of Theta(N) off the real variety."""
        out: list[dict[int, complex]] = [{} for _ in range(self.m)]
        for k in self.off_real_indices():
            z = self.spectral.eigenvalues[k]
            total = self.sum_at(z)
            for j, p in enumerate(self.defpolys):
                out[j][k] = p.eval_complex(z) / total
        return out


def build_embedding(
    N: KreinOperator,
    defpolys: Sequence[Poly2],
    tolerances: Tolerances | None = None,
) -> EmbeddingSystem:
    """Verify every polynomial and factor ``T_j``, ``T`` and ``R_j``."""
    tolerances = tolerances or Tolerances()
    if not defpolys:
        raise ValueError("at least one definitizing polynomial is required")
    for p in defpolys:
        if p.variables != "xy":
            raise VariableTagError("definitizing polynomials live in (x, y)")
    A, B = require_normal(N, tolerances.normal)
    results = []
    for j, p in enumerate(defpolys):
        result = is_definitizing(p, N, tolerances)
        result.raise_for_failure(index=j)
        results.append(result)

    J = N.space.gram
    J_inv = N.space.gram_inv
    P = [mat_subst(p, A, B, tol=tolerances.commute) for p in defpolys]
    Sj: list[np.ndarray] = []
    Tj: list[np.ndarray] = []
    for Pj, result in zip(P, results):
        S_, _ = psd_factor(J @ Pj, tolerances.rank, scale=result.scale)
        Sj.append(S_)
        Tj.append(J_inv @ S_.conj().T)
    S, r = psd_factor(J @ sum(P), tolerances.rank, scale=sum(res.scale for res in results))
    T = J_inv @ S.conj().T

    S_pinv = _pinv(S)
    Rj: list[np.ndarray] = []
    for j, S_ in enumerate(Sj):
        R_star = S_ @ S_pinv
        residual = opnorm(R_star @ S - S_)
        bound = tolerances.theta_residual * max(opnorm(S_), 1.0)
        if residual > bound:
            raise ResidualTooLarge(f"R_{j + 1} does not solve R* T+ = T_j+", residual=residual, tolerance=bound)
        Rj.append(R_star.conj().T)

    logger.debug("embedding: H dim %d, H_j dims %s", r, [t.shape[1] for t in Tj])
    return EmbeddingSystem(
        space=N.space,
        N=N,
        A=A,
        B=B,
        defpolys=tuple(defpolys),
        ideal=groebner(defpolys),
        Tj=tuple(Tj),
        Sj=tuple(Sj),
        T=T,
        S=S,
        Rj=tuple(Rj),
        definitizing=tuple(results),
        tolerances=tolerances,
    )


def invariant_check(system: EmbeddingSystem) -> CheckReport:
    """The defining relations of the embedding system."""
    tol = system.tolerances.theta_residual
    report = CheckReport("embedding invariants")
    for j in range(system.m):
        report.add_matrix("Tj_Tjplus", system.Tj[j] @ system.Sj[j], system.polys_at_AB[j], tol, f"j={j + 1}")
        report.add_matrix("T_Rj", system.T @ system.Rj[j], system.Tj[j], tol, f"j={j + 1}")
        rank = np.linalg.matrix_rank(system.Tj[j]) if system.Tj[j].size else 0
        report.flag("Tj_injective", rank == system.Hjdims[j], f"j={j + 1}, rank {rank} of {system.Hjdims[j]}")
    report.add_matrix("T_Tplus", system.T @ system.S, sum(system.polys_at_AB), tol)
    rank = np.linalg.matrix_rank(system.T) if system.T.size else 0
    report.flag("T_injective", rank == system.Hdim, f"rank {rank} of {system.Hdim}")
    report.add_matrix("sum_Rk_Rkstar", sum(system.RRstar, np.zeros((system.Hdim, system.Hdim))), np.eye(system.Hdim), tol)
    return report


def _is_normal_matrix(M: np.ndarray) -> float:
    if M.size == 0:
        return 0.0
    return opnorm(M @ M.conj().T - M.conj().T @ M) / max(opnorm(M) ** 2, 1.0)


def verify_transfer_lemmas(system: EmbeddingSystem, samples: int = 3, seed: int = 0) -> CheckReport:
    """Evaluate the algebraic identities between the transfer maps.

    The operators ``C`` run over ``N``, ``N+`` and ``u(A, B)`` for random
    polynomials ``u``; each identity is reported with its worst residual.
    """
    tol = system.tolerances.calculus
    report = CheckReport("transfer maps")
    rng = make_rng(seed)
    us = [random_poly(rng, 2) for _ in range(samples)]
    operators: list[tuple[str, np.ndarray]] = [("N", system.N.matrix), ("N+", system.Nplus.matrix)]
    operators += [(f"u={u}", mat_subst(u, system.A, system.B, tol=system.tolerances.commute)) for u in us]

    theta_A, theta_B = system.theta(system.A), system.theta(system.B)
    sum_theta = sum(
        (mat_subst(p, theta_A, theta_B, tol=system.tolerances.commute) for p in system.defpolys),
        np.zeros((system.Hdim, system.Hdim), dtype=complex),
    )
    for j in range(system.m):
        RR = system.RRstar[j]
        R = system.Rj[j]
        for label, C in operators:
            th, thj = system.theta(C), system.theta_j(C, j)
            middle = R @ thj @ R.conj().T
            report.add_matrix("theta_compression_left", th @ RR, middle, tol, f"j={j + 1}, C={label}")
            report.add_matrix("theta_compression_right", middle, RR @ th, tol, f"j={j + 1}, C={label}")
            report.add_matrix("theta_j_via_gamma", thj, system.gamma_j(th, j), tol, f"j={j + 1}, C={label}")

        theta_P = system.theta(system.polys_at_AB[j])
        report.add_matrix("theta_of_Tj_Tjplus", theta_P, RR @ system.TplusT, tol, f"j={j + 1}")
        report.add_matrix("RRstar_commutes_TplusT", RR @ system.TplusT, system.TplusT @ RR, tol, f"j={j + 1}")

        pj_theta = mat_subst(system.defpolys[j], theta_A, theta_B, tol=system.tolerances.commute)
        report.add_matrix("pj_of_theta_left", pj_theta, RR @ sum_theta, tol, f"j={j + 1}")
        report.add_matrix("pj_of_theta_right", pj_theta, sum_theta @ RR, tol, f"j={j + 1}")

        thjA, thjB = system.theta_j(system.A, j), system.theta_j(system.B, j)
        for u in us:
            lhs = system.polys_at_AB[j] @ mat_subst(u, system.A, system.B, tol=system.tolerances.commute)
            via_j = system.xi_j(mat_subst(u, thjA, thjB, tol=system.tolerances.commute), j)
            via_theta = system.xi(RR @ mat_subst(u, theta_A, theta_B, tol=system.tolerances.commute))
            report.add_matrix("pj_u_via_xi_j", lhs, via_j, tol, f"j={j + 1}, u={u}")
            report.add_matrix("pj_u_via_xi", lhs, via_theta, tol, f"j={j + 1}, u={u}")

        r = system.Hjdims[j]
        D = rng.normal(size=(r, r)) + 1j * rng.normal(size=(r, r))
        report.add_matrix("xi_j_is_xi_lambda_j", system.xi_j(D, j), system.xi(system.lambda_j(D, j)), tol, f"j={j + 1}")
        report.add("theta_j_N_normal", _is_normal_matrix(system.theta_j_N[j]), system.tolerances.normal * 100, f"j={j + 1}")

    I_K = np.eye(system.space.dim, dtype=complex)
    report.add_matrix("theta_unital", system.theta(I_K), np.eye(system.Hdim), tol)
    N, Np = system.N.matrix, system.Nplus.matrix
    report.add_matrix("theta_multiplicative", system.theta(N @ Np), system.theta(N) @ system.theta(Np), tol)
    report.add_matrix("theta_adjoint", system.theta(Np), system.theta(N).conj().T, tol)
    report.add("theta_N_normal", _is_normal_matrix(system.theta_N), system.tolerances.normal * 100)

    for j in range(system.m):
        unmatched = [i for i, k in system.index_map_j[j].items() if k is None]
        report.flag(
            "spectrum_theta_j_in_theta",
            not unmatched,
            f"j={j + 1}, {len(unmatched)} eigenvalue(s) of Theta_j(N) outside sigma(Theta(N))",
        )
    return report
