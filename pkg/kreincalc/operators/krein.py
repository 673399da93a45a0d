"""Finite-dimensional Krein spaces and their operators.

A Krein space here is ``C^n`` with an invertible Hermitian Gram matrix
``J``; the indefinite inner product is ``[u, v] = v* J u`` and the Krein
adjoint of ``C`` is ``J^-1 C* J``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from kreincalc.algebra.poly2 import Poly2, mat_subst
from kreincalc.config import Tolerances
from kreincalc.errors import (
    DimensionMismatch,
    InvalidGram,
    NotDefinitizing,
    NotNormal,
    NotPSD,
    SingularOperator,
    ZeroPolynomial,
)

logger = logging.getLogger(__name__)


def opnorm(M: np.ndarray) -> float:
    """Spectral norm; 0 for empty matrices."""
    return float(np.linalg.norm(M, 2)) if M.size else 0.0


@dataclass(frozen=True, eq=False)
class KreinSpace:
    gram: np.ndarray
    gram_inv: np.ndarray = field(repr=False)
    condition: float = 1.0

    @classmethod
    def from_gram(cls, gram: np.ndarray, tol: float = 1e-12) -> KreinSpace:
        J = np.asarray(gram, dtype=complex)
        if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] == 0:
            raise InvalidGram(f"Gram matrix must be square and nonempty, got shape {J.shape}")
        scale = opnorm(J)
        if opnorm(J - J.conj().T) > tol * max(scale, 1.0):
            raise InvalidGram("Gram matrix is not Hermitian")
        singular = scipy.linalg.svdvals(J)
        if singular[-1] <= tol * singular[0]:
            raise InvalidGram(f"Gram matrix is singular (smallest singular value {singular[-1]:.3e})")
        return cls(J, np.linalg.inv(J), float(singular[0] / singular[-1]))

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def inner(self, u: np.ndarray, v: np.ndarray) -> complex:
        """``[u, v] = v* J u``."""
        return complex(np.vdot(v, self.gram @ u))

    def operator(self, matrix: np.ndarray) -> KreinOperator:
        M = np.asarray(matrix, dtype=complex)
        if M.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"operator of shape {M.shape} on a space of dimension {self.dim}")
        return KreinOperator(self, M)

    def identity(self) -> KreinOperator:
        return KreinOperator(self, np.eye(self.dim, dtype=complex))


@dataclass(frozen=True, eq=False)
class KreinOperator:
    space: KreinSpace
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.space.dim

    def adjoint(self) -> KreinOperator:
        return adjoint(self)

    def norm(self) -> float:
        return opnorm(self.matrix)

    def _check(self, other: KreinOperator) -> None:
        if other.space is not self.space and not np.array_equal(other.space.gram, self.space.gram):
            raise DimensionMismatch("operators act on different Krein spaces")

    def __add__(self, other: KreinOperator) -> KreinOperator:
        self._check(other)
        return KreinOperator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: KreinOperator) -> KreinOperator:
        self._check(other)
        return KreinOperator(self.space, self.matrix - other.matrix)

    def __matmul__(self, other: KreinOperator) -> KreinOperator:
        self._check(other)
        return KreinOperator(self.space, self.matrix @ other.matrix)

    def scale(self, c: complex) -> KreinOperator:
        return KreinOperator(self.space, c * self.matrix)

    def inverse(self, margin: float = 1e-10) -> KreinOperator:
        eigenvalues = np.linalg.eigvals(self.matrix)
        smallest = float(np.min(np.abs(eigenvalues)))
        if smallest <= margin * max(1.0, self.norm()):
            raise SingularOperator(f"operator has an eigenvalue within {smallest:.3e} of 0")
        return KreinOperator(self.space, np.linalg.inv(self.matrix))


def adjoint(C: KreinOperator) -> KreinOperator:
    """Krein adjoint ``J^-1 C* J``."""
    space = C.space
    return KreinOperator(space, space.gram_inv @ C.matrix.conj().T @ space.gram)


def real_imag(N: KreinOperator) -> tuple[np.ndarray, np.ndarray]:
    """``A = (N + N+)/2`` and ``B = (N - N+)/(2i)``."""
    Np = adjoint(N).matrix
    return (N.matrix + Np) / 2, (N.matrix - Np) / 2j


def normality_residual(N: KreinOperator) -> float:
    """Relative commutator ``||AB - BA|| / (||A|| ||B||)`` (0 when A or B vanishes)."""
    A, B = real_imag(N)
    scale = opnorm(A) * opnorm(B)
    if scale == 0.0:
        return 0.0
    return opnorm(A @ B - B @ A) / scale


def is_normal(N: KreinOperator, tol: float = 1e-10) -> bool:
    return normality_residual(N) <= tol


def require_normal(N: KreinOperator, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    residual = normality_residual(N)
    if residual > tol:
        raise NotNormal(f"operator is not normal: relative ||AB - BA|| = {residual:.3e} > {tol:.1e}")
    return real_imag(N)


@dataclass(frozen=True)
class DefinitizingResult:
    """Outcome of the definitizing test for one polynomial.

    ``eigenvalues`` are those of the Hermitian part of ``J p(A, B)`` and
    serve as the certificate.  For a non-real ``p`` the real part
    ``(p + p#)/2`` is reported together with ``||q(A,B) - p(A,B)||``.
    """

    polynomial: Poly2
    ok: bool
    eigenvalues: tuple[float, ...]
    hermitian_residual: float
    min_eigenvalue: float
    scale: float
    real_part: Poly2 | None = None
    real_part_residual: float = 0.0
    message: str = ""

    def raise_for_failure(self, index: int | None = None) -> None:
        if not self.ok:
            raise NotDefinitizing(self.message, index=index, min_eigenvalue=self.min_eigenvalue)


def evaluation_scale(p: Poly2, A: np.ndarray, B: np.ndarray, J: np.ndarray) -> float:
    """``||J|| sum |c_ij| ||A||^i ||B||^j``, at least 1.

    Bounds the terms summed in ``J p(A, B)`` and so stays put when they cancel.
    """
    norm_a, norm_b = opnorm(A), opnorm(B)
    terms = sum(abs(complex(c)) * norm_a**i * norm_b**j for (i, j), c in p.items())
    return max(1.0, opnorm(J) * terms)


def is_definitizing(p: Poly2, N: KreinOperator, tolerances: Tolerances | None = None) -> DefinitizingResult:
    """Is ``J p(A, B)`` Hermitian positive semidefinite?

    Residuals are measured against ``evaluation_scale``: ``J p(A, B)`` may
    vanish up to rounding, and its own norm would then accept nothing.
    """
    tolerances = tolerances or Tolerances()
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial is not a definitizing candidate")
    A, B = require_normal(N, tolerances.normal)
    P = mat_subst(p, A, B, tol=tolerances.commute)
    G = N.space.gram @ P
    scale = max(opnorm(G), evaluation_scale(p, A, B, N.space.gram))
    herm_residual = opnorm(G - G.conj().T)
    eigenvalues = scipy.linalg.eigh((G + G.conj().T) / 2, eigvals_only=True)
    min_eig = float(eigenvalues[0]) if len(eigenvalues) else 0.0

    real_part = None
    real_residual = 0.0
    if not p.is_real():
        real_part = p.real_part()
        real_residual = opnorm(mat_subst(real_part, A, B, tol=tolerances.commute) - P)

    message = ""
    if herm_residual > tolerances.hermitian * scale:
        message = f"J*{p}(A,B) is not Hermitian (residual {herm_residual:.3e})"
    elif min_eig < -tolerances.psd * scale:
        message = f"J*{p}(A,B) has negative eigenvalue {min_eig:.6g}"
    logger.debug("definitizing test for %s: min eigenvalue %.3e, scale %.3e", p, min_eig, scale)
    return DefinitizingResult(
        polynomial=p,
        ok=not message,
        eigenvalues=tuple(float(v) for v in eigenvalues),
        hermitian_residual=herm_residual,
        min_eigenvalue=min_eig,
        scale=scale,
        real_part=real_part,
        real_part_residual=real_residual,
        message=message,
    )


def psd_factor(G: np.ndarray, tol: float = 1e-9, *, scale: float | None = None) -> tuple[np.ndarray, int]:
    """Factor a Hermitian PSD matrix as ``G = S* S`` with ``S`` of full row rank.

    Eigenvalues at or below ``tol * scale`` count as zero; *scale* defaults
    to ``||G||`` and should be passed when ``G`` is a sum that may cancel.
    Rows are ordered by decreasing eigenvalue; each eigenvector is rotated so
    that its largest entry is real and positive, which makes the factor
    deterministic.
    """
    G = np.asarray(G, dtype=complex)
    n = G.shape[0]
    norm = opnorm(G)
    scale = norm if scale is None else max(scale, norm)
    if opnorm(G - G.conj().T) > tol * max(scale, 1.0):
        raise NotPSD("matrix is not Hermitian")
    if norm == 0.0:
        return np.zeros((0, n), dtype=complex), 0
    w, V = scipy.linalg.eigh((G + G.conj().T) / 2)
    if w[0] < -tol * scale:
        raise NotPSD(f"matrix has negative eigenvalue {w[0]:.6g}")
    keep = [k for k in range(n - 1, -1, -1) if w[k] > tol * scale]
    rows = []
    for k in keep:
        v = V[:, k]
        pivot = v[int(np.argmax(np.abs(v)))]
        v = v * (abs(pivot) / pivot)
        rows.append(np.sqrt(w[k]) * v.conj())
    S = np.array(rows, dtype=complex).reshape(len(keep), n)
    return S, len(keep)
