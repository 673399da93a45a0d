"""Small dense linear algebra over the Gaussian rationals.

Matrices are plain ``list[list[GaussianRational]]`` (row-major).  Sizes in
this package are the dimensions of quotient algebras, so Gauss-Jordan
elimination with exact pivots is all that is needed.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from kreincalc.algebra.gaussian import ONE, ZERO, GaussianRational, Scalar
from kreincalc.errors import DimensionMismatch

Matrix = list[list[GaussianRational]]
Vector = list[GaussianRational]


def zeros(rows: int, cols: int) -> Matrix:
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[ONE if r == c else ZERO for c in range(n)] for r in range(n)]


def unit_vector(n: int, index: int) -> Vector:
    return [ONE if k == index else ZERO for k in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatch(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for r, row in enumerate(a):
        for k, v in enumerate(row):
            if v.is_zero():
                continue
            brow = b[k]
            target = out[r]
            for c in range(cols):
                if not brow[c].is_zero():
                    target[c] = target[c] + v * brow[c]
    return out


def matvec(a: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> list[Scalar]:
    """Matrix-vector product; float entries in *v* make the result numeric."""
    out: list[Scalar] = []
    for row in a:
        acc: Scalar = ZERO
        for coeff, x in zip(row, v):
            if isinstance(coeff, GaussianRational) and coeff.is_zero():
                continue
            acc = acc + coeff * x
        out.append(acc)
    return out


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    a = [list(row) for row in m]
    rows = len(a)
    cols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((k for k in range(r, rows) if not a[k][c].is_zero()), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = a[r][c].inverse()
        a[r] = [v * inv for v in a[r]]
        for k in range(rows):
            if k != r and not a[k][c].is_zero():
                factor = a[k][c]
                a[k] = [vk - factor * vr for vk, vr in zip(a[k], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def inverse(m: Matrix) -> Matrix | None:
    """Exact inverse of a square matrix, ``None`` when singular."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise DimensionMismatch("inverse needs a square matrix")
    augmented = [list(row) + unit for row, unit in zip(m, identity(n))]
    reduced, pivots = rref(augmented)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in reduced]


def solve(m: Matrix, b: Vector) -> Vector | None:
    """Solve ``m x = b`` for square nonsingular *m*; ``None`` when singular."""
    inv = inverse(m)
    if inv is None:
        return None
    return matvec(inv, b)  # type: ignore[return-value]


def solve_numeric(m: Matrix, b: Sequence[Scalar]) -> list[complex]:
    """Float solve used when the right-hand side carries inexact values."""
    a = np.array([[complex(v) for v in row] for row in m], dtype=complex)
    rhs = np.array([complex(v) for v in b], dtype=complex)
    return [complex(v) for v in np.linalg.solve(a, rhs)]


def to_numpy(m: Sequence[Sequence[Scalar]]) -> np.ndarray:
    if not m:
        return np.zeros((0, 0), dtype=complex)
    return np.array([[complex(v) for v in row] for row in m], dtype=complex)


def is_zero_vector(v: Sequence[Scalar], tol: float = 0.0) -> bool:
    for x in v:
        if isinstance(x, GaussianRational):
            if not x.is_zero():
                return False
        elif abs(x) > tol:
            return False
    return True
