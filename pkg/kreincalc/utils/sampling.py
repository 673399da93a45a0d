"""Seeded random objects for the verification suites."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from scipy.stats import unitary_group

from kreincalc.algebra.gaussian import GaussianRational
from kreincalc.algebra.poly2 import Poly2


def make_rng(seed: int | None) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_gaussian_integer(rng: np.random.Generator, bound: int = 3) -> GaussianRational:
    return GaussianRational(
        Fraction(int(rng.integers(-bound, bound + 1))),
        Fraction(int(rng.integers(-bound, bound + 1))),
    )


def random_poly(
    rng: np.random.Generator,
    degree: int = 2,
    *,
    variables: str = "xy",
    bound: int = 3,
    real: bool = False,
) -> Poly2:
    """Exact polynomial of total degree at most *degree* with small coefficients."""
    terms = {}
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            c = random_gaussian_integer(rng, bound)
            if real:
                c = GaussianRational(c.re)
            terms[(i, j)] = c
    return Poly2(terms, variables)


def random_complex(rng: np.random.Generator, size: int | None = None, scale: float = 1.0):
    if size is None:
        return complex(rng.normal() * scale, rng.normal() * scale)
    return (rng.normal(size=size) + 1j * rng.normal(size=size)) * scale


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary, ``n >= 2``."""
    return unitary_group.rvs(n, random_state=rng)
