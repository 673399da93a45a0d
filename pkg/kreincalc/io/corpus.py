"""Reference problems.

The fixed items are small hand-checked operators; ``random`` builds a
Krein space ``J = V* J0 V`` around a block-normal operator whose
definitizing polynomials are known by construction:

* a Hilbert block ``diag(lambda_k)`` with ``J0 = I``,
* neutral Jordan blocks ``a I + E`` with ``J0 = [[0, 1], [1, 0]]`` at real
  points ``a``,
* an optional negative block with ``J0 = -1`` sitting on the same points.

With ``p1 = prod (x - a_x)^2`` and ``p2 = prod (y - a_y)^2`` over the
distinct coordinates of the Jordan points, both polynomials vanish to second
order on the neutral blocks and are nonnegative on the Hilbert block, so
``J p_j(A, B)`` is positive semidefinite and ``<p1, p2>`` is
zero-dimensional.
"""

from __future__ import annotations

import logging
from typing import Callable

import numpy as np
import scipy.linalg

from kreincalc.errors import DimensionMismatch, UnknownCorpusItem
from kreincalc.io.problem import ProblemSpec
from kreincalc.utils.sampling import make_rng, random_unitary

logger = logging.getLogger(__name__)

_FLIP = np.array([[0, 1], [1, 0]], dtype=complex)
_E = np.array([[0, 1], [0, 0]], dtype=complex)


def _block_diag(*blocks: np.ndarray) -> np.ndarray:
    return scipy.linalg.block_diag(*[np.atleast_2d(np.asarray(b, dtype=complex)) for b in blocks])


def ex1() -> ProblemSpec:
    """Two-dimensional Jordan block at ``i`` in a neutral plane."""
    return ProblemSpec(
        name="ex1",
        gram=_FLIP.copy(),
        operator=1j * np.eye(2) + _E,
        definitizing=["x", "y - 1"],
        functions=[
            {"name": "identity", "kind": "poly", "poly": "x + i*y"},
            {"name": "riesz at i", "kind": "delta", "point": ["0", "1"]},
            {"name": "exp", "kind": "holomorphic", "expr": "exp(z)"},
        ],
    )


def ex2() -> ProblemSpec:
    """A positive eigenvalue 2 next to a neutral Jordan block at ``i``."""
    return ProblemSpec(
        name="ex2",
        gram=_block_diag(1, _FLIP),
        operator=_block_diag(2, 1j * np.eye(2) + _E),
        definitizing=["x^2", "y^2 - y"],
        functions=[
            {"name": "identity", "kind": "poly", "poly": "x + i*y"},
            {"name": "riesz at i", "kind": "delta", "point": ["0", "1"]},
            {"name": "riesz at 0", "kind": "delta", "point": ["0", "0"]},
            {"name": "resolvent at 1", "kind": "inverse", "of": {"kind": "poly", "poly": "x + i*y - 1"}},
        ],
    )


def ex3() -> ProblemSpec:
    """Hilbert space case: ``J = I`` and the constant polynomial 1."""
    return ProblemSpec(
        name="ex3",
        gram=np.eye(3, dtype=complex),
        operator=np.diag([1, 1j, -2]).astype(complex),
        definitizing=["1"],
        functions=[
            {"name": "identity", "kind": "poly", "poly": "x + i*y"},
            {"name": "exp", "kind": "holomorphic", "expr": "exp(z)"},
        ],
    )


def jordan_at_i() -> ProblemSpec:
    """Three-dimensional Jordan block at ``i``; ``x`` alone is not definitizing."""
    flip = np.fliplr(np.eye(3)).astype(complex)
    shift = np.diag([1, 1], k=1).astype(complex)
    return ProblemSpec(
        name="jordan-at-i",
        gram=flip,
        operator=1j * np.eye(3) + shift,
        definitizing=["x^2", "y - 1"],
        functions=[
            {"name": "identity", "kind": "poly", "poly": "x + i*y"},
            {"name": "square", "kind": "poly", "poly": "(x + i*y)^2"},
        ],
    )


def degenerate() -> ProblemSpec:
    """Every ``p_j(A, B)`` vanishes, so the Hilbert space ``H`` is ``{0}``."""
    return ProblemSpec(
        name="degenerate",
        gram=_FLIP.copy(),
        operator=_E.copy(),
        definitizing=["x^2", "y"],
        functions=[{"name": "identity", "kind": "poly", "poly": "x + i*y"}],
    )


def unitary() -> ProblemSpec:
    """``diag(3/5 + 4i/5, -3/5 + 4i/5)`` with ``J = diag(1, -1)``."""
    return ProblemSpec(
        name="unitary",
        gram=np.diag([1, -1]).astype(complex),
        operator=np.diag([0.6 + 0.8j, -0.6 + 0.8j]),
        definitizing=["x", "x^2 + y^2 - 1"],
        functions=[
            {"name": "identity", "kind": "poly", "poly": "x + i*y"},
            {"name": "adjoint", "kind": "sharp", "of": {"kind": "poly", "poly": "x + i*y"}},
        ],
    )


def selfadjoint() -> ProblemSpec:
    """Selfadjoint with the nonreal pair ``i, -i`` in a neutral plane."""
    return ProblemSpec(
        name="selfadjoint",
        gram=_block_diag(1, _FLIP),
        operator=_block_diag(2, np.diag([1j, -1j])),
        definitizing=["y", "x^2 + 1"],
        functions=[
            {"name": "identity", "kind": "poly", "poly": "x + i*y"},
            {"name": "riesz at i", "kind": "delta", "point": ["i", "0"]},
        ],
    )


def _coordinate_factor(variable: str, values: list[int]) -> str:
    if not values:
        return "1"
    return " * ".join(f"({variable} - ({v}))^2" for v in sorted(set(values)))


def random_problem(seed: int = 0, n: int = 6) -> ProblemSpec:
    """A seeded block-normal problem of dimension *n* (at least 2)."""
    if n < 2:
        raise DimensionMismatch(f"random problems need dimension at least 2, got {n}")
    rng = make_rng(seed)
    jordan_blocks = max(1, n // 4)
    negative = 1 if n - 2 * jordan_blocks >= 2 else 0
    hilbert = n - 2 * jordan_blocks - negative

    distinct = min(jordan_blocks, 2)
    points: list[tuple[int, int]] = []
    while len(points) < distinct:
        candidate = (int(rng.integers(-3, 4)), int(rng.integers(-3, 4)))
        if candidate not in points:
            points.append(candidate)
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]

    eigenvalues: list[complex] = []
    while len(eigenvalues) < hilbert:
        a, b = int(rng.integers(-3, 4)), int(rng.integers(-3, 4))
        if (a in xs and b in ys) or complex(a, b) in eigenvalues:
            continue
        eigenvalues.append(complex(a, b))

    blocks = []
    grams = []
    if hilbert:
        blocks.append(np.diag(eigenvalues))
        grams.append(np.eye(hilbert))
    for k in range(jordan_blocks):
        ax, ay = points[k % distinct]
        blocks.append(complex(ax, ay) * np.eye(2) + _E)
        grams.append(_FLIP)
    if negative:
        ax, ay = points[0]
        blocks.append(np.array([[complex(ax, ay)]]))
        grams.append(np.array([[-1.0]]))

    J0 = _block_diag(*grams)
    N0 = _block_diag(*blocks)
    V = random_unitary(rng, n)
    gram = V.conj().T @ J0 @ V
    gram = (gram + gram.conj().T) / 2
    operator = V.conj().T @ N0 @ V
    logger.debug("random problem seed=%d n=%d: points %s, hilbert eigenvalues %s", seed, n, points, eigenvalues)
    return ProblemSpec(
        name=f"random-{seed}-{n}",
        gram=gram,
        operator=operator,
        definitizing=[_coordinate_factor("x", xs), _coordinate_factor("y", ys)],
        functions=[
            {"name": "identity", "kind": "poly", "poly": "x + i*y"},
            {"name": "exp", "kind": "holomorphic", "expr": "exp(z)"},
        ],
    )


CORPUS: dict[str, Callable[[], ProblemSpec]] = {
    "ex1": ex1,
    "ex2": ex2,
    "ex3": ex3,
    "jordan-at-i": jordan_at_i,
    "degenerate": degenerate,
    "unitary": unitary,
    "selfadjoint": selfadjoint,
}


def corpus_names() -> list[str]:
    return [*CORPUS, "random"]


def generate(name: str, *, seed: int = 0, dim: int = 6) -> ProblemSpec:
    if name == "random":
        return random_problem(seed, dim)
    try:
        builder = CORPUS[name]
    except KeyError:
        raise UnknownCorpusItem(f"unknown corpus item {name!r} (expected one of {', '.join(corpus_names())})") from None
    return builder()


def reference_corpus(seeds: range = range(6), dim: int = 6) -> list[ProblemSpec]:
    """The fixed items followed by one random problem per seed."""
    return [builder() for builder in CORPUS.values()] + [random_problem(s, dim) for s in seeds]
