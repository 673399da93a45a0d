"""Bivariate polynomials over the Gaussian rationals.

A :class:`Poly2` is an immutable sparse term map ``{(i, j): coefficient}``
tagged with the variable pair it lives in: ``"xy"`` for the real/imaginary
part variables, ``"zw"`` for the (N, N+) variables.  Terms are kept in
graded-lex order with x > y, largest first.

Coefficients are normally exact :class:`GaussianRational` values.  Complex
float coefficients are allowed for numeric work (Taylor jets of
transcendental functions); such polynomials report ``is_exact() == False``
and are rejected by the Groebner layer.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from kreincalc.algebra.gaussian import ONE, ZERO, GaussianRational, Scalar, is_exact
from kreincalc.errors import (
    DimensionMismatch,
    NonCommuting,
    ParseError,
    VariableTagError,
    ZeroPolynomial,
)

logger = logging.getLogger(__name__)

Monomial = tuple[int, int]

VARIABLE_NAMES = {"xy": ("x", "y"), "zw": ("z", "w")}


def grlex_key(m: Monomial) -> tuple[int, int]:
    """Sort key of the graded-lex order with x > y."""
    return (m[0] + m[1], m[0])


def _normalize_coefficient(c: object) -> Scalar:
    if isinstance(c, GaussianRational):
        return c
    if isinstance(c, (int, Fraction)):
        return GaussianRational(Fraction(c))
    if isinstance(c, (complex, float)):
        return complex(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


def is_zero_coefficient(c: Scalar) -> bool:
    if isinstance(c, GaussianRational):
        return c.is_zero()
    return c == 0


@dataclass(frozen=True)
class MaxDegree:
    """Maximum of the per-variable degrees of a polynomial."""

    value: int


class Poly2:
    __slots__ = ("_terms", "variables", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None, variables: str = "xy") -> None:
        if variables not in VARIABLE_NAMES:
            raise VariableTagError(f"unknown variable tag {variables!r}")
        cleaned: dict[Monomial, Scalar] = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in monomial {(i, j)}")
            coeff = _normalize_coefficient(c)
            if not is_zero_coefficient(coeff):
                cleaned[(int(i), int(j))] = coeff
        ordered = dict(sorted(cleaned.items(), key=lambda item: grlex_key(item[0]), reverse=True))
        self._terms = MappingProxyType(ordered)
        self.variables = variables
        self._hash: int | None = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, c: object, variables: str = "xy") -> Poly2:
        return cls({(0, 0): c}, variables)

    @classmethod
    def gen(cls, index: int, variables: str = "xy") -> Poly2:
        """The first (``index=0``) or second variable as a polynomial."""
        return cls({(1, 0) if index == 0 else (0, 1): 1}, variables)

    @classmethod
    def monomial(cls, m: Monomial, c: object = 1, variables: str = "xy") -> Poly2:
        return cls({m: c}, variables)

    @classmethod
    def zero(cls, variables: str = "xy") -> Poly2:
        return cls({}, variables)

    @classmethod
    def one(cls, variables: str = "xy") -> Poly2:
        return cls.constant(1, variables)

    @classmethod
    def linear(cls, point: tuple[Scalar, Scalar], index: int, variables: str = "xy") -> Poly2:
        """``x - a_x`` (``index=0``) or ``y - a_y`` (``index=1``)."""
        return cls.gen(index, variables) - cls.constant(point[index], variables)

    # -- accessors --------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Scalar]:
        return self._terms

    def items(self) -> Iterator[tuple[Monomial, Scalar]]:
        return iter(self._terms.items())

    def coefficient(self, m: Monomial) -> Scalar:
        return self._terms.get(m, ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == (0, 0) for m in self._terms)

    def is_exact(self) -> bool:
        return all(isinstance(c, GaussianRational) for c in self._terms.values())

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((i + j for i, j in self._terms), default=-1)

    def degree_in(self, index: int) -> int:
        return max((m[index] for m in self._terms), default=-1)

    def max_degree(self) -> MaxDegree:
        return MaxDegree(max(self.degree_in(0), self.degree_in(1), 0))

    def leading_monomial(self) -> Monomial:
        if not self._terms:
            raise ZeroPolynomial("zero polynomial has no leading monomial")
        return next(iter(self._terms))

    def leading_coefficient(self) -> Scalar:
        return self._terms[self.leading_monomial()]

    def is_univariate_in(self, index: int) -> bool:
        other = 1 - index
        return all(m[other] == 0 for m in self._terms)

    # -- ring structure ---------------------------------------------------

    def _check_tag(self, other: Poly2) -> None:
        if self.variables != other.variables:
            raise VariableTagError(
                f"cannot combine polynomials in {self.variables} and {other.variables}"
            )

    def _coerce(self, other: object) -> Poly2 | None:
        if isinstance(other, Poly2):
            self._check_tag(other)
            return other
        if isinstance(other, (int, Fraction, GaussianRational, complex, float)):
            return Poly2.constant(other, self.variables)
        return None

    def __add__(self, other: object) -> Poly2:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[Monomial, Scalar] = dict(self._terms)
        for m, c in o._terms.items():
            out[m] = out[m] + c if m in out else c
        return Poly2(out, self.variables)

    __radd__ = __add__

    def __neg__(self) -> Poly2:
        return Poly2({m: -c for m, c in self._terms.items()}, self.variables)

    def __sub__(self, other: object) -> Poly2:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> Poly2:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> Poly2:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[Monomial, Scalar] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in o._terms.items():
                m = (i1 + i2, j1 + j2)
                prod = c1 * c2
                out[m] = out[m] + prod if m in out else prod
        return Poly2(out, self.variables)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Poly2:
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = Poly2.one(self.variables)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def scale(self, c: object) -> Poly2:
        coeff = _normalize_coefficient(c)
        return Poly2({m: v * coeff for m, v in self._terms.items()}, self.variables)

    def shift_monomial(self, m: Monomial) -> Poly2:
        """Multiply by the monomial ``x^m[0] y^m[1]``."""
        return Poly2({(i + m[0], j + m[1]): c for (i, j), c in self._terms.items()}, self.variables)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly2):
            return self.variables == other.variables and dict(self._terms) == dict(other._terms)
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self == Poly2.constant(other, self.variables)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.variables, tuple(self._terms.items())))
        return self._hash

    # -- involution -------------------------------------------------------

    def sharp(self) -> Poly2:
        """``p#(x, y) = conj(p(conj x, conj y))``: conjugate every coefficient."""
        return Poly2({m: c.conjugate() for m, c in self._terms.items()}, self.variables)

    def is_real(self) -> bool:
        return self.sharp() == self

    def real_part(self) -> Poly2:
        """``(p + p#) / 2``."""
        return (self + self.sharp()).scale(Fraction(1, 2))

    # -- substitution -----------------------------------------------------

    def compose(self, first: Poly2, second: Poly2) -> Poly2:
        """Substitute *first* and *second* for the two variables."""
        first._check_tag(second)
        powers_a = _power_table(first, self.degree_in(0))
        powers_b = _power_table(second, self.degree_in(1))
        result = Poly2.zero(first.variables)
        for (i, j), c in self._terms.items():
            result = result + (powers_a[i] * powers_b[j]).scale(c)
        return result

    def derivative(self, dx: int, dy: int) -> Poly2:
        """Partial derivative d^(dx+dy) / dx^dx dy^dy."""
        out: dict[Monomial, Scalar] = {}
        for (i, j), c in self._terms.items():
            if i < dx or j < dy:
                continue
            factor = (factorial(i) // factorial(i - dx)) * (factorial(j) // factorial(j - dy))
            out[(i - dx, j - dy)] = c * factor
        return Poly2(out, self.variables)

    def taylor_coefficients(self, point: tuple[Scalar, Scalar]) -> dict[Monomial, Scalar]:
        """Coefficients of p in powers of (x - a_x), (y - a_y)."""
        shifted = self.compose(
            Poly2.gen(0, self.variables) + Poly2.constant(point[0], self.variables),
            Poly2.gen(1, self.variables) + Poly2.constant(point[1], self.variables),
        )
        return dict(shifted.terms)

    # -- evaluation -------------------------------------------------------

    def eval(self, point: tuple[complex, complex] | Sequence[complex]) -> complex:
        """Evaluate at a float point with a Horner scheme in x over y-polynomials."""
        x, y = complex(point[0]), complex(point[1])
        rows: dict[int, dict[int, complex]] = {}
        for (i, j), c in self._terms.items():
            rows.setdefault(i, {})[j] = complex(c)
        result = 0j
        for i in range(self.degree_in(0), -1, -1):
            row = rows.get(i)
            inner = 0j
            if row:
                for j in range(max(row), -1, -1):
                    inner = inner * y + row.get(j, 0j)
            result = result * x + inner
        return result

    __call__ = eval

    def eval_exact(self, point: tuple[GaussianRational, GaussianRational]) -> GaussianRational:
        if not self.is_exact():
            raise TypeError("eval_exact needs exact coefficients")
        x, y = point
        total = ZERO
        for (i, j), c in self._terms.items():
            total = total + c * (x**i) * (y**j)
        return total

    def eval_complex(self, z: complex) -> complex:
        """``p(z)`` in the short-hand sense ``p(Re z, Im z)``."""
        return self.eval((z.real, z.imag))

    # -- text -------------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly2({format_poly(self)!r}, variables={self.variables!r})"


def _power_table(p: Poly2, n: int) -> list[Poly2]:
    table = [Poly2.one(p.variables)]
    for _ in range(max(n, 0)):
        table.append(table[-1] * p)
    return table


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def _monomial_str(m: Monomial, names: tuple[str, str]) -> str:
    parts = []
    for exponent, name in zip(m, names):
        if exponent == 1:
            parts.append(name)
        elif exponent > 1:
            parts.append(f"{name}^{exponent}")
    return "*".join(parts)


def _coefficient_str(c: Scalar) -> str:
    if isinstance(c, GaussianRational):
        return str(c)
    return f"({c.real!r}{c.imag:+.17g}*i)"


def format_poly(p: Poly2) -> str:
    names = VARIABLE_NAMES[p.variables]
    if p.is_zero():
        return "0"
    chunks: list[str] = []
    for m, c in p.items():
        mono = _monomial_str(m, names)
        if not mono:
            term = _coefficient_str(c)
        elif c == ONE:
            term = mono
        elif c == -ONE:
            term = f"-{mono}"
        else:
            term = f"{_coefficient_str(c)}*{mono}"
        if not chunks:
            chunks.append(term)
        elif term.startswith("-"):
            chunks.append(f" - {term[1:]}")
        else:
            chunks.append(f" + {term}")
    return "".join(chunks)


_TRANSFORMS = standard_transformations + (convert_xor,)


def _to_fraction(value: sp.Expr, text: str) -> Fraction:
    if not value.is_Rational:
        raise ParseError(f"inexact or irrational coefficient {value} in {text!r}")
    return Fraction(int(value.p), int(value.q))


def parse_poly(text: str, variables: str = "xy") -> Poly2:
    """Parse ``"x^2 + (1/2+1/3*i)*x*y - 1"`` into an exact :class:`Poly2`."""
    if variables not in VARIABLE_NAMES:
        raise VariableTagError(f"unknown variable tag {variables!r}")
    names = VARIABLE_NAMES[variables]
    symbols = sp.symbols(names)
    local = {names[0]: symbols[0], names[1]: symbols[1], "i": sp.I, "I": sp.I}
    try:
        expr = parse_expr(text, local_dict=local, transformations=_TRANSFORMS, evaluate=True)
    except Exception as exc:  # sympy raises a zoo of exception types
        raise ParseError(f"cannot parse polynomial {text!r}: {exc}") from exc
    expr = sp.expand(sp.sympify(expr))
    stray = expr.free_symbols - set(symbols)
    if stray:
        raise ParseError(
            f"unexpected symbols {sorted(map(str, stray))} in {text!r} (variables are {names})"
        )
    try:
        poly = sp.Poly(expr, *symbols)
    except sp.PolynomialError as exc:
        raise ParseError(f"not a polynomial: {text!r}") from exc
    terms: dict[Monomial, GaussianRational] = {}
    for (i, j), coeff in poly.terms():
        re, im = sp.re(coeff), sp.im(coeff)
        terms[(int(i), int(j))] = GaussianRational(_to_fraction(re, text), _to_fraction(im, text))
    return Poly2(terms, variables)


def parse_polys(texts: Iterable[str], variables: str = "xy") -> list[Poly2]:
    return [parse_poly(t, variables) for t in texts]


# ---------------------------------------------------------------------------
# Change of variables and reversal
# ---------------------------------------------------------------------------

_HALF = GaussianRational(Fraction(1, 2))
_MINUS_HALF_I = GaussianRational(Fraction(0), Fraction(-1, 2))
_I = GaussianRational(Fraction(0), Fraction(1))


def phi_transform(p: Poly2) -> Poly2:
    """Substitute ``x = (z + w) / 2``, ``y = (z - w) / (2i)``."""
    if p.variables != "xy":
        raise VariableTagError("phi_transform expects a polynomial in (x, y)")
    z, w = Poly2.gen(0, "zw"), Poly2.gen(1, "zw")
    return p.compose((z + w).scale(_HALF), (z - w).scale(_MINUS_HALF_I))


def phi_inverse(q: Poly2) -> Poly2:
    """Substitute ``z = x + iy``, ``w = x - iy``."""
    if q.variables != "zw":
        raise VariableTagError("phi_inverse expects a polynomial in (z, w)")
    x, y = Poly2.gen(0, "xy"), Poly2.gen(1, "xy")
    return q.compose(x + y.scale(_I), x - y.scale(_I))


def is_phi_real(q: Poly2) -> bool:
    """``conj(q(z, w)) == q(conj w, conj z)``, checked on coefficients."""
    if q.variables != "zw":
        raise VariableTagError("is_phi_real expects a polynomial in (z, w)")
    return all(q.coefficient((l, k)) == c.conjugate() for (k, l), c in q.items())


def varpi(q: Poly2) -> Poly2:
    """``(zw)^d q(1/z, 1/w)`` with ``d`` the maximum of the z- and w-degree."""
    if q.variables != "zw":
        raise VariableTagError("varpi expects a polynomial in (z, w)")
    if q.is_zero():
        raise ZeroPolynomial("varpi of the zero polynomial")
    d = q.max_degree().value
    return Poly2({(d - k, d - l): c for (k, l), c in q.items()}, "zw")


# ---------------------------------------------------------------------------
# Matrix substitution
# ---------------------------------------------------------------------------


def _matrix_powers(M: np.ndarray, n: int) -> list[np.ndarray]:
    powers = [np.eye(M.shape[0], dtype=complex)]
    for _ in range(max(n, 0)):
        powers.append(powers[-1] @ M)
    return powers


def check_commuting(A: np.ndarray, B: np.ndarray, tol: float) -> float:
    """Relative commutator ``||AB - BA|| / (||A|| ||B||)``; raises when above *tol*."""
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape != B.shape:
        raise DimensionMismatch(f"need square matrices of equal size, got {A.shape} and {B.shape}")
    scale = np.linalg.norm(A, 2) * np.linalg.norm(B, 2) if A.size else 0.0
    residual = float(np.linalg.norm(A @ B - B @ A, 2)) if A.size else 0.0
    if residual > tol * scale:
        raise NonCommuting(
            f"matrices do not commute: ||AB - BA|| = {residual:.3e} > {tol:.1e} * {scale:.3e}"
        )
    return residual / scale if scale else 0.0


def mat_subst(p: Poly2, A: np.ndarray, B: np.ndarray, *, tol: float = 1e-10) -> np.ndarray:
    """``sum c_ij A^i B^j`` with cached powers.

    For a polynomial tagged ``zw`` the two matrices are read as ``(N, N+)``,
    which makes ``mat_subst(phi_transform(p), N, N+) == mat_subst(p, A, B)``.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    check_commuting(A, B, tol)
    powers_a = _matrix_powers(A, p.degree_in(0))
    powers_b = _matrix_powers(B, p.degree_in(1))
    result = np.zeros_like(A)
    for (i, j), c in p.items():
        result = result + complex(c) * (powers_a[i] @ powers_b[j])
    return result
