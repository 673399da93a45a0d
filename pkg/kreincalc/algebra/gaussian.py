"""Exact Gaussian rationals (elements of Q + iQ).

Arithmetic with ``int``, ``Fraction`` and other ``GaussianRational`` values
stays exact.  Mixing in a ``complex`` or ``float`` operand leaves the exact
world and returns a plain ``complex``; this is what numeric cosets rely on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

ExactLike = Union[int, Fraction, "GaussianRational"]
Scalar = Union["GaussianRational", complex]


def _as_fraction(value: object) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    raise TypeError(f"expected a rational number, got {type(value).__name__}")


@dataclass(frozen=True, slots=True)
class GaussianRational:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", _as_fraction(self.re))
        object.__setattr__(self, "im", _as_fraction(self.im))

    # -- construction -----------------------------------------------------

    @classmethod
    def coerce(cls, value: ExactLike) -> GaussianRational:
        if isinstance(value, GaussianRational):
            return value
        return cls(_as_fraction(value))

    @classmethod
    def snap(cls, value: complex, *, tol: float, max_denominator: int) -> GaussianRational | None:
        """Nearest small-denominator Gaussian rational within *tol*, else ``None``."""
        re = Fraction(value.real).limit_denominator(max_denominator)
        im = Fraction(value.imag).limit_denominator(max_denominator)
        if abs(float(re) - value.real) > tol or abs(float(im) - value.imag) > tol:
            return None
        return cls(re, im)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic -------------------------------------------------------

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def __neg__(self) -> GaussianRational:
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other: object) -> Scalar:
        if isinstance(other, (complex, float)):
            return complex(self) + other
        try:
            o = GaussianRational.coerce(other)  # type: ignore[arg-type]
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: object) -> Scalar:
        if isinstance(other, (complex, float)):
            return complex(self) - other
        try:
            o = GaussianRational.coerce(other)  # type: ignore[arg-type]
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: object) -> Scalar:
        if isinstance(other, (complex, float)):
            return other - complex(self)
        try:
            o = GaussianRational.coerce(other)  # type: ignore[arg-type]
        except TypeError:
            return NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other: object) -> Scalar:
        if isinstance(other, (complex, float)):
            return complex(self) * other
        try:
            o = GaussianRational.coerce(other)  # type: ignore[arg-type]
        except TypeError:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> GaussianRational:
        norm = self.re * self.re + self.im * self.im
        if norm == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational(self.re / norm, -self.im / norm)

    def __truediv__(self, other: object) -> Scalar:
        if isinstance(other, (complex, float)):
            return complex(self) / other
        try:
            o = GaussianRational.coerce(other)  # type: ignore[arg-type]
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> Scalar:
        if isinstance(other, (complex, float)):
            return other / complex(self)
        try:
            o = GaussianRational.coerce(other)  # type: ignore[arg-type]
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int) -> GaussianRational:
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = ONE
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # -- conversion -------------------------------------------------------

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        return abs(complex(self))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        imag = _imag_str(self.im)
        if self.re == 0:
            return imag
        sign = "" if imag.startswith("-") else "+"
        return f"({self.re}{sign}{imag})"

    def __repr__(self) -> str:
        return f"GaussianRational({self})"


def _imag_str(im: Fraction) -> str:
    if im == 1:
        return "i"
    if im == -1:
        return "-i"
    return f"{im}*i"


ZERO = GaussianRational(Fraction(0))
ONE = GaussianRational(Fraction(1))
I_UNIT = GaussianRational(Fraction(0), Fraction(1))


def is_exact(value: object) -> bool:
    return isinstance(value, (GaussianRational, int, Fraction))


def to_complex(value: Scalar | int | Fraction) -> complex:
    return complex(value)
