"""Exception hierarchy shared by the library and the CLI.

Every error carries an ``exit_code`` that ``kreincalc.main`` hands back to
the shell: 1 for usage and input problems, 2 for modelling failures (the
operator is not normal, a polynomial is not definitizing, ...), 3 for
numerical residuals that exceed their tolerance.
"""

from __future__ import annotations

EXIT_USAGE = 1
EXIT_MODEL = 2
EXIT_RESIDUAL = 3


class KreinCalcError(Exception):
    exit_code: int = EXIT_USAGE


# -- input ------------------------------------------------------------------


class ParseError(KreinCalcError):
    """A polynomial string, matrix or problem file could not be read."""


class ConfigError(KreinCalcError):
    """Unknown tolerance key, non-positive override or bad profile name."""


class VariableTagError(KreinCalcError):
    """A polynomial lives in (x, y) where (z, w) was expected, or vice versa."""


class DimensionMismatch(KreinCalcError):
    pass


class ZeroPolynomial(KreinCalcError):
    pass


class InexactCoefficient(KreinCalcError):
    """A floating-point coefficient reached the exact ideal layer."""


class UnknownCorpusItem(KreinCalcError):
    pass


# -- modelling --------------------------------------------------------------


class InvalidGram(KreinCalcError):
    exit_code = EXIT_MODEL


class NonCommuting(KreinCalcError):
    exit_code = EXIT_MODEL


class NotNormal(KreinCalcError):
    exit_code = EXIT_MODEL


class NotDefinitizing(KreinCalcError):
    exit_code = EXIT_MODEL

    def __init__(self, message: str, *, index: int | None = None, min_eigenvalue: float | None = None) -> None:
        super().__init__(message)
        self.index = index
        self.min_eigenvalue = min_eigenvalue


class NotPSD(KreinCalcError):
    exit_code = EXIT_MODEL


class NotZeroDimensional(KreinCalcError):
    exit_code = EXIT_MODEL


class NonRationalVarietyPoint(KreinCalcError):
    """A variety coordinate did not round to a Gaussian rational."""

    exit_code = EXIT_MODEL

    def __init__(self, message: str, *, coords: tuple[complex, complex]) -> None:
        super().__init__(f"{message} (approx. x={coords[0]:.12g}, y={coords[1]:.12g})")
        self.coords = coords


class NotInVariety(KreinCalcError):
    exit_code = EXIT_MODEL


class IncompleteVariety(KreinCalcError):
    """Local algebra dimensions do not add up to the quotient dimension."""

    exit_code = EXIT_MODEL


class SingularOperator(KreinCalcError):
    exit_code = EXIT_MODEL


class NotInvertible(KreinCalcError):
    """A scalar value or coset has no inverse at the reported point."""

    exit_code = EXIT_MODEL

    def __init__(self, message: str, *, point: object = None) -> None:
        super().__init__(message if point is None else f"{message} at {point}")
        self.point = point


class AlgebraMismatch(KreinCalcError):
    pass


class InconsistentTargets(KreinCalcError):
    pass


class MissingValue(KreinCalcError):
    pass


class MembershipFailed(KreinCalcError):
    exit_code = EXIT_MODEL


# -- verification -----------------------------------------------------------


class VanishingDenominator(KreinCalcError):
    """``sum_k p_k`` vanishes at a spectral point that is not a real variety point."""

    exit_code = EXIT_RESIDUAL

    def __init__(self, message: str, *, point: complex) -> None:
        super().__init__(f"{message} at z = {point:.12g}")
        self.point = point


class ResidualTooLarge(KreinCalcError):
    exit_code = EXIT_RESIDUAL

    def __init__(self, message: str, *, residual: float, tolerance: float) -> None:
        super().__init__(f"{message}: residual {residual:.3e} > {tolerance:.3e}")
        self.residual = residual
        self.tolerance = tolerance
