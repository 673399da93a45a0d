"""The analyze / calc / verify pipelines and the report they produce."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from kreincalc.algebra.gaussian import GaussianRational
from kreincalc.algebra.poly2 import Poly2
from kreincalc.algebra.quotient import quotient_algebra
from kreincalc.calculus.functions import calc_sharp, embed_poly, identity_function
from kreincalc.calculus.properties import verify_calculus, verify_inversion
from kreincalc.calculus.spectrum import effective_set, spectrum_formula_check, spectrum_of
from kreincalc.calculus.triples import phi_of_N
from kreincalc.checks import CheckReport
from kreincalc.config import Tolerances
from kreincalc.errors import EXIT_RESIDUAL, KreinCalcError, SingularOperator
from kreincalc.io.problem import ProblemSpec, build_function, encode_complex, encode_matrix, encode_point, function_label
from kreincalc.operators.embeddings import EmbeddingSystem, build_embedding, invariant_check, verify_transfer_lemmas
from kreincalc.operators.krein import adjoint
from kreincalc.operators.spectral import (
    measure_transfer_check,
    off_variety_measure_check,
    spectral_invariants,
    spectrum_sum_check,
)
from kreincalc.transforms import TransformReport, inverse_transport_check, special_case_check, transport_check

logger = logging.getLogger(__name__)


@dataclass
class ProblemReport:
    """Everything one command learned about one problem."""

    name: str
    command: str
    checks: list[CheckReport] = field(default_factory=list)
    definitizing: list[dict[str, Any]] = field(default_factory=list)
    ideal: dict[str, Any] = field(default_factory=dict)
    spectral: dict[str, Any] = field(default_factory=dict)
    transforms: list[dict[str, Any]] = field(default_factory=list)
    outputs: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    error: str | None = None
    error_type: str | None = None
    error_exit_code: int | None = None

    @classmethod
    def failed(cls, name: str, command: str, exc: KreinCalcError) -> ProblemReport:
        return cls(name, command, error=str(exc), error_type=type(exc).__name__, error_exit_code=exc.exit_code)

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        if self.error_exit_code is not None:
            return self.error_exit_code
        return 0 if self.passed else EXIT_RESIDUAL

    @property
    def check_count(self) -> int:
        return sum(len(c.entries) for c in self.checks)

    @property
    def failure_count(self) -> int:
        return sum(len(c.failures()) for c in self.checks)

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "command": self.command,
            "passed": self.passed,
            "exit_code": self.exit_code,
            "error": None if self.error is None else {"type": self.error_type, "message": self.error},
            "definitizing": self.definitizing,
            "ideal": self.ideal,
            "spectral": self.spectral,
            "transforms": self.transforms,
            "checks": [c.as_dict() for c in self.checks],
            "outputs": self.outputs,
            "notes": self.notes,
        }


# ---------------------------------------------------------------------------
# Summaries
# ---------------------------------------------------------------------------


def build_system(spec: ProblemSpec, tolerances: Tolerances) -> EmbeddingSystem:
    tolerances = spec.tolerances(tolerances)
    return build_embedding(spec.build_operator(tolerances), spec.polynomials(), tolerances)


def summarize_definitizing(system: EmbeddingSystem) -> list[dict[str, Any]]:
    return [
        {
            "polynomial": str(r.polynomial),
            "ok": r.ok,
            "min_eigenvalue": r.min_eigenvalue,
            "tolerance": system.tolerances.psd * r.scale,
            "hermitian_residual": r.hermitian_residual,
            "real_part": None if r.real_part is None else str(r.real_part),
        }
        for r in system.definitizing
    ]


def summarize_ideal(system: EmbeddingSystem) -> dict[str, Any]:
    ideal = system.ideal
    return {
        "generators": [str(p) for p in ideal.generators],
        "groebner_basis": [str(g) for g in ideal.groebner],
        "zero_dimensional": ideal.is_zero_dimensional(),
        "quotient_dim": quotient_algebra(ideal).dim,
        "points": [
            {
                "coords": encode_point(pt.coords),
                "real": pt.is_real,
                "image": encode_complex(pt.image),
                "d_x": pt.d_x,
                "d_y": pt.d_y,
                "dim_A": pt.algebra_A.dim,
                "dim_B": pt.algebra_B.dim,
                "in_theta_spectrum": system.spectral_index_of(pt) is not None if pt.is_real else False,
            }
            for pt in system.points
        ],
    }


def summarize_spectral(system: EmbeddingSystem) -> dict[str, Any]:
    effective = effective_set(system)
    return {
        "H_dim": system.Hdim,
        "Hj_dims": list(system.Hjdims),
        "theta_spectrum": [encode_complex(z) for z in system.spectral.eigenvalues],
        "theta_j_spectra": [[encode_complex(z) for z in Ej.eigenvalues] for Ej in system.spectral_j],
        "spectrum": [encode_complex(z) for z in spectrum_of(system)],
        "effective_points": sorted(str(k) for k in effective.real_keys | effective.nonreal_keys),
    }


def _transform_check(reports: Sequence[TransformReport], title: str) -> CheckReport:
    check = CheckReport(title)
    for r in reports:
        check.flag(f"{r.kind}_definitizing", r.definitizing_ok, f"{r.original} -> {r.transformed}")
        check.flag(f"{r.kind}_ideal_zero_dimensional", r.ideal_zero_dim_ok, str(r.transformed))
    return check


# ---------------------------------------------------------------------------
# Pipelines
# ---------------------------------------------------------------------------


def analyze(spec: ProblemSpec, tolerances: Tolerances | None = None, *, seed: int = 0) -> ProblemReport:
    """Embedding, ideal and spectral data together with the transfer identities."""
    return _analyze_system(build_system(spec, tolerances or Tolerances()), spec.name, seed)


def _analyze_system(system: EmbeddingSystem, name: str, seed: int) -> ProblemReport:
    report = ProblemReport(name, "analyze")
    report.definitizing = summarize_definitizing(system)
    report.ideal = summarize_ideal(system)
    report.spectral = summarize_spectral(system)
    report.checks = [
        invariant_check(system),
        verify_transfer_lemmas(system, seed=seed),
        spectral_invariants(system.spectral, system.theta_N, system.tolerances),
        spectrum_sum_check(system),
        off_variety_measure_check(system, seed=seed),
        measure_transfer_check(system, seed=seed),
        spectrum_formula_check(system),
        special_case_check(system.N, system.defpolys, system.tolerances),
    ]
    if system.Hdim == 0:
        report.notes.append("H = {0}: every definitizing polynomial vanishes at (A, B)")
    try:
        inverse = inverse_transport_check(system)
    except SingularOperator as exc:
        report.notes.append(f"inverse transport skipped: {exc}")
    else:
        report.transforms.extend(r.as_dict() for r in inverse)
        report.checks.append(_transform_check(inverse, "inverse transport"))
    logger.debug("analyze %s: %d checks, %d failed", name, report.check_count, report.failure_count)
    return report


def _resolvent_shift(system: EmbeddingSystem) -> int:
    """An integer outside sigma(N)."""
    return int(math.ceil(max((abs(z) for z in spectrum_of(system)), default=0.0))) + 1


def verify(
    spec: ProblemSpec,
    tolerances: Tolerances | None = None,
    *,
    samples: int = 20,
    seed: int = 0,
) -> ProblemReport:
    """``analyze`` plus the full calculus suite, transport of the generators and inversion."""
    system = build_system(spec, tolerances or Tolerances())
    report = _analyze_system(system, spec.name, seed)
    report.command = "verify"
    report.checks.append(verify_calculus(system, samples, seed))

    shifted = transport_check(system, beta=1, alpha=2)
    report.transforms.extend(r.as_dict() for r in shifted)
    report.checks.append(_transform_check(shifted, "shift and scale transport"))

    c = _resolvent_shift(system)
    resolvent = embed_poly(system, Poly2.gen(0) + Poly2.gen(1).scale(GaussianRational(0, 1)) - c)
    report.checks.append(verify_inversion(system, resolvent))
    logger.debug("verify %s: %d checks, %d failed", spec.name, report.check_count, report.failure_count)
    return report


def calc(
    spec: ProblemSpec,
    functions: Sequence[Mapping[str, Any]] | None = None,
    tolerances: Tolerances | None = None,
) -> ProblemReport:
    """``phi(N)`` for every supplied function plus homomorphism spot checks on the set."""
    tolerances = tolerances or Tolerances()
    system = build_system(spec, tolerances)
    descriptions = list(functions if functions is not None else spec.functions)
    report = ProblemReport(spec.name, "calc")
    report.definitizing = summarize_definitizing(system)

    tol = system.tolerances.calculus
    check = CheckReport("supplied functions")
    built = []
    for index, data in enumerate(descriptions):
        label = function_label(data, index)
        phi = build_function(system, data)
        value = phi_of_N(phi).matrix
        report.outputs[label] = encode_matrix(value)
        built.append((label, phi, value))
        check.add_matrix("sharp_is_adjoint", phi_of_N(calc_sharp(phi)).matrix, adjoint(system.space.operator(value)).matrix, tol, label)

    for (la, phi, a), (lb, psi, b) in zip(built, built[1:]):
        detail = f"{la} * {lb}"
        check.add_matrix("product_of_outputs", phi_of_N(phi * psi).matrix, a @ b, tol, detail)
        check.add_matrix("sum_of_outputs", phi_of_N(phi + psi).matrix, a + b, tol, f"{la} + {lb}")
    report.checks = [check]

    identity = phi_of_N(identity_function(system)).matrix
    identity_check = CheckReport("identity function")
    identity_check.add_matrix("identity_to_N", identity, system.N.matrix, tol)
    report.checks.append(identity_check)
    return report


def rollup(reports: Sequence[ProblemReport]) -> int:
    """The worst exit code of a batch; ``0`` only when every problem passed."""
    return max((r.exit_code for r in reports), default=0)


def matrix_preview(matrix: Any, digits: int = 4) -> str:
    """Short text rendering of an encoded matrix for the console and Markdown."""
    M = np.array([[complex(v[0], v[1]) for v in row] for row in matrix])
    return np.array2string(M, precision=digits, suppress_small=True, max_line_width=120)
