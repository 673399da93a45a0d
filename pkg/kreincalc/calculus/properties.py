"""Randomised verification of the calculus.

Each suite draws its samples from a seeded generator and returns a
:class:`~kreincalc.checks.CheckReport`; nothing here raises for a failed
identity.
"""

from __future__ import annotations

import logging

import numpy as np
import scipy.linalg

from kreincalc.algebra.poly2 import Poly2, mat_subst
from kreincalc.algebra.quotient import Coset
from kreincalc.calculus.functions import (
    CalcFunction,
    calc_invert,
    calc_sharp,
    delta,
    embed_jet,
    embed_poly,
    identity_function,
    jet_index_set,
    local_correction,
    random_function,
    unit,
)
from kreincalc.calculus.spectrum import effective_set, riesz_check, spectrum_formula_check
from kreincalc.calculus.triples import (
    Triple,
    decompose,
    in_ideal_N,
    is_decomposition,
    phi_of_N,
    psi_apply,
    random_null_triple,
    random_triple,
)
from kreincalc.checks import CheckReport
from kreincalc.errors import KreinCalcError
from kreincalc.operators.embeddings import EmbeddingSystem
from kreincalc.operators.spectral import integrate, integrate_j
from kreincalc.utils.sampling import make_rng, random_complex, random_poly

logger = logging.getLogger(__name__)

# Commutant samples from the null space of X -> (AX - XA, BX - XB) only up to this dimension.
_COMMUTANT_BASIS_MAX_DIM = 12


def _subst(system: EmbeddingSystem, p: Poly2) -> np.ndarray:
    return mat_subst(p, system.A, system.B, tol=system.tolerances.commute)


def verify_homomorphism(system: EmbeddingSystem, samples: int = 20, seed: int = 0) -> CheckReport:
    """``phi -> phi(N)`` is unital, reproduces ``N`` and respects sums, products and ``#``."""
    tol = system.tolerances.calculus
    report = CheckReport("calculus homomorphism")
    rng = make_rng(seed)
    report.add_matrix("unit_to_identity", phi_of_N(unit(system)).matrix, np.eye(system.space.dim), tol)
    report.add_matrix("identity_to_N", phi_of_N(identity_function(system)).matrix, system.N.matrix, tol)
    for _ in range(samples):
        phi, psi = random_function(system, rng), random_function(system, rng)
        a, b = phi_of_N(phi).matrix, phi_of_N(psi).matrix
        report.add_matrix("multiplicative", phi_of_N(phi * psi).matrix, a @ b, tol)
        report.add_matrix("additive", phi_of_N(phi + psi).matrix, a + b, tol)
        report.add_matrix("adjoint", phi_of_N(calc_sharp(phi)).matrix, system.space.gram_inv @ a.conj().T @ system.space.gram, tol)
    return report


def verify_polynomials(system: EmbeddingSystem, samples: int = 5, seed: int = 0) -> CheckReport:
    """Polynomial functions: ``s_N(N) = s(A, B)``, jets of ``s`` give ``s_N`` and ``#``/products commute with embedding."""
    tol = system.tolerances.calculus
    report = CheckReport("polynomial functions")
    rng = make_rng(seed)
    for _ in range(samples):
        s, q = random_poly(rng, 2), random_poly(rng, 2)
        s_N = embed_poly(system, s)
        report.add_matrix("poly_to_substitution", phi_of_N(s_N).matrix, _subst(system, s), tol, str(s))
        jets = {pt.key: {m: s.derivative(*m).eval_exact(pt.coords) for m in jet_index_set(pt)} for pt in system.points}
        report.flag("jet_reproduces_poly", embed_jet(system, lambda z: s.eval_complex(z), jets).allclose(s_N, tol), str(s))
        report.flag("sharp_commutes_with_embedding", embed_poly(system, s.sharp()).allclose(calc_sharp(s_N), tol), str(s))
        report.flag("product_commutes_with_embedding", embed_poly(system, s * q).allclose(s_N * embed_poly(system, q), tol), str(s))
    return report


def verify_triples(system: EmbeddingSystem, samples: int = 10, seed: int = 0) -> CheckReport:
    """Psi is multiplicative, #-compatible and vanishes on null triples; null triples form an ideal."""
    tol = system.tolerances.calculus
    report = CheckReport("triple algebra")
    rng = make_rng(seed)
    J, J_inv = system.space.gram, system.space.gram_inv
    for _ in range(samples):
        t, u = random_triple(system, rng), random_triple(system, rng)
        n = random_null_triple(system, rng)
        pt, pu = psi_apply(system, t).matrix, psi_apply(system, u).matrix
        report.add_matrix("psi_multiplicative", psi_apply(system, t * u).matrix, pt @ pu, tol)
        report.add_matrix("psi_sharp", psi_apply(system, t.sharp()).matrix, J_inv @ pt.conj().T @ J, tol)
        report.add_matrix("psi_vanishes_on_null", psi_apply(system, n).matrix, np.zeros_like(pt), tol)
        report.add_matrix("well_defined", psi_apply(system, t + n).matrix, pt, tol)
        report.flag("null_member", bool(in_ideal_N(system, n)), in_ideal_N(system, n).reason)
        report.flag("null_sharp_member", bool(in_ideal_N(system, n.sharp())), "")
        commutator = t * u - u * t
        report.flag("commutator_null", bool(in_ideal_N(system, commutator)), in_ideal_N(system, commutator).reason)
        s = _exact_triple(system, rng)
        report.flag("null_right_ideal", bool(in_ideal_N(system, n * s)), "")
        report.flag("null_left_ideal", bool(in_ideal_N(system, s * n)), "")
    report.flag("unit_not_null", not in_ideal_N(system, Triple(system, Poly2.one(), _zeros(system))), "")
    return report


def _zeros(system: EmbeddingSystem) -> tuple[dict[int, complex], ...]:
    return tuple({k: 0j for k in range(len(system.spectral))} for _ in range(system.m))


def _exact_triple(system: EmbeddingSystem, rng: np.random.Generator) -> Triple:
    """Triple whose spectral functions take small integer values, so that products stay snappable."""
    f = tuple({k: complex(int(rng.integers(-3, 4)), int(rng.integers(-3, 4))) for k in range(len(system.spectral))} for _ in range(system.m))
    return Triple(system, random_poly(rng, 2), f)


def verify_decompositions(system: EmbeddingSystem, samples: int = 5, seed: int = 0) -> CheckReport:
    """``decompose`` represents its input and is compatible with products and ``#``."""
    report = CheckReport("decompositions")
    rng = make_rng(seed)
    for _ in range(samples):
        phi, psi = random_function(system, rng), random_function(system, rng)
        t, u = decompose(phi), decompose(psi)
        report.merge(is_decomposition(phi, t))
        product = is_decomposition(phi * psi, t * u)
        report.flag("product_decomposes_product", product.passed, f"max residual {product.max_residual():.3e}")
        sharp = is_decomposition(calc_sharp(phi), t.sharp())
        report.flag("sharp_decomposes_sharp", sharp.passed, f"max residual {sharp.max_residual():.3e}")
    return report


def verify_product_rules(system: EmbeddingSystem, samples: int = 3, seed: int = 0) -> CheckReport:
    """Products of ``r(A, B)`` with ``Xi_j(int f dE_j)`` and of two such integrals."""
    tol = system.tolerances.calculus
    report = CheckReport("product rules")
    rng = make_rng(seed)
    E = system.spectral
    eig = E.eigenvalues
    p_vals = [[p.eval_complex(z) for z in eig] for p in system.defpolys]
    sums = [system.sum_at(z) for z in eig]
    on_variety = {k for k in range(len(E)) if system.real_point_at(k) is not None}
    for _ in range(samples):
        r = random_poly(rng, 2)
        rA = _subst(system, r)
        f = {k: random_complex(rng) for k in range(len(E))}
        g = {k: random_complex(rng) for k in range(len(E))}
        for j in range(system.m):
            Xf = system.xi_j(integrate_j(system, f, j), j)
            rf = {k: r.eval_complex(z) * f[k] for k, z in enumerate(eig)}
            report.add_matrix("poly_commutes_with_xi_j", rA @ Xf, Xf @ rA, tol, f"j={j + 1}")
            report.add_matrix("poly_times_xi_j", rA @ Xf, system.xi_j(integrate_j(system, rf, j), j), tol, f"j={j + 1}")
            for k in range(system.m):
                Xg = system.xi_j(integrate_j(system, g, k), k)
                weight = {
                    i: 0j if i in on_variety else f[i] * g[i] * p_vals[j][i] * p_vals[k][i] / sums[i]
                    for i in range(len(E))
                }
                report.add_matrix("xi_product_via_xi", Xf @ Xg, system.xi(integrate(weight, E)), tol, f"j={j + 1}, k={k + 1}")
                fgp = {i: f[i] * g[i] * p_vals[k][i] for i in range(len(E))}
                report.add_matrix("xi_product_via_xi_j", Xf @ Xg, system.xi_j(integrate_j(system, fgp, j), j), tol, f"j={j + 1}, k={k + 1}")
    return report


def _commutant_sample(system: EmbeddingSystem, rng: np.random.Generator, samples: int) -> list[np.ndarray]:
    members = [_subst(system, random_poly(rng, 2)) for _ in range(samples)]
    n = system.space.dim
    if n <= _COMMUTANT_BASIS_MAX_DIM:
        eye = np.eye(n)
        A, B = system.A, system.B
        lhs = np.vstack([np.kron(eye, A) - np.kron(A.T, eye), np.kron(eye, B) - np.kron(B.T, eye)])
        basis = scipy.linalg.null_space(lhs)
        for _ in range(samples):
            coeffs = rng.normal(size=basis.shape[1]) + 1j * rng.normal(size=basis.shape[1])
            members.append((basis @ coeffs).reshape((n, n), order="F"))
    return members


def commutant_residual(system: EmbeddingSystem, operators: list[np.ndarray], samples: int = 3, seed: int = 0) -> CheckReport:
    """Every operator commutes with a sample of ``{A, B}'``."""
    tol = system.tolerances.calculus
    report = CheckReport("bicommutant")
    rng = make_rng(seed)
    for C in _commutant_sample(system, rng, samples):
        for i, X in enumerate(operators):
            report.add_matrix("commutes_with_commutant", C @ X, X @ C, tol, f"operator {i}")
    return report


def verify_bicommutant(system: EmbeddingSystem, samples: int = 3, seed: int = 0) -> CheckReport:
    rng = make_rng(seed)
    operators = []
    for j in range(system.m):
        f = {k: random_complex(rng) for k in range(len(system.spectral))}
        operators.append(system.xi_j(integrate_j(system, f, j), j))
    operators.append(phi_of_N(random_function(system, rng)).matrix)
    return commutant_residual(system, operators, samples, seed + 1)


def verify_locality(system: EmbeddingSystem, samples: int = 3, seed: int = 0) -> CheckReport:
    """Values outside the effective set and ``Q(w)``-changes at points with ``E{w} = 0`` do not matter."""
    tol = system.tolerances.calculus
    report = CheckReport("locality")
    rng = make_rng(seed)
    effective = effective_set(system)
    for pt in system.points:
        if pt.key in effective:
            continue
        algebra = pt.algebra_A if pt.is_real else pt.algebra_B
        value = algebra.coset(random_poly(rng, 2))
        report.add_matrix("vanishes_off_effective_set", phi_of_N(delta(system, pt, value)).matrix, np.zeros((system.space.dim,) * 2), tol, str(pt))
    for _ in range(samples):
        phi = random_function(system, rng)
        report.add_matrix("restriction_invariant", phi_of_N(phi.restrict()).matrix, phi_of_N(phi).matrix, tol)
        for pt in system.real_points:
            h = random_poly(rng, 1) * pt.local_Q.groebner[0]
            changed = _add_at(phi, pt.key, pt.algebra_A.coset(h))
            if system.spectral_index_of(pt) is None:
                report.add_matrix("local_class_suffices", phi_of_N(changed).matrix, phi_of_N(phi).matrix, tol, str(pt))
            bump = delta(system, pt, pt.algebra_A.coset(h))
            try:
                g = local_correction(bump, pt)
            except KreinCalcError as exc:
                report.flag("local_correction", False, f"{pt}: {exc}")
                continue
            witness = psi_apply(system, Triple(system, Poly2.zero(), g)).matrix
            report.add_matrix("local_correction", witness, phi_of_N(bump).matrix, tol, str(pt))
    return report


def _add_at(phi: CalcFunction, key, c: Coset) -> CalcFunction:
    real = dict(phi.real_cosets)
    real[key] = real[key] + c
    return CalcFunction(phi.system, dict(phi.scalar_values), real, dict(phi.nonreal_cosets))


def verify_spectral_consequences(system: EmbeddingSystem) -> CheckReport:
    """Riesz projections at every variety point and the formula for sigma(N)."""
    report = CheckReport("spectral consequences")
    for pt in system.points:
        report.merge(riesz_check(system, pt))
    report.merge(spectrum_formula_check(system))
    return report


def verify_inversion(system: EmbeddingSystem, phi: CalcFunction) -> CheckReport:
    tol = system.tolerances.calculus
    report = CheckReport("inversion")
    inverse = phi_of_N(calc_invert(phi)).matrix
    value = phi_of_N(phi).matrix
    eye = np.eye(system.space.dim)
    report.add_matrix("left_inverse", inverse @ value, eye, tol)
    report.add_matrix("right_inverse", value @ inverse, eye, tol)
    return report


def verify_calculus(system: EmbeddingSystem, samples: int = 20, seed: int = 0) -> CheckReport:
    """Every calculus suite merged into one report."""
    report = CheckReport("calculus")
    report.merge(verify_homomorphism(system, samples, seed))
    report.merge(verify_polynomials(system, max(1, samples // 4), seed + 1))
    report.merge(verify_triples(system, max(1, samples // 2), seed + 2))
    report.merge(verify_decompositions(system, max(1, samples // 4), seed + 3))
    report.merge(verify_product_rules(system, 3, seed + 4))
    report.merge(verify_bicommutant(system, 3, seed + 5))
    report.merge(verify_locality(system, 3, seed + 6))
    report.merge(verify_spectral_consequences(system))
    logger.debug("calculus suite: %d checks, %d failed", len(report.entries), len(report.failures()))
    return report
