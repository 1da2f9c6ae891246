"""Simultaneous mixture decomposition of a pair of states.

Given states rho and sigma at trace distance eps in (0, 1], builds the
auxiliary state gamma = (1-eps) rho + |rho - sigma| together with
rho_tilde = |rho - sigma| / eps and sigma_tilde = ((2-eps) P + eps N) / eps
(P, N the orthogonal positive/negative parts of rho - sigma), so that

    gamma = (1-eps) rho + eps rho_tilde = (1-eps) sigma + eps sigma_tilde.

The five states sit in the proportional-mixture picture of the classical
intercept theorem, hence the module name.  check_lemma_chain and
check_theorem_assembly measure every inequality this construction feeds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entropy import (
    cond_entropy_continuity_bound,
    conditional_entropy,
    eta,
    mixture_cond_entropy_bound,
    von_neumann_entropy,
    _check_base,
    _log,
)
from .errors import DegenerateCaseError, DimensionMismatchError, OutOfRegimeError
from .qmat import (
    DensityMatrix,
    HermitianOperator,
    operator_abs,
    positive_negative_parts,
    validate_density,
)

# below this the positive/negative split of rho - sigma is pure noise
DEGENERATE_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class ThalesDecomposition:
    epsilon: float
    gamma: DensityMatrix
    rho_tilde: DensityMatrix
    sigma_tilde: DensityMatrix
    rho: DensityMatrix
    sigma: DensityMatrix


def decompose(rho: DensityMatrix, sigma: DensityMatrix) -> ThalesDecomposition:
    """Build (eps, gamma, rho_tilde, sigma_tilde) for a pair of states.

    Raises DegenerateCaseError at eps = 0 (callers must short-circuit; the
    identities are trivial and rho_tilde would be 0/0) and OutOfRegimeError
    for eps > 1.
    """
    if rho.dims != sigma.dims:
        raise DimensionMismatchError(
            f"states live on different factorizations: {rho.dims} vs {sigma.dims}"
        )
    diff = HermitianOperator(rho.mat - sigma.mat)
    p, n = positive_negative_parts(diff)
    epsilon = p.trace() + n.trace()  # = Tr|rho - sigma|
    if epsilon <= DEGENERATE_EPS:
        raise DegenerateCaseError(
            f"trace distance {epsilon!r} is (numerically) zero; "
            "the decomposition is undefined for identical states"
        )
    if epsilon > 1.0:
        raise OutOfRegimeError(
            f"trace distance {epsilon!r} exceeds 1; outside the regime"
        )
    abs_diff = p.entries + n.entries
    gamma = validate_density((1.0 - epsilon) * rho.mat + abs_diff, rho.dims)
    rho_tilde = validate_density(abs_diff / epsilon, rho.dims)
    sigma_tilde = validate_density(
        ((2.0 - epsilon) * p.entries + epsilon * n.entries) / epsilon, rho.dims
    )
    return ThalesDecomposition(epsilon, gamma, rho_tilde, sigma_tilde, rho, sigma)


@dataclass(frozen=True)
class LemmaChainReport:
    """Measured values of every step bounding |S(rho|.) - S(gamma|.)|.

    ``diff`` is S(rho12|rho2) - S(gamma12|gamma2); the chain checked is

        diff <= eps * tilde_gap <= 2 eps log d1            (upper)
        diff >= eps * tilde_gap - eta_cap >= -2 eps log d1 - eta_cap  (lower)

    with tilde_gap = S(rho|.) - S(rho_tilde|.) and eta_cap = eta(1-eps)+eta(eps).
    """

    epsilon: float
    d1: int
    base: str
    tol: float
    diff: float
    tilde_gap: float
    concavity_gap: float
    marginal_concavity_gap: float
    mixing_gain: float
    eta_cap: float
    lemma_lhs: float
    lemma_rhs: float
    ok_concavity: bool
    ok_marginal_concavity: bool
    ok_mixing_upper: bool
    ok_upper_chain: bool
    ok_lower_chain: bool
    ok_lemma: bool

    @property
    def all_ok(self) -> bool:
        return (
            self.ok_concavity
            and self.ok_marginal_concavity
            and self.ok_mixing_upper
            and self.ok_upper_chain
            and self.ok_lower_chain
            and self.ok_lemma
        )


def check_lemma_chain(
    rho: DensityMatrix,
    rho_tilde: DensityMatrix,
    epsilon: float,
    base: str = "bits",
    tol: float = 1e-9,
) -> LemmaChainReport:
    """Form gamma = (1-eps) rho + eps rho_tilde and measure the whole chain."""
    _check_base(base)
    if rho.dims != rho_tilde.dims:
        raise DimensionMismatchError(
            f"states live on different factorizations: {rho.dims} vs "
            f"{rho_tilde.dims}"
        )
    if len(rho.dims) != 2:
        raise DimensionMismatchError(f"need bipartite states, got dims {rho.dims}")
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must be in [0, 1], got {epsilon!r}")
    d1 = rho.dims[0]
    gamma = validate_density(
        (1.0 - epsilon) * rho.mat + epsilon * rho_tilde.mat, rho.dims
    )

    s_rho = float(von_neumann_entropy(rho, base))
    s_tilde = float(von_neumann_entropy(rho_tilde, base))
    s_gamma = float(von_neumann_entropy(gamma, base))
    c_rho = float(conditional_entropy(rho, base))
    c_tilde = float(conditional_entropy(rho_tilde, base))
    c_gamma = float(conditional_entropy(gamma, base))
    s2_rho = s_rho - c_rho
    s2_tilde = s_tilde - c_tilde
    s2_gamma = s_gamma - c_gamma

    eta_cap = eta(1.0 - epsilon, base) + eta(epsilon, base)
    two_eps_logd = 2.0 * epsilon * _log(d1, base)
    diff = c_rho - c_gamma
    tilde_gap = c_rho - c_tilde

    concavity_gap = c_gamma - ((1.0 - epsilon) * c_rho + epsilon * c_tilde)
    marginal_gap = s2_gamma - ((1.0 - epsilon) * s2_rho + epsilon * s2_tilde)
    mixing_gain = s_gamma - ((1.0 - epsilon) * s_rho + epsilon * s_tilde)

    lemma_lhs = abs(diff)
    lemma_rhs = mixture_cond_entropy_bound(epsilon, d1, base)

    return LemmaChainReport(
        epsilon=epsilon,
        d1=d1,
        base=base,
        tol=tol,
        diff=diff,
        tilde_gap=tilde_gap,
        concavity_gap=concavity_gap,
        marginal_concavity_gap=marginal_gap,
        mixing_gain=mixing_gain,
        eta_cap=eta_cap,
        lemma_lhs=lemma_lhs,
        lemma_rhs=lemma_rhs,
        ok_concavity=concavity_gap >= -tol,
        ok_marginal_concavity=marginal_gap >= -tol,
        ok_mixing_upper=(-tol <= mixing_gain <= eta_cap + tol),
        ok_upper_chain=(
            diff <= epsilon * tilde_gap + tol
            and epsilon * tilde_gap <= two_eps_logd + tol
        ),
        ok_lower_chain=(
            diff >= epsilon * tilde_gap - eta_cap - tol
            and epsilon * tilde_gap >= -two_eps_logd - tol
        ),
        ok_lemma=lemma_lhs <= lemma_rhs + tol,
    )


@dataclass(frozen=True)
class AssemblyReport:
    """Triangle-inequality assembly through gamma, with the final cap."""

    epsilon: float
    d1: int
    base: str
    tol: float
    lhs: float
    gap_rho: float
    gap_sigma: float
    triangle_sum: float
    rhs: float
    margin: float
    ok_triangle: bool
    ok_gaps: bool
    ok_bound: bool

    @property
    def all_ok(self) -> bool:
        return self.ok_triangle and self.ok_gaps and self.ok_bound


def check_theorem_assembly(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    base: str = "bits",
    tol: float = 1e-9,
) -> AssemblyReport:
    """Verify |dS(cond)| <= gap_rho + gap_sigma <= 4 eps log d1 + 2 eta + 2 eta.

    gap_rho and gap_sigma are the distances of rho and sigma from the shared
    mixture gamma in conditional entropy; each is capped by the mixture bound,
    and their sum by the full continuity bound.
    """
    _check_base(base)
    if len(rho.dims) != 2:
        raise DimensionMismatchError(f"need bipartite states, got dims {rho.dims}")
    dec = decompose(rho, sigma)
    d1 = rho.dims[0]
    c_rho = float(conditional_entropy(rho, base))
    c_sigma = float(conditional_entropy(sigma, base))
    c_gamma = float(conditional_entropy(dec.gamma, base))
    lhs = abs(c_rho - c_sigma)
    gap_rho = abs(c_rho - c_gamma)
    gap_sigma = abs(c_sigma - c_gamma)
    triangle_sum = gap_rho + gap_sigma
    rhs = cond_entropy_continuity_bound(dec.epsilon, d1, base)
    half = mixture_cond_entropy_bound(dec.epsilon, d1, base)
    return AssemblyReport(
        epsilon=dec.epsilon,
        d1=d1,
        base=base,
        tol=tol,
        lhs=lhs,
        gap_rho=gap_rho,
        gap_sigma=gap_sigma,
        triangle_sum=triangle_sum,
        rhs=rhs,
        margin=rhs - lhs,
        ok_triangle=lhs <= triangle_sum + tol,
        ok_gaps=(gap_rho <= half + tol and gap_sigma <= half + tol),
        ok_bound=(triangle_sum <= rhs + tol and lhs <= rhs + tol),
    )


def mixture_residuals(dec: ThalesDecomposition) -> dict[str, float]:
    """Max-entry residuals of the defining identities; all should be ~1e-10."""
    e = dec.epsilon
    r1 = np.max(
        np.abs(dec.gamma.mat - ((1 - e) * dec.rho.mat + e * dec.rho_tilde.mat))
    )
    r2 = np.max(
        np.abs(dec.gamma.mat - ((1 - e) * dec.sigma.mat + e * dec.sigma_tilde.mat))
    )
    diff = HermitianOperator(dec.rho.mat - dec.sigma.mat)
    r3 = np.max(np.abs(dec.rho_tilde.mat * e - operator_abs(diff).entries))
    return {
        "gamma_vs_rho_mixture": float(r1),
        "gamma_vs_sigma_mixture": float(r2),
        "rho_tilde_definition": float(r3),
    }
