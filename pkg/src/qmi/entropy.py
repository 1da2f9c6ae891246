"""Entropy functionals and the closed-form continuity bounds.

All quantities take a ``base`` argument ("bits" or "nats"); bounds and
entropies compared against each other must share one base, and
EntropyValue carries its base so accidental mixing is detectable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BoundInapplicableError,
    DimensionMismatchError,
    NegativeCMIError,
)
from .qmat import DensityMatrix, HermitianOperator, partial_trace, trace_norm

BASES = ("bits", "nats")
# eigensolver jitter absorbed before eta: [-1e-10, 0) -> 0, (1, 1+1e-10] -> 1
SPECTRUM_CLAMP = 1e-10


def _check_base(base: str) -> str:
    if base not in BASES:
        raise ValueError(f"base must be one of {BASES}, got {base!r}")
    return base


def _log(x: float, base: str) -> float:
    return math.log2(x) if base == "bits" else math.log(x)


@dataclass(frozen=True)
class EntropyValue:
    """An entropy with its log base attached."""

    value: float
    base: str = "bits"

    def __post_init__(self):
        _check_base(self.base)

    def to(self, base: str) -> "EntropyValue":
        _check_base(base)
        if base == self.base:
            return self
        factor = math.log(2.0) if base == "nats" else 1.0 / math.log(2.0)
        return EntropyValue(self.value * factor, base)

    def __float__(self) -> float:
        return float(self.value)


def eta(x: float, base: str = "bits") -> float:
    """-x log x on [0, 1], with eta(0) = eta(1) = 0 exactly."""
    _check_base(base)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"eta requires 0 <= x <= 1, got {x!r}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * _log(x, base)


def _eta_sum(eigs: np.ndarray, base: str) -> float:
    """Sum of eta over a spectrum, clamping eigensolver jitter into [0, 1]."""
    lo, hi = -SPECTRUM_CLAMP, 1.0 + SPECTRUM_CLAMP
    if eigs.size and (eigs.min() < lo or eigs.max() > hi):
        raise ValueError(
            f"spectrum outside [0,1] beyond clamp tolerance: "
            f"[{eigs.min()!r}, {eigs.max()!r}]"
        )
    lam = np.clip(eigs, 0.0, 1.0)
    lam = lam[lam > 0.0]
    s = float(-np.sum(lam * np.log2(lam)))
    return s if base == "bits" else s * math.log(2.0)


def von_neumann_entropy(rho: DensityMatrix, base: str = "bits") -> EntropyValue:
    """S(rho) = sum of eta over the spectrum."""
    _check_base(base)
    return EntropyValue(_eta_sum(rho.eigenvalues, base), base)


def conditional_entropy(rho12: DensityMatrix, base: str = "bits") -> EntropyValue:
    """S(12|2) = S(rho12) - S(rho2) for a state with exactly two factors.

    Negative for sufficiently entangled states (e.g. -1 bit for a Bell pair).
    """
    _check_base(base)
    if len(rho12.dims) != 2:
        raise DimensionMismatchError(
            f"conditional entropy needs exactly 2 subsystems, got dims {rho12.dims}"
        )
    s12 = _eta_sum(rho12.eigenvalues, base)
    s2 = _eta_sum(partial_trace(rho12, (1,)).eigenvalues, base)
    return EntropyValue(s12 - s2, base)


def _clamp_nonneg(x: float, tol: float) -> float:
    """Clamp tiny negatives to 0; anything below -tol is a numerical fault."""
    if x < -tol:
        raise NegativeCMIError(
            f"conditional mutual information {x!r} below -{tol:.0e}; "
            "strong subadditivity forbids this for valid states"
        )
    return max(x, 0.0)


def conditional_mutual_information(
    rho123: DensityMatrix, base: str = "bits", tol: float = 1e-9
) -> float:
    """I(1;2|3) = S(13|3) - S(123|23) for a state with exactly three factors.

    Nonnegative by strong subadditivity; values in [-tol, 0) are clamped to
    zero and anything lower raises NegativeCMIError.
    """
    _check_base(base)
    if len(rho123.dims) != 3:
        raise DimensionMismatchError(
            f"conditional mutual information needs exactly 3 subsystems, "
            f"got dims {rho123.dims}"
        )
    s123 = _eta_sum(rho123.eigenvalues, base)
    s13 = _eta_sum(partial_trace(rho123, (0, 2)).eigenvalues, base)
    s23 = _eta_sum(partial_trace(rho123, (1, 2)).eigenvalues, base)
    s3 = _eta_sum(partial_trace(rho123, (2,)).eigenvalues, base)
    return _clamp_nonneg((s13 - s3) - (s123 - s23), tol)


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Tr|rho - sigma|, the trace-norm distance in [0, 2]."""
    if rho.total_dim != sigma.total_dim:
        raise DimensionMismatchError(
            f"total dimensions differ: {rho.total_dim} vs {sigma.total_dim}"
        )
    return trace_norm(HermitianOperator(rho.mat - sigma.mat))


def _check_epsilon(epsilon: float, fallback: float) -> float:
    epsilon = float(epsilon)
    if not 0.0 <= epsilon <= 1.0:
        raise BoundInapplicableError(epsilon, fallback)
    return epsilon


def cond_entropy_continuity_bound(
    epsilon: float, d1: int, base: str = "bits"
) -> float:
    """4 eps log(d1) + 2 eta(1-eps) + 2 eta(eps).

    Caps |S(rho12|rho2) - S(sigma12|sigma2)| at trace distance eps; free of
    the second factor's dimension.  Outside 0 <= eps <= 1 raises
    BoundInapplicableError carrying the a-priori cap 2 log d1.
    """
    _check_base(base)
    d1 = int(d1)
    epsilon = _check_epsilon(epsilon, 2.0 * _log(d1, base))
    return (
        4.0 * epsilon * _log(d1, base)
        + 2.0 * eta(1.0 - epsilon, base)
        + 2.0 * eta(epsilon, base)
    )


def mixture_cond_entropy_bound(epsilon: float, d1: int, base: str = "bits") -> float:
    """2 eps log(d1) + eta(1-eps) + eta(eps).

    Caps |S(rho12|rho2) - S(gamma12|gamma2)| when gamma is the eps-mixture
    of rho with any other state.
    """
    _check_base(base)
    d1 = int(d1)
    epsilon = _check_epsilon(epsilon, 2.0 * _log(d1, base))
    return (
        2.0 * epsilon * _log(d1, base)
        + eta(1.0 - epsilon, base)
        + eta(epsilon, base)
    )


def entropy_continuity_bound(epsilon: float, d: int, base: str = "bits") -> float:
    """2 eps log(d) + eta(eps) + eta(1-eps), a cap on |S(rho) - S(sigma)|.

    ``d`` is the dimension of the span of the two supports (see
    support_span_dim), or the ambient dimension if the caller prefers.
    """
    _check_base(base)
    d = int(d)
    epsilon = _check_epsilon(epsilon, _log(d, base) if d > 1 else 0.0)
    return 2.0 * epsilon * _log(d, base) + eta(epsilon, base) + eta(1.0 - epsilon, base)


def support_span_dim(
    rho: DensityMatrix, sigma: DensityMatrix, thresh: float = 1e-10
) -> int:
    """Rank of the support of rho + sigma (eigenvalues above ``thresh``)."""
    if rho.total_dim != sigma.total_dim:
        raise DimensionMismatchError(
            f"total dimensions differ: {rho.total_dim} vs {sigma.total_dim}"
        )
    w = np.linalg.eigvalsh(rho.mat + sigma.mat)
    return int(np.sum(w > thresh))
