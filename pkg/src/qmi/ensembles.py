"""Seeded random state generators for the verification harnesses.

Streams are splittable: every draw is a pure function of
(master seed, trial index), so serial and parallel runs over the same
configuration produce identical ensembles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .entropy import trace_distance
from .errors import DimensionMismatchError
from .qmat import DensityMatrix, trace_norm, HermitianOperator, validate_density, with_dims

DEFAULT_SEED = 3735928559

KINDS = ("haar_pure", "induced_mixed", "rank_limited", "perturbation_pair")


def stream(seed: int, *key: int) -> np.random.Generator:
    """Decorrelated generator for (seed, key...); key entries must be >= 0."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    )


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(int(seed))


def haar_pure(d: int, seed) -> DensityMatrix:
    """Rank-one projector onto a Haar-distributed unit vector."""
    rng = _as_rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    v /= np.linalg.norm(v)
    return validate_density(np.outer(v, v.conj()), (d,))


def induced_mixed(d: int, ancilla: int, seed) -> DensityMatrix:
    """Partial trace over an ``ancilla``-dimensional factor of a Haar pure
    state on d * ancilla; rank min(d, ancilla)."""
    rng = _as_rng(seed)
    g = rng.standard_normal((d, ancilla)) + 1j * rng.standard_normal((d, ancilla))
    m = g @ g.conj().T
    return validate_density(m / np.trace(m).real, (d,))


def rank_limited(d: int, rank: int, seed) -> DensityMatrix:
    """Random mixed state of rank at most ``rank`` (induced with a small ancilla)."""
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    return induced_mixed(d, rank, seed)


def haar_unitary(d: int, seed) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix, with the
    R-diagonal phase correction."""
    rng = _as_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    ph = np.diag(r).copy()
    ph /= np.abs(ph)
    return q * ph


class PerturbationPair(NamedTuple):
    rho: DensityMatrix
    sigma: DensityMatrix
    epsilon: float
    target_reached: bool


def perturbation_pair(
    rho: DensityMatrix, target_epsilon: float, seed, tol: float = 1e-6
) -> PerturbationPair:
    """Produce (rho, sigma) with trace distance ~ target_epsilon.

    sigma = (1-t) rho + t tau for a random state tau; t is found by bisection
    until the distance lands within ``tol`` of the target.  If even t = 1
    falls short, the closest achievable pair is returned with
    target_reached=False.
    """
    if not 0.0 <= target_epsilon <= 1.0:
        raise ValueError(f"target_epsilon must be in [0, 1], got {target_epsilon!r}")
    if target_epsilon == 0.0:
        return PerturbationPair(rho, rho, 0.0, True)
    rng = _as_rng(seed)
    tau = with_dims(induced_mixed(rho.total_dim, rho.total_dim, rng), rho.dims)

    def dist(t: float) -> float:
        return trace_norm(HermitianOperator(t * (tau.mat - rho.mat)))

    hi_val = dist(1.0)
    if hi_val <= target_epsilon:
        t = 1.0
        reached = hi_val >= target_epsilon - tol
    else:
        lo, hi = 0.0, 1.0
        lo_val = 0.0
        reached = True
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            mid_val = dist(mid)
            # distance along the mixing segment is monotone in t
            if not lo_val - 1e-12 <= mid_val <= hi_val + 1e-12:
                raise ArithmeticError(
                    "trace distance not monotone along mixing segment"
                )
            if abs(mid_val - target_epsilon) <= tol * 0.1:
                lo = hi = mid
                break
            if mid_val < target_epsilon:
                lo, lo_val = mid, mid_val
            else:
                hi, hi_val = mid, mid_val
        t = 0.5 * (lo + hi)
    sigma = validate_density((1.0 - t) * rho.mat + t * tau.mat, rho.dims)
    achieved = trace_distance(rho, sigma)
    return PerturbationPair(rho, sigma, achieved, reached)


@dataclass(frozen=True)
class EnsembleSpec:
    """Everything needed to regenerate an ensemble deterministically."""

    kind: str
    dims: tuple[int, ...]
    ancilla_dim: int | None = None
    target_epsilon: float | None = None
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if self.target_epsilon is not None and not 0.0 <= self.target_epsilon <= 1.0:
            raise ValueError(
                f"target_epsilon must be in [0, 1], got {self.target_epsilon!r}"
            )

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "dims": list(self.dims),
            "ancilla_dim": self.ancilla_dim,
            "target_epsilon": self.target_epsilon,
            "seed": self.seed,
        }


def draw_state(spec: EnsembleSpec, index: int) -> DensityMatrix:
    """Single state for trial ``index``; pure function of (spec, index)."""
    rng = stream(spec.seed, index)
    d = spec.total_dim
    if spec.kind == "haar_pure":
        out = haar_pure(d, rng)
    elif spec.kind == "induced_mixed":
        out = induced_mixed(d, spec.ancilla_dim or d, rng)
    elif spec.kind == "rank_limited":
        if spec.ancilla_dim is None:
            raise DimensionMismatchError("rank_limited needs ancilla_dim (the rank)")
        out = rank_limited(d, spec.ancilla_dim, rng)
    else:
        raise ValueError(f"draw_state not defined for kind {spec.kind!r}")
    return with_dims(out, spec.dims)


def draw_pair(spec: EnsembleSpec, index: int) -> tuple[DensityMatrix, DensityMatrix]:
    """Pair of states for trial ``index``; pure function of (spec, index)."""
    rng = stream(spec.seed, index)
    d = spec.total_dim
    if spec.kind == "haar_pure":
        a, b = haar_pure(d, rng), haar_pure(d, rng)
    elif spec.kind == "induced_mixed":
        k = spec.ancilla_dim or d
        a, b = induced_mixed(d, k, rng), induced_mixed(d, k, rng)
    elif spec.kind == "rank_limited":
        if spec.ancilla_dim is None:
            raise DimensionMismatchError("rank_limited needs ancilla_dim (the rank)")
        a, b = rank_limited(d, spec.ancilla_dim, rng), rank_limited(
            d, spec.ancilla_dim, rng
        )
    elif spec.kind == "perturbation_pair":
        base = with_dims(induced_mixed(d, spec.ancilla_dim or d, rng), spec.dims)
        target = (
            spec.target_epsilon
            if spec.target_epsilon is not None
            else float(rng.uniform(0.0, 1.0))
        )
        pair = perturbation_pair(base, target, rng)
        return pair.rho, pair.sigma
    else:  # pragma: no cover
        raise ValueError(f"unknown ensemble kind {spec.kind!r}")
    return with_dims(a, spec.dims), with_dims(b, spec.dims)
