"""Upper-bound estimation of squashed entanglement.

The estimator minimizes half the conditional mutual information I(1;2|3)
over extensions of a bipartite state.  Extensions are generated by acting
on the purifying system with a Stinespring isometry W = expm(G)[:, :r]
(G anti-Hermitian, so W is exactly an isometry for any parameter vector),
then tracing out the residual environment.  Minimization is derivative-free
(Nelder-Mead) with random restarts; the result is an upper bound on the
squashed entanglement restricted to extensions of dimension <= d3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .ensembles import DEFAULT_SEED, stream
from .entropy import (
    cond_entropy_continuity_bound,
    conditional_mutual_information,
    trace_distance,
    _check_base,
)
from .errors import DimensionMismatchError, IsometryError, OutOfRegimeError
from .qmat import DensityMatrix, validate_density

RANK_TOL = 1e-12
MARGINAL_TOL = 1e-9
ISOMETRY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ExtensionParams:
    """Parameter vector for one extension of a rank-``rank`` state.

    ``params`` has length (d3*env_dim)**2 and parameterizes a Hermitian H;
    the isometry is the first ``rank`` columns of expm(iH).
    """

    d3: int
    env_dim: int
    rank: int
    params: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.params, dtype=float)
        d = self.d3 * self.env_dim
        if d < self.rank:
            raise DimensionMismatchError(
                f"d3*env_dim = {d} cannot carry an isometry from rank {self.rank}"
            )
        if p.shape != (d * d,):
            raise DimensionMismatchError(
                f"expected {d * d} parameters for d3={self.d3}, "
                f"env_dim={self.env_dim}, got shape {p.shape}"
            )
        object.__setattr__(self, "params", p)


def n_params(d3: int, env_dim: int) -> int:
    return (d3 * env_dim) ** 2


def _hermitian_from_params(p: np.ndarray, d: int) -> np.ndarray:
    h = np.zeros((d, d), dtype=complex)
    idx = np.triu_indices(d, 1)
    n_off = len(idx[0])
    h[np.diag_indices(d)] = p[:d]
    h[idx] = p[d : d + n_off] + 1j * p[d + n_off :]
    h[(idx[1], idx[0])] = np.conj(h[idx])
    return h


def _params_from_hermitian(h: np.ndarray) -> np.ndarray:
    d = h.shape[0]
    idx = np.triu_indices(d, 1)
    return np.concatenate(
        [np.real(np.diag(h)), np.real(h[idx]), np.imag(h[idx])]
    )


def isometry(p: ExtensionParams) -> np.ndarray:
    """Column-orthonormal (d3*env_dim) x rank matrix from the parameters."""
    d = p.d3 * p.env_dim
    h = _hermitian_from_params(p.params, d)
    w, v = np.linalg.eigh(h)
    u = (v * np.exp(1j * w)) @ v.conj().T
    iso = u[:, : p.rank]
    gram = iso.conj().T @ iso
    if np.max(np.abs(gram - np.eye(p.rank))) > ISOMETRY_TOL:
        raise IsometryError("parameterized map failed the isometry check")
    return iso


def params_from_isometry(w: np.ndarray, d3: int, env_dim: int) -> np.ndarray:
    """Invert ``isometry`` approximately: complete W to a unitary and take the
    matrix log.  Used to warm-start searches from a known extension."""
    d = d3 * env_dim
    rank = w.shape[1]
    if w.shape[0] != d:
        raise DimensionMismatchError(
            f"isometry rows {w.shape[0]} do not match d3*env_dim = {d}"
        )
    # orthonormal completion of the column span
    q, _ = np.linalg.qr(np.hstack([w, np.eye(d, dtype=complex)]))
    u = np.hstack([w, q[:, rank:d]])
    evals, evecs = np.linalg.eig(u)
    evals = evals / np.abs(evals)
    h = (evecs * np.angle(evals)) @ np.linalg.inv(evecs)
    h = (h + h.conj().T) / 2.0
    return _params_from_hermitian(h)


def _rank(rho: DensityMatrix) -> int:
    return max(1, int(np.sum(rho.eigenvalues > RANK_TOL)))


def _purification_ket(rho12: DensityMatrix) -> tuple[np.ndarray, int]:
    """Unit vector on H12 (x) C^r with marginal rho12; r = rank."""
    if len(rho12.dims) != 2:
        raise DimensionMismatchError(
            f"purification needs a bipartite state, got dims {rho12.dims}"
        )
    w, v = np.linalg.eigh(rho12.mat)
    w, v = w[::-1], v[:, ::-1]
    r = max(1, int(np.sum(w > RANK_TOL)))
    lam = np.clip(w[:r], 0.0, None)
    # psi[x, k] = sqrt(lam_k) v[x, k]
    psi = (v[:, :r] * np.sqrt(lam)).reshape(-1)
    psi /= np.linalg.norm(psi)
    return psi, r


def purify(rho12: DensityMatrix) -> DensityMatrix:
    """Pure state on dims [d1, d2, r] whose (1,2) marginal is rho12."""
    psi, r = _purification_ket(rho12)
    d1, d2 = rho12.dims
    return validate_density(np.outer(psi, psi.conj()), (d1, d2, r))


def extend(rho12: DensityMatrix, p: ExtensionParams) -> DensityMatrix:
    """Apply the parameterized isometry to the purifying system and trace the
    environment, yielding an extension on dims [d1, d2, d3].

    The (1,2) marginal is checked against rho12 within 1e-9; a violation
    raises IsometryError since the construction guarantees it.
    """
    psi, r = _purification_ket(rho12)
    if p.rank != r:
        raise DimensionMismatchError(
            f"params built for rank {p.rank}, state has rank {r}"
        )
    return _extension_from_ket(psi, rho12.dims, p, marginal=rho12.mat)


def _extension_from_ket(
    psi: np.ndarray,
    dims12: tuple[int, int],
    p: ExtensionParams,
    marginal: np.ndarray | None = None,
) -> DensityMatrix:
    """Build the extension; with ``marginal`` given, enforce recovery of the
    (1,2) marginal within MARGINAL_TOL on this very evaluation."""
    d1, d2 = dims12
    d12 = d1 * d2
    w = isometry(p)  # (d3*env, r)
    lifted = psi.reshape(d12, p.rank) @ w.T  # (d12, d3*env)
    m = lifted.reshape(d12 * p.d3, p.env_dim)
    rho123 = m @ m.conj().T
    if marginal is not None:
        marg = np.trace(rho123.reshape(d12, p.d3, d12, p.d3), axis1=1, axis2=3)
        if np.max(np.abs(marg - marginal)) > MARGINAL_TOL:
            raise IsometryError("extension lost the (1,2) marginal")
    return validate_density(rho123, (d1, d2, p.d3))


@dataclass(frozen=True, eq=False)
class EsqEstimate:
    """Best upper bound found, with enough trace to audit the search."""

    value: float
    base: str
    d3: int
    env_dim: int
    rank: int
    restarts: int
    iterations: int
    converged: bool
    restart_values: tuple[float, ...]
    restart_traces: tuple[tuple[float, ...], ...]
    best_params: np.ndarray

    def to_dict(self, with_traces: bool = True) -> dict:
        out = {
            "estimate": self.value,
            "base": self.base,
            "d3": self.d3,
            "env_dim": self.env_dim,
            "rank": self.rank,
            "restarts": self.restarts,
            "iterations": self.iterations,
            "converged": self.converged,
            "restart_values": list(self.restart_values),
        }
        if with_traces:
            out["restart_traces"] = [list(t) for t in self.restart_traces]
            out["best_params"] = [float(x) for x in self.best_params]
        return out


def estimate_esq(
    rho12: DensityMatrix,
    d3: int | None = None,
    restarts: int = 8,
    *,
    env_dim: int | None = None,
    max_iter: int = 2000,
    ftol: float = 1e-8,
    initial_scale: float = 1.0,
    seed: int = DEFAULT_SEED,
    base: str = "bits",
    extra_starts: tuple[np.ndarray, ...] = (),
) -> EsqEstimate:
    """Minimize (1/2) I(1;2|3) over extensions with a d3-dimensional third
    system; returns the best value found (an upper bound).

    Restart 0 always starts from params = 0, which realizes the point channel
    rho12 (x) |0><0| and therefore caps the estimate at half the mutual
    information.  Remaining restarts use decorrelated random starts; any
    ``extra_starts`` vectors are appended as additional restarts.  On hitting
    the iteration cap the best-so-far is returned with converged=False.
    """
    _check_base(base)
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    psi, r = _purification_ket(rho12)
    d3 = int(d3) if d3 is not None else 2 * r
    env = int(env_dim) if env_dim is not None else r
    if d3 * env < r:
        env = -(-r // d3)  # smallest environment able to carry the isometry
    npar = n_params(d3, env)

    def objective(pvec: np.ndarray) -> float:
        p = ExtensionParams(d3, env, r, pvec)
        rho123 = _extension_from_ket(psi, rho12.dims, p, marginal=rho12.mat)
        return 0.5 * conditional_mutual_information(rho123, base)

    starts: list[np.ndarray] = [np.zeros(npar)]
    for i in range(1, restarts):
        rng = stream(seed, i)
        starts.append(rng.normal(0.0, initial_scale, npar))
    starts.extend(np.asarray(s, dtype=float) for s in extra_starts)

    best_val = math.inf
    best_params = starts[0]
    best_converged = False
    values, traces = [], []
    total_iter = 0
    for p0 in starts:
        seen = math.inf
        running: list[float] = []

        def watched(pvec: np.ndarray) -> float:
            nonlocal seen
            val = objective(pvec)
            seen = min(seen, val)
            return val

        def track(_xk):
            # running best over evaluations; monotone by construction, and
            # Nelder-Mead never loses its best vertex anyway
            running.append(seen)

        res = minimize(
            watched,
            p0,
            method="Nelder-Mead",
            callback=track,
            options={
                "maxiter": max_iter,
                "fatol": ftol,
                "xatol": 1e-6,
                "disp": False,
            },
        )
        val = min(seen, float(res.fun))
        running.append(val)
        values.append(val)
        traces.append(tuple(running))
        total_iter += int(res.nit)
        if val < best_val:
            best_val = val
            best_params = np.asarray(res.x, dtype=float)
            best_converged = bool(res.success)

    return EsqEstimate(
        value=float(best_val),
        base=base,
        d3=d3,
        env_dim=env,
        rank=r,
        restarts=len(starts),
        iterations=total_iter,
        converged=best_converged,
        restart_values=tuple(values),
        restart_traces=tuple(traces),
        best_params=best_params,
    )


def lift_params(
    rho12: DensityMatrix, est: EsqEstimate, d3_new: int
) -> np.ndarray:
    """Embed the best isometry found at est.d3 into the parameter space of a
    larger d3, for warm-starting a wider search.

    The embedded extension has identical conditional mutual information, so a
    search seeded with the lifted vector can only improve on ``est.value``.
    """
    if d3_new < est.d3:
        raise ValueError(f"d3_new={d3_new} smaller than source d3={est.d3}")
    p = ExtensionParams(est.d3, est.env_dim, est.rank, est.best_params)
    w = isometry(p)  # (d3*env, r)
    blocks = w.reshape(est.d3, est.env_dim, est.rank)
    lifted = np.zeros((d3_new, est.env_dim, est.rank), dtype=complex)
    lifted[: est.d3] = blocks
    return params_from_isometry(
        lifted.reshape(d3_new * est.env_dim, est.rank), d3_new, est.env_dim
    )


@dataclass(frozen=True)
class ProbeReport:
    """Observed |estimate(rho) - estimate(sigma)| against the continuity
    bound for conditional entropy.  The bound is a reference line, not an
    asserted cap on squashed entanglement."""

    epsilon: float
    estimate_rho: float
    estimate_sigma: float
    difference: float
    reference_bound: float
    noise_allowance: float
    within_reference: bool
    base: str
    d3: int
    restarts: int

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "estimate_rho": self.estimate_rho,
            "estimate_sigma": self.estimate_sigma,
            "difference": self.difference,
            "reference_bound": self.reference_bound,
            "noise_allowance": self.noise_allowance,
            "within_reference": self.within_reference,
            "base": self.base,
            "d3": self.d3,
            "restarts": self.restarts,
        }


def esq_continuity_probe(
    rho12: DensityMatrix,
    sigma12: DensityMatrix,
    d3: int | None = None,
    restarts: int = 8,
    *,
    seed: int = DEFAULT_SEED,
    base: str = "bits",
    noise_allowance: float = 2e-2,
    **kwargs,
) -> ProbeReport:
    """Estimate both states with identical seed policy and compare the gap to
    the conditional-entropy continuity bound at their trace distance."""
    if rho12.dims != sigma12.dims:
        raise DimensionMismatchError(
            f"states live on different factorizations: {rho12.dims} vs "
            f"{sigma12.dims}"
        )
    epsilon = trace_distance(rho12, sigma12)
    if epsilon > 1.0:
        raise OutOfRegimeError(
            f"trace distance {epsilon!r} exceeds 1; probe not applicable"
        )
    # same seed for both estimates keeps the probe symmetric under swap
    est_r = estimate_esq(rho12, d3, restarts, seed=seed, base=base, **kwargs)
    est_s = estimate_esq(sigma12, d3, restarts, seed=seed, base=base, **kwargs)
    diff = abs(est_r.value - est_s.value)
    ref = cond_entropy_continuity_bound(epsilon, rho12.dims[0], base)
    return ProbeReport(
        epsilon=epsilon,
        estimate_rho=est_r.value,
        estimate_sigma=est_s.value,
        difference=diff,
        reference_bound=ref,
        noise_allowance=noise_allowance,
        within_reference=diff <= ref + noise_allowance,
        base=base,
        d3=est_r.d3,
        restarts=restarts,
    )
