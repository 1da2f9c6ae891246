"""Property-based verification harnesses with machine-readable reports.

Each harness runs seeded independent trials, checks an inequality at a
configurable tolerance, and aggregates order-independently (max/min/count),
so serial and multi-worker runs of the same configuration produce identical
reports.  Trials at epsilon > 1 are counted as inapplicable, never as
violations; per-trial numeric failures are counted, never fatal.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import thales
from .ensembles import DEFAULT_SEED, EnsembleSpec, draw_pair, stream
from .entropy import (
    cond_entropy_continuity_bound,
    conditional_entropy,
    entropy_continuity_bound,
    support_span_dim,
    trace_distance,
    von_neumann_entropy,
    _check_base,
)
from .errors import QmiError
from .stateio import state_to_dict

SCHEMA = "qmi-report/1"
DEFAULT_TOL = 1e-9
RHS_REFERENCE_EPSILONS = (0.25, 0.5, 0.75, 1.0)

# row: (index, epsilon, lhs, rhs, margin, status, internal_ok)
OK, INAPPLICABLE, ERROR = "ok", "inapplicable", "error"
_TRIAL_ERRORS = (QmiError, ArithmeticError, FloatingPointError, np.linalg.LinAlgError)


@dataclass(frozen=True)
class TrialReport:
    config: dict
    trials: int
    applicable_trials: int
    violations: int
    errors: int
    max_lhs: float | None
    min_margin: float | None
    max_epsilon: float | None
    witness: dict | None
    wall_time: float = field(compare=False)
    rows: tuple = field(compare=False, repr=False)

    def to_json_dict(self) -> dict:
        # wall_time and per-trial rows stay out so reports are byte-identical
        # across repeated runs and worker counts
        return {
            "schema": SCHEMA,
            "config": self.config,
            "trials": self.trials,
            "applicable_trials": self.applicable_trials,
            "violations": self.violations,
            "errors": self.errors,
            "max_lhs": self.max_lhs,
            "min_margin": self.min_margin,
            "max_epsilon": self.max_epsilon,
            "witness": self.witness,
        }


def _theorem_row(task, index):
    _, spec, d1, base, tol = task
    try:
        rho, sigma = draw_pair(spec, index)
        eps = trace_distance(rho, sigma)
        if eps > 1.0:
            return (index, eps, None, None, None, INAPPLICABLE, True)
        lhs = abs(
            float(conditional_entropy(rho, base))
            - float(conditional_entropy(sigma, base))
        )
        rhs = cond_entropy_continuity_bound(eps, d1, base)
        return (index, eps, lhs, rhs, rhs - lhs, OK, True)
    except _TRIAL_ERRORS:
        return (index, None, None, None, None, ERROR, False)


def _lemma_row(task, index):
    _, spec, d1, base, tol = task
    try:
        rho, rho_tilde = draw_pair(spec, index)
        eps = float(stream(spec.seed, index, 1).uniform(0.0, 1.0))
        chain = thales.check_lemma_chain(rho, rho_tilde, eps, base, tol)
        return (
            index,
            eps,
            chain.lemma_lhs,
            chain.lemma_rhs,
            chain.lemma_rhs - chain.lemma_lhs,
            OK,
            chain.all_ok,
        )
    except _TRIAL_ERRORS:
        return (index, None, None, None, None, ERROR, False)


def _entropy_row(task, index):
    _, spec, span_mode, base, tol = task
    try:
        rho, sigma = draw_pair(spec, index)
        eps = trace_distance(rho, sigma)
        if eps > 1.0:
            return (index, eps, None, None, None, INAPPLICABLE, True)
        d = spec.total_dim if span_mode == "ambient" else support_span_dim(rho, sigma)
        lhs = abs(
            float(von_neumann_entropy(rho, base))
            - float(von_neumann_entropy(sigma, base))
        )
        rhs = entropy_continuity_bound(eps, d, base)
        return (index, eps, lhs, rhs, rhs - lhs, OK, True)
    except _TRIAL_ERRORS:
        return (index, None, None, None, None, ERROR, False)


_ROW_FNS = {"theorem": _theorem_row, "lemma": _lemma_row, "entropy": _entropy_row}


def _run_chunk(task, indices):
    fn = _ROW_FNS[task[0]]
    return [fn(task, i) for i in indices]


def _run_trials(task, n_trials: int, workers: int) -> list:
    if workers <= 1 or n_trials < 2 * workers:
        return _run_chunk(task, range(n_trials))
    bounds = np.linspace(0, n_trials, workers + 1).astype(int)
    chunks = [range(bounds[i], bounds[i + 1]) for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_run_chunk, [task] * len(chunks), chunks))
    return [row for part in parts for row in part]


def _aggregate(rows, config, tol, seed, wall_time) -> TrialReport:
    applicable = [r for r in rows if r[5] == OK]
    errors = sum(1 for r in rows if r[5] == ERROR)
    violations = sum(
        1 for r in applicable if r[4] < -tol or not r[6]
    )
    max_lhs = min_margin = max_eps = None
    witness = None
    for r in applicable:
        if max_lhs is None or r[2] > max_lhs:
            max_lhs = r[2]
            witness = {
                "seed": seed,
                "index": r[0],
                "epsilon": r[1],
                "lhs": r[2],
                "rhs": r[3],
            }
        if min_margin is None or r[4] < min_margin:
            min_margin = r[4]
        if max_eps is None or r[1] > max_eps:
            max_eps = r[1]
    return TrialReport(
        config=config,
        trials=len(rows),
        applicable_trials=len(applicable),
        violations=violations,
        errors=errors,
        max_lhs=max_lhs,
        min_margin=min_margin,
        max_epsilon=max_eps,
        witness=witness,
        wall_time=wall_time,
        rows=tuple(rows),
    )


def _resolve_ensemble(ensemble, dims, seed) -> EnsembleSpec:
    if isinstance(ensemble, EnsembleSpec):
        return ensemble
    return EnsembleSpec(kind=ensemble or "perturbation_pair", dims=dims, seed=seed)


def run_theorem_trials(
    d1: int,
    d2: int,
    n_trials: int,
    ensemble=None,
    seed: int = DEFAULT_SEED,
    *,
    tol: float = DEFAULT_TOL,
    base: str = "bits",
    workers: int = 1,
) -> TrialReport:
    """Check |S(rho12|rho2) - S(sigma12|sigma2)| against the continuity bound
    on n_trials random pairs."""
    _check_base(base)
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    spec = _resolve_ensemble(ensemble, (d1, d2), seed)
    config = {
        "harness": "theorem",
        "d1": int(d1),
        "d2": int(d2),
        "trials": int(n_trials),
        "seed": int(spec.seed),
        "tolerance": tol,
        "base": base,
        "ensemble": spec.to_dict(),
    }
    t0 = time.perf_counter()
    rows = _run_trials(("theorem", spec, int(d1), base, tol), n_trials, workers)
    return _aggregate(rows, config, tol, spec.seed, time.perf_counter() - t0)


def run_lemma_trials(
    d1: int,
    d2: int,
    n_trials: int,
    seed: int = DEFAULT_SEED,
    *,
    tol: float = DEFAULT_TOL,
    base: str = "bits",
    workers: int = 1,
    ensemble=None,
) -> TrialReport:
    """Check the mixture bound and its full inequality chain on random
    (rho, rho_tilde, epsilon) triples; internal chain failures count as
    violations too."""
    _check_base(base)
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    spec = _resolve_ensemble(ensemble or "induced_mixed", (d1, d2), seed)
    config = {
        "harness": "lemma",
        "d1": int(d1),
        "d2": int(d2),
        "trials": int(n_trials),
        "seed": int(spec.seed),
        "tolerance": tol,
        "base": base,
        "ensemble": spec.to_dict(),
    }
    t0 = time.perf_counter()
    rows = _run_trials(("lemma", spec, int(d1), base, tol), n_trials, workers)
    return _aggregate(rows, config, tol, spec.seed, time.perf_counter() - t0)


def entropy_continuity_trials(
    d: int,
    n_trials: int,
    seed: int = DEFAULT_SEED,
    *,
    tol: float = DEFAULT_TOL,
    base: str = "bits",
    span_mode: str = "support",
    workers: int = 1,
    ensemble=None,
) -> TrialReport:
    """Check |S(rho) - S(sigma)| against the entropy continuity bound on
    random same-dimension pairs (epsilon <= 1 by construction)."""
    _check_base(base)
    if span_mode not in ("support", "ambient"):
        raise ValueError(f"span_mode must be 'support' or 'ambient', got {span_mode!r}")
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    spec = _resolve_ensemble(ensemble, (d,), seed)
    config = {
        "harness": "entropy",
        "d": int(d),
        "trials": int(n_trials),
        "seed": int(spec.seed),
        "tolerance": tol,
        "base": base,
        "span_mode": span_mode,
        "ensemble": spec.to_dict(),
    }
    t0 = time.perf_counter()
    rows = _run_trials(("entropy", spec, span_mode, base, tol), n_trials, workers)
    return _aggregate(rows, config, tol, spec.seed, time.perf_counter() - t0)


@dataclass(frozen=True)
class SweepReport:
    config: dict
    rows: tuple[dict, ...]
    all_rows_clean: bool
    rhs_reference_identical: bool
    wall_time: float = field(compare=False)
    reports: tuple[TrialReport, ...] = field(compare=False, repr=False)

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "config": self.config,
            "rows": list(self.rows),
            "all_rows_clean": self.all_rows_clean,
            "rhs_reference_identical": self.rhs_reference_identical,
        }


def dim_sweep(
    d1: int,
    d2_list,
    n_trials_per: int,
    seed: int = DEFAULT_SEED,
    *,
    tol: float = DEFAULT_TOL,
    base: str = "bits",
    workers: int = 1,
    ensemble_kind: str = "perturbation_pair",
) -> SweepReport:
    """Run the theorem harness at fixed d1 while d2 grows.

    Each row reports its max observed LHS next to the bound at its max
    observed epsilon, plus the bound evaluated on a fixed epsilon grid; the
    grid column is identical across rows because the formula has no d2 term.
    """
    _check_base(base)
    d2_list = [int(d) for d in d2_list]
    if not d2_list or any(d < 1 for d in d2_list):
        raise ValueError(f"need d2 values >= 1, got {d2_list}")
    config = {
        "harness": "sweep",
        "d1": int(d1),
        "d2_list": d2_list,
        "trials_per_row": int(n_trials_per),
        "seed": int(seed),
        "tolerance": tol,
        "base": base,
        "ensemble_kind": ensemble_kind,
    }
    t0 = time.perf_counter()
    reference = {
        str(e): cond_entropy_continuity_bound(e, d1, base)
        for e in RHS_REFERENCE_EPSILONS
    }
    rows, reports = [], []
    for d2 in d2_list:
        rep = run_theorem_trials(
            d1,
            d2,
            n_trials_per,
            ensemble=EnsembleSpec(kind=ensemble_kind, dims=(d1, d2), seed=seed),
            seed=seed,
            tol=tol,
            base=base,
            workers=workers,
        )
        reports.append(rep)
        rows.append(
            {
                "d2": d2,
                "trials": rep.trials,
                "applicable_trials": rep.applicable_trials,
                "violations": rep.violations,
                "errors": rep.errors,
                "max_lhs": rep.max_lhs,
                "max_epsilon": rep.max_epsilon,
                "rhs_at_max_epsilon": (
                    cond_entropy_continuity_bound(rep.max_epsilon, d1, base)
                    if rep.max_epsilon is not None
                    else None
                ),
                "rhs_at_reference": reference,
            }
        )
    return SweepReport(
        config=config,
        rows=tuple(rows),
        all_rows_clean=all(r["violations"] == 0 and r["errors"] == 0 for r in rows),
        rhs_reference_identical=all(
            r["rhs_at_reference"] == rows[0]["rhs_at_reference"] for r in rows
        ),
        wall_time=time.perf_counter() - t0,
        reports=tuple(reports),
    )


@dataclass(frozen=True)
class TightnessReport:
    config: dict
    trials: int
    applicable_trials: int
    skipped_degenerate: int
    errors: int
    max_ratio: float | None
    witness: dict | None
    extremal_rho: dict | None
    extremal_sigma: dict | None
    wall_time: float = field(compare=False)

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "config": self.config,
            "trials": self.trials,
            "applicable_trials": self.applicable_trials,
            "skipped_degenerate": self.skipped_degenerate,
            "errors": self.errors,
            "max_ratio": self.max_ratio,
            "witness": self.witness,
            "extremal_rho": self.extremal_rho,
            "extremal_sigma": self.extremal_sigma,
        }


def tightness_probe(
    d1: int,
    d2: int,
    n_trials: int,
    seed: int = DEFAULT_SEED,
    *,
    tol: float = DEFAULT_TOL,
    base: str = "bits",
    ensemble=None,
) -> TightnessReport:
    """Largest observed LHS/RHS ratio for the continuity bound, with the
    achieving pair embedded in state-file format for re-checking.

    Pairs at epsilon ~ 0 (ratio 0/0) are skipped and counted.
    """
    _check_base(base)
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    spec = _resolve_ensemble(ensemble, (d1, d2), seed)
    config = {
        "harness": "tightness",
        "d1": int(d1),
        "d2": int(d2),
        "trials": int(n_trials),
        "seed": int(spec.seed),
        "tolerance": tol,
        "base": base,
        "ensemble": spec.to_dict(),
    }
    t0 = time.perf_counter()
    applicable = skipped = errors = 0
    max_ratio = None
    witness = None
    extremal = None
    for index in range(n_trials):
        try:
            rho, sigma = draw_pair(spec, index)
            eps = trace_distance(rho, sigma)
            if eps > 1.0:
                continue
            rhs = cond_entropy_continuity_bound(eps, d1, base)
            if eps < 1e-12 or rhs == 0.0:
                skipped += 1
                continue
            applicable += 1
            lhs = abs(
                float(conditional_entropy(rho, base))
                - float(conditional_entropy(sigma, base))
            )
            ratio = lhs / rhs
            if max_ratio is None or ratio > max_ratio:
                max_ratio = ratio
                witness = {
                    "seed": spec.seed,
                    "index": index,
                    "epsilon": eps,
                    "lhs": lhs,
                    "rhs": rhs,
                    "ratio": ratio,
                }
                extremal = (rho, sigma)
        except _TRIAL_ERRORS:
            errors += 1
    return TightnessReport(
        config=config,
        trials=n_trials,
        applicable_trials=applicable,
        skipped_degenerate=skipped,
        errors=errors,
        max_ratio=max_ratio,
        witness=witness,
        extremal_rho=state_to_dict(extremal[0]) if extremal else None,
        extremal_sigma=state_to_dict(extremal[1]) if extremal else None,
        wall_time=time.perf_counter() - t0,
    )
