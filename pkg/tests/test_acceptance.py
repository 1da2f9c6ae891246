"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines live.
Tolerances are pinned here and match the harness defaults (1e-9 bits for
bound violations, 1e-10 for the decomposition identities).
"""

import json
import time

import numpy as np

from qmi import (
    HermitianOperator,
    decompose,
    estimate_esq,
    induced_mixed,
    operator_abs,
    partial_trace,
    perturbation_pair,
    run_lemma_trials,
    stream,
    validate_density,
    von_neumann_entropy,
    with_dims,
)
from qmi.cli import main
from qmi.stateio import bell, classical_corr, maxmix


def report(tag: str, ok: bool, detail: str = "") -> bool:
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {tag}: {status}" + (f" ({detail})" if detail else ""))
    return ok


def run_cli_json(argv, path):
    code = main(argv + ["--out", str(path)])
    return code, json.loads(path.read_text())


def test_criterion_1_theorem_suite(tmp_path):
    """Zero violations at 1e-9 bits on 10000 (2x2) and 5000 (3x3) trials,
    under 60 s each."""
    t0 = time.perf_counter()
    code_a, doc_a = run_cli_json(
        ["verify", "--d1", "2", "--d2", "2", "--trials", "10000"],
        tmp_path / "t22.json",
    )
    dt_a = time.perf_counter() - t0
    t0 = time.perf_counter()
    code_b, doc_b = run_cli_json(
        ["verify", "--d1", "3", "--d2", "3", "--trials", "5000"],
        tmp_path / "t33.json",
    )
    dt_b = time.perf_counter() - t0
    ok = (
        code_a == 0
        and code_b == 0
        and doc_a["violations"] == 0
        and doc_b["violations"] == 0
        and doc_a["errors"] == 0
        and doc_b["errors"] == 0
        and dt_a < 60.0
        and dt_b < 60.0
    )
    assert report(
        "1 theorem-suite",
        ok,
        f"2x2 {dt_a:.1f}s margin>={doc_a['min_margin']:.2e}, "
        f"3x3 {dt_b:.1f}s margin>={doc_b['min_margin']:.2e}",
    )


def test_criterion_2_dimension_independence(tmp_path):
    """Sweep d2 in {2,4,8,16}: zero violations per row and a d2-free RHS."""
    code, doc = run_cli_json(
        ["sweep", "--d1", "2", "--d2", "2,4,8,16", "--trials", "2000"],
        tmp_path / "sweep.json",
    )
    rows = doc["rows"]
    ok = (
        code == 0
        and len(rows) == 4
        and all(r["violations"] == 0 and r["errors"] == 0 for r in rows)
        and doc["rhs_reference_identical"] is True
        and all(r["rhs_at_reference"] == rows[0]["rhs_at_reference"] for r in rows)
    )
    assert report(
        "2 dimension-independence",
        ok,
        "max_lhs per d2: "
        + ", ".join(f"{r['d2']}:{r['max_lhs']:.3f}" for r in rows),
    )


def test_criterion_3_lemma_suite():
    """10000 random (rho, rho_tilde, eps) triples at d1=d2=2 satisfy the
    mixture bound and both internal inequality chains."""
    rep = run_lemma_trials(2, 2, 10000)
    ok = rep.violations == 0 and rep.errors == 0 and rep.applicable_trials == 10000
    assert report(
        "3 lemma-suite", ok, f"min_margin={rep.min_margin:.2e}"
    )


def test_criterion_4_decomposition_identities():
    """1000 random pairs with 0 < eps <= 1: all four decomposition invariants
    within 1e-10; the two hand-computed diagonal examples match exactly."""
    failures = 0
    for i in range(1000):
        rng = stream(20250810, i)
        base = with_dims(induced_mixed(4, 4, rng), (2, 2))
        pair = perturbation_pair(base, float(rng.uniform(0.02, 1.0)), rng)
        if pair.epsilon <= 0.0 or pair.epsilon > 1.0:
            continue
        dec = decompose(pair.rho, pair.sigma)
        e = dec.epsilon
        mix_rho = (1 - e) * dec.rho.mat + e * dec.rho_tilde.mat
        mix_sigma = (1 - e) * dec.sigma.mat + e * dec.sigma_tilde.mat
        abs_diff = operator_abs(
            HermitianOperator(dec.rho.mat - dec.sigma.mat)
        ).entries
        good = (
            np.max(np.abs(dec.gamma.mat - mix_rho)) <= 1e-10
            and np.max(np.abs(dec.gamma.mat - mix_sigma)) <= 1e-10
            and np.max(np.abs(dec.rho_tilde.mat - abs_diff / e)) <= 1e-10
            and dec.rho_tilde.eigenvalues[-1] >= -1e-10
            and dec.sigma_tilde.eigenvalues[-1] >= -1e-10
            and abs(float(np.sum(dec.rho_tilde.eigenvalues)) - 1.0) <= 1e-10
            and abs(float(np.sum(dec.sigma_tilde.eigenvalues)) - 1.0) <= 1e-10
        )
        failures += 0 if good else 1

    # hand example at eps = 1/2
    dec = decompose(
        validate_density(np.diag([1.0, 0.0]), [2]),
        validate_density(np.diag([0.75, 0.25]), [2]),
    )
    exact_half = (
        abs(dec.epsilon - 0.5) <= 1e-14
        and np.allclose(dec.rho_tilde.mat, np.diag([0.5, 0.5]), atol=1e-14)
        and np.allclose(dec.gamma.mat, np.diag([0.75, 0.25]), atol=1e-14)
        and np.allclose(dec.sigma_tilde.mat, np.diag([0.75, 0.25]), atol=1e-14)
    )
    # hand example at eps = 1
    dec1 = decompose(
        validate_density(np.diag([0.75, 0.25]), [2]),
        validate_density(np.diag([0.25, 0.75]), [2]),
    )
    exact_one = (
        abs(dec1.epsilon - 1.0) <= 1e-14
        and np.allclose(dec1.gamma.mat, np.eye(2) / 2, atol=1e-14)
        and np.allclose(dec1.rho_tilde.mat, np.eye(2) / 2, atol=1e-14)
        and np.allclose(dec1.sigma_tilde.mat, np.eye(2) / 2, atol=1e-14)
    )
    ok = failures == 0 and exact_half and exact_one
    assert report("4 decomposition-identities", ok, f"failures={failures}")


def test_criterion_5_entropy_continuity(tmp_path):
    """10000 random pairs at d=4 never violate the closing formula; the three
    entropy fixed points hold."""
    code, doc = run_cli_json(
        ["verify", "--law", "entropy", "--d", "4", "--trials", "10000"],
        tmp_path / "ent.json",
    )
    bell_marginal = float(von_neumann_entropy(partial_trace(bell(), (0,))))
    s_max = float(von_neumann_entropy(maxmix(4)))
    s_diag = float(
        von_neumann_entropy(validate_density(np.diag([0.75, 0.25]), [2]))
    )
    ok = (
        code == 0
        and doc["violations"] == 0
        and doc["errors"] == 0
        and abs(bell_marginal - 1.0) <= 1e-9
        and abs(s_max - 2.0) <= 1e-9
        and abs(s_diag - 0.811278) <= 1e-6
    )
    assert report(
        "5 entropy-continuity",
        ok,
        f"min_margin={doc['min_margin']:.2e}, S(3/4,1/4)={s_diag:.6f}",
    )


def test_criterion_6_squashed_entanglement():
    """Estimates: Bell in [0.99, 1.01]; classically correlated and product
    states <= 1e-3; per-restart traces monotone; under 5 minutes total."""
    t0 = time.perf_counter()
    est_bell = estimate_esq(bell(), d3=2, restarts=8)
    est_cc = estimate_esq(classical_corr(), d3=2, restarts=8)
    prod = validate_density(
        np.kron(induced_mixed(2, 2, 71).mat, induced_mixed(2, 2, 72).mat), (2, 2)
    )
    est_prod = estimate_esq(prod, d3=2, restarts=8)
    elapsed = time.perf_counter() - t0
    monotone = all(
        np.all(np.diff(np.asarray(tr)) <= 1e-15)
        for est in (est_bell, est_cc, est_prod)
        for tr in est.restart_traces
    )
    ok = (
        0.99 <= est_bell.value <= 1.01
        and est_cc.value <= 1e-3
        and est_prod.value <= 1e-3
        and monotone
        and elapsed < 300.0
    )
    assert report(
        "6 squashed-entanglement",
        ok,
        f"bell={est_bell.value:.4f} cc={est_cc.value:.2e} "
        f"prod={est_prod.value:.2e} {elapsed:.0f}s",
    )


def test_criterion_7_reproducibility(tmp_path):
    """Identical config and seed give byte-identical JSON reports, including
    across different worker counts."""
    base = ["verify", "--d1", "2", "--d2", "2", "--trials", "400", "--seed", "77"]
    paths = [tmp_path / f"r{i}.json" for i in range(3)]
    assert main(base + ["--out", str(paths[0])]) == 0
    assert main(base + ["--out", str(paths[1])]) == 0
    assert main(base + ["--out", str(paths[2]), "--workers", "4"]) == 0
    verify_ok = (
        paths[0].read_bytes() == paths[1].read_bytes() == paths[2].read_bytes()
    )

    esq_paths = [tmp_path / f"e{i}.json" for i in range(2)]
    esq_args = ["esq", "--state", "classical-corr", "--d3", "2", "--restarts", "4"]
    assert main(esq_args + ["--out", str(esq_paths[0])]) == 0
    assert main(esq_args + ["--out", str(esq_paths[1])]) == 0
    esq_ok = esq_paths[0].read_bytes() == esq_paths[1].read_bytes()

    ok = verify_ok and esq_ok
    assert report("7 reproducibility", ok, "verify x3 + esq x2 byte-identical")
