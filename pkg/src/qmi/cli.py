"""Command-line front end: state I/O, harness execution, report emission.

Exit codes are the machine contract: 0 on success / zero violations,
2 when a verification harness records violations, 1 on usage or I/O errors
(reported as a single stderr line with the prefix ``error:``).
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

from . import __version__
from .ensembles import DEFAULT_SEED, EnsembleSpec
from .entropy import (
    conditional_entropy,
    conditional_mutual_information,
    von_neumann_entropy,
)
from .errors import QmiError
from .squashed import esq_continuity_probe, estimate_esq
from .stateio import resolve_state, save_state, write_json_atomic
from .thales import decompose, mixture_residuals
from .verify import (
    SCHEMA,
    dim_sweep,
    entropy_continuity_trials,
    run_lemma_trials,
    run_theorem_trials,
    tightness_probe,
)

CSV_COLUMNS = ("trial_index", "epsilon", "lhs_bits", "rhs_bits", "margin_bits")


def _common(sub):
    sub.add_argument(
        "--seed",
        type=int,
        default=DEFAULT_SEED,
        help=f"master seed (default {DEFAULT_SEED})",
    )
    sub.add_argument("--tol", type=float, default=1e-9, help="violation tolerance")
    sub.add_argument(
        "--nats", action="store_true", help="report in nats instead of bits"
    )
    sub.add_argument("--out", help="write the report to this path")
    sub.add_argument(
        "--format",
        choices=("json", "csv"),
        default="json",
        dest="fmt",
        help="report format (csv is per-trial, bits only)",
    )
    return sub


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qmi",
        description=(
            "Entropy continuity bounds and squashed-entanglement estimation "
            "for finite-dimensional quantum states.  State arguments accept "
            "a JSON state file or a named state: bell, ghz, classical-corr, "
            "maxmix:<d>."
        ),
    )
    p.add_argument("--version", action="version", version=f"qmi {__version__}")
    subs = p.add_subparsers(dest="command", required=True)

    s = subs.add_parser("entropy", help="entropies of a state")
    s.add_argument("--state", required=True, help="state file or named state")
    s.add_argument("--dims", help="re-declare subsystem dims, e.g. 2,2")
    s.add_argument("--nats", action="store_true")

    s = subs.add_parser("thales", help="mixture decomposition of a pair")
    s.add_argument("--a", required=True, help="first state (file or name)")
    s.add_argument("--b", required=True, help="second state (file or name)")
    s.add_argument("--out", help="prefix for gamma/rho_tilde/sigma_tilde files")

    s = _common(subs.add_parser("verify", help="run a verification harness"))
    s.add_argument(
        "--law",
        choices=("theorem", "lemma", "entropy"),
        default="theorem",
        help="which inequality to verify",
    )
    s.add_argument("--d1", type=int, default=2)
    s.add_argument("--d2", type=int, default=2)
    s.add_argument("--d", type=int, default=4, help="total dim (entropy law only)")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument(
        "--ensemble",
        choices=("perturbation_pair", "haar_pure", "induced_mixed", "rank_limited"),
        help="pair ensemble (default: perturbation_pair; lemma: induced_mixed)",
    )
    s.add_argument("--ancilla", type=int, help="ancilla dim / rank for the ensemble")
    s.add_argument(
        "--target-eps", type=float, help="fixed perturbation target epsilon"
    )
    s.add_argument("--workers", type=int, default=1)

    s = _common(subs.add_parser("sweep", help="theorem harness across d2 values"))
    s.add_argument("--d1", type=int, default=2)
    s.add_argument("--d2", default="2,4,8,16", help="comma-separated d2 list")
    s.add_argument("--trials", type=int, default=1000, help="trials per d2")
    s.add_argument("--workers", type=int, default=1)

    s = _common(subs.add_parser("tightness", help="bound tightness probe"))
    s.add_argument("--d1", type=int, default=2)
    s.add_argument("--d2", type=int, default=2)
    s.add_argument("--trials", type=int, default=1000)

    s = subs.add_parser("esq", help="squashed entanglement upper bound")
    s.add_argument("--state", required=True)
    s.add_argument("--dims", help="re-declare subsystem dims, e.g. 2,2")
    s.add_argument("--d3", type=int, help="extension dimension (default 2*rank)")
    s.add_argument("--restarts", type=int, default=8)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--nats", action="store_true")
    s.add_argument("--out")

    s = subs.add_parser("probe", help="squashed-entanglement continuity probe")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--d3", type=int)
    s.add_argument("--restarts", type=int, default=8)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--nats", action="store_true")
    s.add_argument("--out")

    return p


def _parse_dims(text):
    if text is None:
        return None
    try:
        dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise QmiError(f"cannot parse dims {text!r}")
    return dims


def _base(args) -> str:
    return "nats" if getattr(args, "nats", False) else "bits"


def _unit(args) -> str:
    return "nats" if getattr(args, "nats", False) else "bits"


def cmd_entropy(args) -> int:
    rho = resolve_state(args.state, _parse_dims(args.dims))
    base = _base(args)
    unit = _unit(args)
    print(f"S = {float(von_neumann_entropy(rho, base)):.9f} {unit}")
    if len(rho.dims) == 2:
        print(f"S(1|2) = {float(conditional_entropy(rho, base)):.9f} {unit}")
    if len(rho.dims) == 3:
        print(
            f"I(1;2|3) = {conditional_mutual_information(rho, base):.9f} {unit}"
        )
    return 0


def cmd_thales(args) -> int:
    rho = resolve_state(args.a)
    sigma = resolve_state(args.b)
    dec = decompose(rho, sigma)
    print(f"epsilon = {dec.epsilon:.12f}")
    for name, state in (
        ("gamma", dec.gamma),
        ("rho_tilde", dec.rho_tilde),
        ("sigma_tilde", dec.sigma_tilde),
    ):
        eigs = ", ".join(f"{x:.6f}" for x in state.eigenvalues)
        print(f"{name}: eigenvalues=[{eigs}]")
    for name, value in mixture_residuals(dec).items():
        print(f"residual {name} = {value:.3e}")
    if args.out:
        for name, state in (
            ("gamma", dec.gamma),
            ("rho_tilde", dec.rho_tilde),
            ("sigma_tilde", dec.sigma_tilde),
        ):
            path = f"{args.out}_{name}.json"
            save_state(state, path)
            print(f"wrote {path}")
    return 0


def _write_report(report_dict, rows, args) -> None:
    if not args.out:
        return
    if args.fmt == "json":
        write_json_atomic(report_dict, args.out)
        return
    if getattr(args, "nats", False):
        raise QmiError("csv output is defined in bits; drop --nats or use json")
    with open(args.out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow(
                [
                    r[0],
                    "" if r[1] is None else repr(r[1]),
                    "" if r[2] is None else repr(r[2]),
                    "" if r[3] is None else repr(r[3]),
                    "" if r[4] is None else repr(r[4]),
                ]
            )


def _print_trial_summary(name, rep) -> None:
    print(
        f"{name}: trials={rep.trials} applicable={rep.applicable_trials} "
        f"violations={rep.violations} errors={rep.errors} "
        f"max_lhs={rep.max_lhs} min_margin={rep.min_margin} "
        f"({rep.wall_time:.2f}s)"
    )


def cmd_verify(args) -> int:
    base = _base(args)
    if args.law == "entropy":
        rep = entropy_continuity_trials(
            args.d,
            args.trials,
            args.seed,
            tol=args.tol,
            base=base,
            workers=args.workers,
        )
    else:
        default_kind = "perturbation_pair" if args.law == "theorem" else "induced_mixed"
        spec = EnsembleSpec(
            kind=args.ensemble or default_kind,
            dims=(args.d1, args.d2),
            ancilla_dim=args.ancilla,
            target_epsilon=args.target_eps,
            seed=args.seed,
        )
        runner = run_theorem_trials if args.law == "theorem" else run_lemma_trials
        rep = runner(
            args.d1,
            args.d2,
            args.trials,
            ensemble=spec,
            seed=args.seed,
            tol=args.tol,
            base=base,
            workers=args.workers,
        )
    _print_trial_summary(f"verify[{args.law}]", rep)
    _write_report(rep.to_json_dict(), rep.rows, args)
    return 2 if rep.violations > 0 else 0


def cmd_sweep(args) -> int:
    base = _base(args)
    d2_list = [int(x) for x in str(args.d2).split(",")]
    rep = dim_sweep(
        args.d1,
        d2_list,
        args.trials,
        args.seed,
        tol=args.tol,
        base=base,
        workers=args.workers,
    )
    for row in rep.rows:
        print(
            f"sweep d2={row['d2']}: trials={row['trials']} "
            f"applicable={row['applicable_trials']} violations={row['violations']} "
            f"max_lhs={row['max_lhs']} rhs_at_max_eps={row['rhs_at_max_epsilon']}"
        )
    print(
        f"sweep: all_rows_clean={rep.all_rows_clean} "
        f"rhs_reference_identical={rep.rhs_reference_identical} "
        f"({rep.wall_time:.2f}s)"
    )
    if args.out and args.fmt == "csv":
        if getattr(args, "nats", False):
            raise QmiError("csv output is defined in bits; drop --nats or use json")
        with open(args.out, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(("d2",) + CSV_COLUMNS)
            for sub, d2 in zip(rep.reports, d2_list):
                for r in sub.rows:
                    w.writerow(
                        [d2, r[0]]
                        + ["" if x is None else repr(x) for x in r[1:5]]
                    )
    elif args.out:
        write_json_atomic(rep.to_json_dict(), args.out)
    violations = sum(row["violations"] for row in rep.rows)
    return 2 if violations > 0 else 0


def cmd_tightness(args) -> int:
    base = _base(args)
    rep = tightness_probe(
        args.d1, args.d2, args.trials, args.seed, tol=args.tol, base=base
    )
    print(
        f"tightness: trials={rep.trials} applicable={rep.applicable_trials} "
        f"skipped_degenerate={rep.skipped_degenerate} errors={rep.errors} "
        f"max_ratio={rep.max_ratio} ({rep.wall_time:.2f}s)"
    )
    if args.fmt == "csv":
        raise QmiError("tightness reports have no per-trial csv; use json")
    if args.out:
        write_json_atomic(rep.to_json_dict(), args.out)
    return 0


def cmd_esq(args) -> int:
    rho = resolve_state(args.state, _parse_dims(args.dims))
    base = _base(args)
    t0 = time.perf_counter()
    est = estimate_esq(
        rho, args.d3, args.restarts, seed=args.seed, base=base
    )
    wall = time.perf_counter() - t0
    print(
        f"esq: estimate={est.value:.6f} {_unit(args)} d3={est.d3} "
        f"restarts={est.restarts} iterations={est.iterations} "
        f"converged={est.converged} ({wall:.2f}s)"
    )
    if args.out:
        doc = {
            "schema": SCHEMA,
            "config": {
                "command": "esq",
                "state": args.state,
                "d3": est.d3,
                "restarts": args.restarts,
                "seed": args.seed,
                "base": base,
            },
        }
        doc.update(est.to_dict())
        write_json_atomic(doc, args.out)
    return 0


def cmd_probe(args) -> int:
    rho = resolve_state(args.a)
    sigma = resolve_state(args.b)
    base = _base(args)
    rep = esq_continuity_probe(
        rho, sigma, args.d3, args.restarts, seed=args.seed, base=base
    )
    print(
        f"probe: epsilon={rep.epsilon:.6f} difference={rep.difference:.6f} "
        f"reference_bound={rep.reference_bound:.6f} "
        f"within_reference={rep.within_reference}"
    )
    if args.out:
        doc = {
            "schema": SCHEMA,
            "config": {
                "command": "probe",
                "a": args.a,
                "b": args.b,
                "d3": rep.d3,
                "restarts": args.restarts,
                "seed": args.seed,
                "base": base,
            },
        }
        doc.update(rep.to_dict())
        write_json_atomic(doc, args.out)
    return 0


_HANDLERS = {
    "entropy": cmd_entropy,
    "thales": cmd_thales,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "tightness": cmd_tightness,
    "esq": cmd_esq,
    "probe": cmd_probe,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return _HANDLERS[args.command](args)
    except QmiError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: OSError: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
