"""Command-line interface.

Subcommands: build, verify, noise, bounds, cost.  Standard output carries
only machine-readable results (JSON, CSV, or Markdown); progress goes to
standard error.  Exit codes: 0 success, 1 verification/assertion failure,
2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import bounds as bounds_mod
from . import qla
from .builders.spec import KINDS, BuilderSpec, build
from .circuit import Circuit, PROFILES, count_resources
from .noise import (
    NoiseModel,
    estimate_infidelity,
    fit_scaling,
    fit_points,
    scaling_sweep,
    simulate_derangement,
    simulate_persistent_accumulation,
    write_sweep_csv,
)
from .tables import BitTable, random_table
from .verify import verify_builder

USAGE_ERROR = 2
CHECK_FAILED = 1


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, separators=(",", ":")) + "\n")


def _progress(msg: str) -> None:
    sys.stderr.write(msg + "\n")
    sys.stderr.flush()


def _worker_cap() -> int:
    raw = os.environ.get("QRAMWB_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return max(1, min(4, os.cpu_count() or 1))


def _load_table(args, parser) -> BitTable:
    if args.table is None:
        parser.error("--table is required (random | hex:<digits> | <path>)")
    src = args.table
    w = getattr(args, "word_width", 1)
    if src == "random":
        if args.seed is None:
            parser.error("--seed is required with --table random")
        if args.n is None:
            parser.error("--n is required with --table random")
        return random_table(args.n, w, seed=args.seed)
    if src.startswith("hex:"):
        if args.n is None:
            parser.error("--n is required with an inline hex table")
        return BitTable.from_hex(src[4:], args.n, w)
    try:
        return BitTable.read(src)
    except (OSError, ValueError) as exc:
        parser.error(f"cannot read table file {src!r}: {exc}")


def _spec_from_args(args, parser) -> BuilderSpec:
    try:
        return BuilderSpec(
            kind=args.kind,
            page_log=getattr(args, "page_log", None),
            query_count=getattr(args, "k", None),
            uncompute=getattr(args, "uncompute", None),
        )
    except ValueError as exc:
        parser.error(str(exc))


def _resource_sweep(args, parser) -> int:
    """Write a resource CSV over doubling table sizes or page exponents."""
    import csv as csv_mod

    profile = PROFILES[args.profile]
    if args.seed is None:
        parser.error("--seed is required for resource sweeps")
    rows = []
    if args.sweep_n:
        for n in _parse_sweep(args.sweep_n):
            table = random_table(n, args.word_width, seed=args.seed)
            spec = BuilderSpec(
                kind=args.kind,
                page_log=args.page_log,
                query_count=args.k,
                uncompute=args.uncompute,
            )
            rep = count_resources(build(spec, table), profile)
            rows.append((args.kind, n, args.page_log if args.page_log is not None else "", rep))
    else:
        if args.n is None:
            parser.error("--n is required for a page-exponent sweep")
        table = random_table(args.n, args.word_width, seed=args.seed)
        top = table.padded_to_power_of_two().address_bits
        for ell in range(0, top + 1):
            spec = BuilderSpec(kind="select_swap", page_log=ell)
            rep = count_resources(build(spec, table), profile)
            rows.append(("select_swap", args.n, ell, rep))
    out = args.out or parser.error("--out is required for sweeps")
    with open(out, "w", newline="") as fh:
        writer = csv_mod.writer(fh)
        writer.writerow(["builder", "N", "ell", "t_count", "depth", "gates"])
        for kind, n, ell, rep in rows:
            writer.writerow([kind, n, ell, rep.t_count, rep.depth, rep.total_gates])
    _progress(f"wrote {out}")
    _emit({"rows": len(rows), "out": out})
    return 0


def cmd_build(args, parser) -> int:
    if args.sweep_n or args.sweep_ell:
        return _resource_sweep(args, parser)
    table = _load_table(args, parser)
    spec = _spec_from_args(args, parser)
    circuit = build(spec, table)
    problems = circuit.validate()
    if problems:
        _progress("invalid circuit: " + "; ".join(problems))
        return CHECK_FAILED
    profile = PROFILES[args.profile]
    report = count_resources(circuit, profile)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(circuit.to_json() + "\n")
    payload = {
        "builder": spec.kind,
        "n": table.n,
        "word_width": table.word_width,
        "profile": args.profile,
        "report": report.as_dict(),
        "meta": {k: v for k, v in circuit.meta.items() if v is not None},
    }
    if args.out:
        payload["circuit_file"] = args.out
    _emit(payload)
    return 0


def cmd_verify(args, parser) -> int:
    table = _load_table(args, parser)
    if args.circuit:
        # verify a serialized circuit file against the table directly
        from .classical import CompiledCircuit, basis_batch

        with open(args.circuit) as fh:
            circuit = Circuit.from_json(fh.read())
        compiled = CompiledCircuit(circuit)
        padded = table.padded_to_power_of_two()
        cases = [{"addr": a} for a in range(padded.n)]
        init = basis_batch(compiled, cases)
        expect = init.copy()
        out_cols = compiled.register_columns("out")
        for a in range(padded.n):
            for b in range(padded.word_width):
                if (padded.entries[a] >> b) & 1:
                    expect[a, out_cols[b]] ^= True
        final = compiled.run(init.copy())
        bad = np.nonzero((final != expect).any(axis=1))[0]
        report = {
            "mode": "circuit-file",
            "N": table.n,
            "failures": [{"addresses": [int(a)]} for a in bad],
            "max_dev": 1.0 if len(bad) else 0.0,
            "passed": not len(bad),
        }
    else:
        spec = _spec_from_args(args, parser)
        if args.mode == "exhaustive" and table.n > 256:
            parser.error("exhaustive verification capped at N=256")
        if args.mode == "sampled" and args.seed is None:
            parser.error("--seed is required for sampled verification")
        try:
            report = verify_builder(
                spec,
                table,
                mode=args.mode,
                sample_count=args.samples,
                seed=args.seed or 0,
            )
        except ValueError as exc:
            parser.error(str(exc))
    _emit(report)
    return 0 if report["passed"] else CHECK_FAILED


def _parse_sweep(text: str) -> list[int]:
    if ":" in text:
        lo, hi = text.split(":", 1)
        lo, hi = int(lo), int(hi)
        out = []
        n = lo
        while n <= hi:
            out.append(n)
            n *= 2
        return out
    return [int(x) for x in text.split(",")]


def cmd_noise(args, parser) -> int:
    if args.noise_cmd == "sweep":
        ns = _parse_sweep(args.sweep_n)
        seeds = range(args.seed, args.seed + args.seeds)
        _progress(f"sweeping {args.kind} over N={ns} at p={args.p}")
        estimates = scaling_sweep(
            args.kind, ns, args.p, args.trials // args.seeds, seeds
        )
        if args.out:
            write_sweep_csv(args.out, estimates)
            _progress(f"wrote {args.out}")
        for e in estimates:
            _emit(
                {
                    "builder": e.builder,
                    "N": e.n,
                    "p": e.p,
                    "trials": e.trials,
                    "infidelity": e.estimate,
                    "ci": [e.ci_lo, e.ci_hi],
                }
            )
        if args.fit:
            pts = fit_points(estimates)
            fit = fit_scaling(pts, args.fit)
            _emit(
                {
                    "fit": args.fit,
                    "exponent": fit.exponent,
                    "stderr": fit.stderr,
                    "r_squared": fit.r_squared,
                }
            )
        return 0
    if args.noise_cmd == "persistent":
        acc = simulate_persistent_accumulation(
            args.n, args.p, args.queries, args.trials, seed=args.seed
        )
        _emit(
            {
                "N": acc.n,
                "p": acc.p,
                "queries": acc.queries,
                "trials": acc.trials,
                "fraction_by_query": list(acc.fraction_by_query),
                "cumulative_burden": list(acc.cumulative_burden),
            }
        )
        return 0
    if args.noise_cmd == "derangement":
        res = simulate_derangement(args.m, args.p, args.trials, seed=args.seed)
        _emit(
            {
                "m": res.m,
                "p": res.p,
                "trials": res.trials,
                "herald_pass_rate": res.herald_pass_rate,
                "herald_failure_rate": res.herald_failure_rate,
                "conditional_infidelity": res.conditional_infidelity,
            }
        )
        return 0
    if args.noise_cmd == "query":
        from .noise import run_noisy_query

        table = _load_table(args, parser)
        spec = _spec_from_args(args, parser)
        noise = NoiseModel(p=args.p, seed=args.seed or 0)
        outcome = run_noisy_query(spec, table, args.address, noise)
        _emit(
            {
                "output_word": outcome.output_word,
                "address_intact": outcome.address_intact,
                "error_count": outcome.error_count,
                "sign_flipped": outcome.sign_flipped,
            }
        )
        return 0
    parser.error("unknown noise subcommand")


def cmd_bounds(args, parser) -> int:
    b = args.bounds_cmd
    if b == "distill-cap":
        cap = bounds_mod.distillation_fidelity_cap(
            bounds_mod.DistillationParams(
                calls=args.d, table_bits=args.n, flipped=args.l
            )
        )
        _emit(
            {
                "inputs": {"d": args.d, "N": args.n, "l": args.l},
                "value": cap.value,
                "raw": cap.raw,
                "vacuous": cap.vacuous,
            }
        )
        return 0
    if b == "circuit-count":
        params = bounds_mod.CircuitCountParams(
            width=args.w, depth=args.depth, gates=args.g,
            gate_set=args.gate_set, fanin=args.fanin,
        )
        _emit(
            {
                "inputs": {
                    "W": args.w,
                    "D": args.depth,
                    "G": args.g,
                    "g": args.gate_set,
                    "k": args.fanin,
                },
                "lg_count": bounds_mod.log2_circuit_count(params),
            }
        )
        return 0
    if b == "min-gates":
        res = bounds_mod.min_gates_for_table(
            args.n, width=args.w, depth=args.depth,
            gate_set=args.gate_set, fanin=args.fanin,
        )
        _emit(
            {
                "inputs": {"N": args.n, "W": args.w, "D": args.depth},
                "gates": res.gates,
                "feasible": res.feasible,
            }
        )
        return 0 if res.feasible else CHECK_FAILED
    if b == "ballistic":
        verdict = bounds_mod.ballistic_constraint(
            bounds_mod.BallisticParams(
                terms=args.terms, time=args.time, energy=args.energy,
                width=args.w, table_bits=args.n,
            ),
            form=args.form,
        )
        _emit(
            {
                "inputs": {
                    "n": args.terms,
                    "t": args.time,
                    "E": args.energy,
                    "W": args.w,
                    "N": args.n,
                },
                "lhs": verdict.lhs,
                "satisfied_for_N": verdict.satisfied_for_n,
                "slack": verdict.slack,
                "form": verdict.form,
            }
        )
        return 0
    if b == "ham-floor":
        floor, stated = bounds_mod.hamiltonian_distance_floor(args.delta, args.time)
        _emit(
            {
                "inputs": {"delta": args.delta, "t": args.time},
                "floor": floor,
                "stated_lower_bound": stated,
            }
        )
        return 0
    if b == "verify-ham":
        violations = bounds_mod.verify_hamiltonian_lemma(
            args.dim, args.trials, seed=args.seed
        )
        _emit({"dim": args.dim, "trials": args.trials, "violations": violations})
        return 0 if violations == 0 else CHECK_FAILED
    if b == "verify-tables":
        states = bounds_mod.random_access_states(args.d, args.n, seed=args.seed)
        res = bounds_mod.verify_indistinguishable_tables(states, args.l)
        _emit(
            {
                "inputs": {"d": args.d, "N": args.n, "l": args.l},
                "flip_set": list(res.flip_set),
                "delta_sum": res.delta_sum,
                "stated_bound": res.stated_bound,
                "derived_bound": res.derived_bound,
                "holds": res.holds,
                "holds_stated": res.holds_stated,
            }
        )
        return 0 if res.holds else CHECK_FAILED
    parser.error("unknown bounds subcommand")


def cmd_cost(args, parser) -> int:
    c = args.cost_cmd
    if c == "regime":
        report = qla.regime_table(args.n, args.d, args.k)
        sys.stdout.write(report.to_markdown() + "\n")
        return 0
    if c == "steps":
        sc = qla.stepcount_models(args.n, args.d, args.p, args.model)
        _emit({"model": sc.model, "steps": sc.steps, "terms": sc.terms})
        return 0
    if c == "transform":
        h = qla.load_matrix_market(args.matrix)
        v = qla.load_vector(args.vector)
        f = qla.Polynomial([complex(x) for x in args.coeffs.split(",")])
        res = qla.poly_eigen_transform(h, v, f)
        _emit(
            {
                "matvecs": res.matvec_count,
                "norm": res.norm_before_scaling,
                "vector": [
                    [float(x.real), float(x.imag)] for x in res.vector
                ],
            }
        )
        return 0
    parser.error("unknown cost subcommand")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qramwb", description="circuit QRAM workbench"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_table_args(p, need_kind=True):
        if need_kind:
            p.add_argument("--kind", choices=KINDS, required=True)
        p.add_argument("--n", type=int, help="table size")
        p.add_argument("--word-width", type=int, default=1)
        p.add_argument("--table", help="random | hex:<digits> | <path>")
        p.add_argument("--seed", type=int)
        p.add_argument("--page-log", type=int, dest="page_log")
        p.add_argument("--k", type=int, help="parallel query count")
        p.add_argument(
            "--uncompute", choices=["coherent", "measurement_based"]
        )

    p_build = sub.add_parser("build", help="emit a circuit and its resources")
    add_table_args(p_build)
    p_build.add_argument("--profile", choices=sorted(PROFILES), default="unit-gate")
    p_build.add_argument("--out", help="circuit JSON path (or sweep CSV)")
    p_build.add_argument(
        "--sweep-n", dest="sweep_n", help="emit a resource CSV over doubling N"
    )
    p_build.add_argument(
        "--sweep-ell",
        dest="sweep_ell",
        action="store_true",
        help="emit a resource CSV over every page exponent at --n",
    )

    p_verify = sub.add_parser("verify", help="simulate against table lookup")
    add_table_args(p_verify)
    p_verify.add_argument(
        "--mode", choices=["exhaustive", "sampled", "auto"], default="auto"
    )
    p_verify.add_argument("--samples", type=int, default=50)
    p_verify.add_argument("--circuit", help="verify a circuit JSON file instead")

    p_noise = sub.add_parser("noise", help="noise trajectories and models")
    nsub = p_noise.add_subparsers(dest="noise_cmd", required=True)
    p_sweep = nsub.add_parser("sweep")
    p_sweep.add_argument("--kind", choices=KINDS, required=True)
    p_sweep.add_argument("--sweep-n", required=True, help="lo:hi doubling or list")
    p_sweep.add_argument("--p", type=float, required=True)
    p_sweep.add_argument("--trials", type=int, required=True)
    p_sweep.add_argument("--seeds", type=int, default=5, help="tables pooled per point")
    p_sweep.add_argument("--seed", type=int, required=True)
    p_sweep.add_argument("--fit", choices=["power_in_N", "power_in_logN"])
    p_sweep.add_argument("--out", help="CSV output path")
    p_pers = nsub.add_parser("persistent")
    p_pers.add_argument("--n", type=int, required=True)
    p_pers.add_argument("--p", type=float, required=True)
    p_pers.add_argument("--queries", type=int, required=True)
    p_pers.add_argument("--trials", type=int, required=True)
    p_pers.add_argument("--seed", type=int, required=True)
    p_der = nsub.add_parser("derangement")
    p_der.add_argument("--m", type=int, required=True)
    p_der.add_argument("--p", type=float, required=True)
    p_der.add_argument("--trials", type=int, required=True)
    p_der.add_argument("--seed", type=int, required=True)
    p_query = nsub.add_parser("query")
    add_table_args(p_query)
    p_query.add_argument("--address", type=int, required=True)
    p_query.add_argument("--p", type=float, required=True)

    p_bounds = sub.add_parser("bounds", help="analytic bound calculators")
    bsub = p_bounds.add_subparsers(dest="bounds_cmd", required=True)
    p_cap = bsub.add_parser("distill-cap")
    p_cap.add_argument("--d", type=int, required=True)
    p_cap.add_argument("--n", type=int, required=True)
    p_cap.add_argument("--l", type=int, default=1)
    p_cc = bsub.add_parser("circuit-count")
    p_cc.add_argument("--w", type=int, required=True)
    p_cc.add_argument("--depth", type=int, required=True)
    p_cc.add_argument("--g", type=int, required=True)
    p_cc.add_argument("--gate-set", type=int, default=16)
    p_cc.add_argument("--fanin", type=int, default=3)
    p_mg = bsub.add_parser("min-gates")
    p_mg.add_argument("--n", type=int, required=True)
    p_mg.add_argument("--w", type=int, required=True)
    p_mg.add_argument("--depth", type=int, required=True)
    p_mg.add_argument("--gate-set", type=int, default=16)
    p_mg.add_argument("--fanin", type=int, default=3)
    p_bal = bsub.add_parser("ballistic")
    p_bal.add_argument("--terms", type=int, required=True)
    p_bal.add_argument("--time", type=float, required=True)
    p_bal.add_argument("--energy", type=float, required=True)
    p_bal.add_argument("--w", type=int, required=True)
    p_bal.add_argument("--n", type=int, required=True)
    p_bal.add_argument("--form", choices=["summary", "stirling"], default="summary")
    p_hf = bsub.add_parser("ham-floor")
    p_hf.add_argument("--delta", type=float, required=True)
    p_hf.add_argument("--time", type=float, required=True)
    p_vh = bsub.add_parser("verify-ham")
    p_vh.add_argument("--dim", type=int, required=True)
    p_vh.add_argument("--trials", type=int, required=True)
    p_vh.add_argument("--seed", type=int, required=True)
    p_vt = bsub.add_parser("verify-tables")
    p_vt.add_argument("--d", type=int, required=True)
    p_vt.add_argument("--n", type=int, required=True)
    p_vt.add_argument("--l", type=int, default=1)
    p_vt.add_argument("--seed", type=int, required=True)

    p_cost = sub.add_parser("cost", help="parallel-cost models and regimes")
    csub = p_cost.add_subparsers(dest="cost_cmd", required=True)
    p_reg = csub.add_parser("regime")
    p_reg.add_argument("--n", type=int, required=True)
    p_reg.add_argument("--d", type=int, required=True)
    p_reg.add_argument("--k", type=int, required=True)
    p_steps = csub.add_parser("steps")
    p_steps.add_argument("--n", type=int, required=True)
    p_steps.add_argument("--d", type=int, required=True)
    p_steps.add_argument("--p", type=int, required=True)
    p_steps.add_argument("--model", choices=qla.STEP_MODELS, required=True)
    p_tr = csub.add_parser("transform")
    p_tr.add_argument("--matrix", required=True, help="Matrix Market file")
    p_tr.add_argument("--vector", required=True, help="one value per line")
    p_tr.add_argument("--coeffs", required=True, help="comma-separated")

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "build":
            return cmd_build(args, parser)
        if args.command == "verify":
            return cmd_verify(args, parser)
        if args.command == "noise":
            return cmd_noise(args, parser)
        if args.command == "bounds":
            return cmd_bounds(args, parser)
        if args.command == "cost":
            return cmd_cost(args, parser)
    except ValueError as exc:
        _progress(f"error: {exc}")
        return USAGE_ERROR
    parser.error("unknown command")


if __name__ == "__main__":
    sys.exit(main())
