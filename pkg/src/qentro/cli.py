"""Command-line interface: qentro <command> [subcommand] [flags].

Reports go to stdout (or --out), diagnostics to stderr. Exit codes:
0 ok (including Undecided verdicts), 2 parse errors, 3 validation errors,
4 desk-scale limits, 5 infeasible constraints, 1 internal failures.
Scalar values are printed with 12 significant digits; matrix payloads keep
full precision so they round-trip. --log-base 2 rescales entropy-valued
fields by 1/ln 2 and nothing else.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import capacity, channels, continuity, entropy, serialize
from .errors import (
    InfeasibleConstraint,
    ParseError,
    QentroError,
    ScaleExceeded,
)
from .sampling import random_hermitian, random_state, rng_for

_LN2 = math.log(2.0)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qentro")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--log-base", choices=["e", "2"], default="e")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--tol", type=float, default=None)

    p_entropy = sub.add_parser("entropy", help="entropy of a state file")
    p_entropy.add_argument("--state", required=True)
    common(p_entropy)

    p_channel = sub.add_parser("channel", help="channel computations")
    p_channel.add_argument(
        "subcommand",
        choices=["apply", "complement", "dual-check", "output-entropy", "coherent-info", "gap-bound"],
    )
    p_channel.add_argument("--channel", required=True)
    p_channel.add_argument("--state", default=None)
    p_channel.add_argument("--samples", type=int, default=200)
    common(p_channel)

    p_analyze = sub.add_parser("analyze", help="analytic family diagnostics")
    p_analyze.add_argument("subcommand", choices=["classify", "sweep"])
    p_analyze.add_argument("--family", required=True)
    p_analyze.add_argument("--n-list", default="2,4,8,16,32,64,128,256,512,1024")
    p_analyze.add_argument("--input-rule", choices=["uniform", "custom"], default="uniform")
    p_analyze.add_argument("--weights", default=None)
    common(p_analyze)

    p_opt = sub.add_parser("optimize", help="capacity and roof optimizers")
    p_opt.add_argument("subcommand", choices=["holevo", "eof", "divergence-center", "hk"])
    p_opt.add_argument("--channel", default=None)
    p_opt.add_argument("--state", default=None)
    p_opt.add_argument("--states", default=None)
    p_opt.add_argument("--constraint", default=None)
    p_opt.add_argument("--dims", default=None)
    p_opt.add_argument("--k", type=int, default=1)
    p_opt.add_argument("--m", type=int, default=None)
    p_opt.add_argument("--restarts", type=int, default=20)
    common(p_opt)
    return parser


def _require(args, name):
    value = getattr(args, name.replace("-", "_"))
    if value is None:
        raise ParseError(f"--{name} is required for this subcommand")
    return value


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from exc


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ParseError(f"expected comma-separated numbers, got {text!r}") from exc


def _dispatch(args, scale: float):
    ent = lambda x: float(x) * scale
    base = args.log_base

    if args.command == "entropy":
        state = serialize.state_from_json(serialize.load_json(args.state))
        return {"entropy": ent(entropy.quantum_entropy(state)), "log_base": base}, None

    if args.command == "channel":
        phi = serialize.channel_from_json(serialize.load_json(args.channel))
        sub = args.subcommand
        if sub == "apply":
            state = serialize.state_from_json(serialize.load_json(_require(args, "state")))
            out = channels.apply(phi, state)
            return {
                "trace": out.trace,
                "state": serialize.exact(serialize.matrix_to_json(out.matrix)),
            }, None
        if sub == "complement":
            comp = channels.complement(phi)
            payload = serialize.channel_to_json(comp)
            return {
                "dim_in": payload["dim_in"],
                "dim_out": payload["dim_out"],
                "kraus": [serialize.exact(k) for k in payload["kraus"]],
            }, None
        if sub == "dual-check":
            rng = rng_for(args.seed, 1)
            dual_map = channels.dual(phi)
            worst = 0.0
            for _ in range(args.samples):
                rho = random_state(rng, phi.dim_in)
                x = random_hermitian(rng, phi.dim_out)
                lhs = float(np.real(np.trace(channels.apply(phi, rho).matrix @ x.matrix)))
                rhs = float(np.real(np.trace(rho.matrix @ dual_map(x).matrix)))
                worst = max(worst, abs(lhs - rhs))
            return {
                "samples": args.samples,
                "max_residual": worst,
                "passed": worst <= 1e-9,
            }, None
        if sub == "output-entropy":
            state = serialize.state_from_json(serialize.load_json(_require(args, "state")))
            return {
                "output_entropy": ent(entropy.output_entropy(phi, state)),
                "log_base": base,
            }, None
        if sub == "coherent-info":
            state = serialize.state_from_json(serialize.load_json(_require(args, "state")))
            return {
                "coherent_information": ent(entropy.coherent_information(phi, state)),
                "log_base": base,
            }, None
        if sub == "gap-bound":
            report = continuity.complement_gap_bound_check(
                phi, samples=args.samples, seed=args.seed
            )
            return {
                "bound": ent(report.bound),
                "max_observed_gap": ent(report.max_gap),
                "samples": report.samples,
                "violations": report.violations,
                "log_base": base,
            }, None

    if args.command == "analyze":
        family = serialize.family_from_json(serialize.load_json(args.family))
        if args.subcommand == "classify":
            verdicts = continuity.series_classifier(family)
            return {
                "operation": verdicts.operation.value,
                "complement": verdicts.complement.value,
                "operation_reason": verdicts.operation_reason,
                "complement_reason": verdicts.complement_reason,
            }, None
        n_list = _parse_ints(args.n_list)
        weights = _parse_floats(args.weights) if args.weights else None
        rows = continuity.truncation_sweep(
            family, n_list, input_rule=args.input_rule, weights=weights
        )
        table = [
            (r.n, ent(r.entropy), ent(r.tail_entropy), ent(r.sup_entropy)) for r in rows
        ]
        report = {
            "rows": [
                {"n": n, "entropy": e, "tail_entropy": t, "sup_entropy": s}
                for n, e, t, s in table
            ],
            "log_base": base,
        }
        return report, (["n", "entropy", "tail_entropy", "sup_entropy"], table)

    if args.command == "optimize":
        sub = args.subcommand
        tol = args.tol if args.tol is not None else 1e-6
        if sub == "holevo":
            phi = serialize.channel_from_json(serialize.load_json(_require(args, "channel")))
            constraint = (
                serialize.constraint_from_json(serialize.load_json(args.constraint))
                if args.constraint
                else capacity.ConstraintSet.unconstrained()
            )
            solution = capacity.holevo_capacity(
                phi, constraint, m=args.m, restarts=args.restarts, tol=tol, seed=args.seed
            )
            optimality = capacity.optimal_ensemble_report(phi, constraint, solution)
            ens_payload = serialize.ensemble_to_json(solution.ensemble)
            return {
                "value": ent(solution.value),
                "bound_direction": "lower",
                "log_base": base,
                "ensemble": {
                    "parts": [
                        {"weight": p["weight"], "state": serialize.exact(p["state"])}
                        for p in ens_payload["parts"]
                    ]
                },
                "optimality": {
                    "max_deviation": ent(optimality.max_deviation),
                    "flagged": list(optimality.flagged),
                },
            }, None
        if sub == "eof":
            omega = serialize.state_from_json(serialize.load_json(_require(args, "state")))
            dims = _parse_ints(_require(args, "dims"))
            if len(dims) != 2:
                raise ParseError("--dims must be dA,dB")
            value = capacity.eof(
                omega, (dims[0], dims[1]), m=args.m, restarts=args.restarts, tol=tol, seed=args.seed
            )
            return {"value": ent(value), "bound_direction": "upper", "log_base": base}, None
        if sub == "divergence-center":
            states = serialize.states_from_json(serialize.load_json(_require(args, "states")))
            result = continuity.divergence_center(states, tol=tol)
            return {
                "radius": ent(result.radius),
                "weights": [float(w) for w in result.weights],
                "iterations": result.iterations,
                "log_base": base,
                "center": serialize.exact(serialize.matrix_to_json(result.center.matrix)),
            }, None
        if sub == "hk":
            phi = serialize.channel_from_json(serialize.load_json(_require(args, "channel")))
            state = serialize.state_from_json(serialize.load_json(_require(args, "state")))
            approx = continuity.approximator(phi, state, args.k)
            value = continuity.brute_force_hk(
                phi, state, args.k, m=args.m, restarts=args.restarts, seed=args.seed
            )
            return {
                "k": args.k,
                "lower_bound": ent(approx.lower_bound),
                "gap_certificate": ent(approx.gap_certificate),
                "brute_force_value": ent(value),
                "bound_direction": "lower",
                "log_base": base,
            }, None

    raise ParseError(f"unknown command {args.command!r}")


def _flatten(obj, prefix=""):
    rows = []
    if isinstance(obj, dict):
        for key, value in obj.items():
            rows.extend(_flatten(value, f"{prefix}{key}." if prefix else f"{key}."))
        return rows
    if isinstance(obj, serialize._ExactMatrix):
        return [(prefix[:-1], "matrix")]
    if isinstance(obj, (list, tuple)):
        for idx, value in enumerate(obj):
            rows.extend(_flatten(value, f"{prefix}{idx}."))
        return rows
    return [(prefix[:-1], obj)]


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    scale = 1.0 if args.log_base == "e" else 1.0 / _LN2
    try:
        report, table = _dispatch(args, scale)
        if args.format == "csv":
            if table is not None:
                text = serialize.render_csv(table[0], table[1])
            else:
                rows = _flatten(report)
                text = serialize.render_csv(["key", "value"], rows)
        else:
            text = serialize.render_report(report) + "\n"
        _emit(text, args.out)
        return 0
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except ScaleExceeded as exc:
        print(f"scale exceeded: {exc}", file=sys.stderr)
        return 4
    except InfeasibleConstraint as exc:
        print(f"infeasible constraint: {exc}", file=sys.stderr)
        return 5
    except QentroError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - internal failures
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
