"""Command-line interface.

    loconc q      --dist <json> --coeffs <json> --lambda <f> --method exact|mc
    loconc alpha  --coeffs <json> --tlo L --thi H --tol E
    loconc lcd    --coeffs <json> --gamma G --alpha A [--tmax T] [--tol E]
    loconc bound  --params <json>
    loconc run    --spec <json> --out <csv>
    loconc verify --suite <name> [--out <csv>]

JSON arguments accept inline text or a path to a file.  Exit codes:
0 pass, 1 violation, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import bounds as bd
from . import concentration as cc
from . import distributions as ds
from . import harness as hn
from . import lattice as lt
from .sentinel import is_infinite


def _load_json_arg(text: str):
    candidate = text.strip()
    if not candidate.startswith(("{", "[")) and os.path.exists(candidate):
        with open(candidate) as fh:
            return json.load(fh)
    return json.loads(candidate)


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _cmd_q(args) -> int:
    dist = ds.dist_from_json(_load_json_arg(args.dist))
    coeffs = lt.coeffs_from_json(_load_json_arg(args.coeffs)) if args.coeffs else (1.0,)
    spec = ds.SumSpec.iid(coeffs, dist)
    if args.method == "exact":
        conv = cc.exact_convolution(spec)
        est = cc.q_exact(conv, args.lam)
    else:
        est = cc.q_monte_carlo(spec, args.lam, args.count, args.seed, args.delta)
    _emit(
        {
            "lambda": est.lam,
            "value": est.value,
            "method": est.method,
            "sample_count": est.sample_count,
            "ci_half_width": est.ci_half_width,
            "seed": est.seed,
        }
    )
    return 0


def _cmd_alpha(args) -> int:
    coeffs = lt.coeffs_from_json(_load_json_arg(args.coeffs))
    value = lt.alpha_over_interval(coeffs, args.tlo, args.thi, args.tol)
    _emit({"alpha_inf": value, "t_lo": args.tlo, "t_hi": args.thi, "tol": args.tol})
    return 0


def _cmd_lcd(args) -> int:
    coeffs = lt.coeffs_from_json(_load_json_arg(args.coeffs))
    value = lt.essential_lcd(coeffs, args.gamma, args.alpha, args.tmax, args.tol)
    _emit(
        {
            "lcd": "inf" if is_infinite(value) else value,
            "gamma": args.gamma,
            "alpha": args.alpha,
            "t_max": args.tmax,
            "tol": args.tol,
        }
    )
    return 0


def _cmd_bound(args) -> int:
    params = _load_json_arg(args.params)
    which = params.pop("which")
    consts = bd.ConstantSet(**params.pop("constants", {}))
    if which == "kr":
        value = bd.kr_bound(params["lambda"], params["lambda_k"], params["q_k"], consts.C_front)
    elif which == "esseen_prop":
        value = bd.esseen_prop_bound(params["lambda"], params["lambda_k"], params["m_k"], consts.C_front)
    elif which == "fs":
        value = bd.fs_bound(params["a_norm"], params["D"], params["alpha"], params["p"], consts)
    elif which == "rv":
        value = bd.rv_bound(params["a_norm"], params["D"], params["gamma"], params["alpha"], params["p"], consts)
    elif which == "thm1":
        value = bd.thm1_bound(params["a_norm"], params["alpha"], params["M1"], consts)
    elif which == "thm2":
        value = bd.thm2_bound(params["a_norm"], params["gamma"], params["alpha"], params["M1"], consts)
    elif which == "corollary":
        result = bd.corollary_bound(
            params["a_norm"], params["D"], params["tau"], params.get("alpha"),
            params.get("gamma"), params["M_tau"], consts,
        )
        _emit(
            {
                "which": which,
                "rhs": "inf" if is_infinite(result.value) else result.value,
                "rhs_alg": "inf" if is_infinite(result.rhs_alg) else result.rhs_alg,
                "rhs_exp": result.rhs_exp,
                "lambda": result.lam,
            }
        )
        return 0
    else:
        raise ValueError(f"unknown bound {which!r}")
    _emit({"which": which, "rhs": "inf" if is_infinite(value) else value})
    return 0


def _cmd_run(args) -> int:
    spec = hn.ExperimentSpec.from_json(_load_json_arg(args.spec))
    report = hn.run_experiment(spec)
    if spec.constant_policy == "fit-on-corpus":
        fitted = {}
        for bound_id in spec.bound_ids:
            outcome = hn.fit_constants([report], bound_id)
            if outcome.ok:
                fitted[bound_id] = outcome.constants
        report = hn.refit_report(report, fitted)
    hn.report_to_csv(report, args.out)
    _emit(report.summary)
    return 0 if report.summary["violations"] == 0 else 1


def _cmd_verify(args) -> int:
    return hn.verify_suite(args.suite, args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loconc",
        description="Concentration functions of weighted sums: estimation and bound checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_q = sub.add_parser("q", help="concentration function of a weighted sum")
    p_q.add_argument("--dist", required=True, help="distribution JSON (inline or path)")
    p_q.add_argument("--coeffs", default=None, help="coefficient JSON (inline or path)")
    p_q.add_argument("--lambda", dest="lam", type=float, required=True)
    p_q.add_argument("--method", choices=("exact", "mc"), default="exact")
    p_q.add_argument("--count", type=int, default=100_000)
    p_q.add_argument("--seed", type=int, default=0)
    p_q.add_argument("--delta", type=float, default=1e-3)
    p_q.set_defaults(func=_cmd_q)

    p_a = sub.add_parser("alpha", help="certified lattice-distance infimum")
    p_a.add_argument("--coeffs", required=True)
    p_a.add_argument("--tlo", type=float, required=True)
    p_a.add_argument("--thi", type=float, required=True)
    p_a.add_argument("--tol", type=float, default=1e-6)
    p_a.set_defaults(func=_cmd_alpha)

    p_l = sub.add_parser("lcd", help="essential least common denominator")
    p_l.add_argument("--coeffs", required=True)
    p_l.add_argument("--gamma", type=float, required=True)
    p_l.add_argument("--alpha", type=float, required=True)
    p_l.add_argument("--tmax", type=float, default=None)
    p_l.add_argument("--tol", type=float, default=1e-6)
    p_l.set_defaults(func=_cmd_lcd)

    p_b = sub.add_parser("bound", help="evaluate one bound formula")
    p_b.add_argument("--params", required=True, help='{"which": "thm1", ...}')
    p_b.set_defaults(func=_cmd_bound)

    p_r = sub.add_parser("run", help="run an experiment spec, write a CSV report")
    p_r.add_argument("--spec", required=True)
    p_r.add_argument("--out", required=True)
    p_r.set_defaults(func=_cmd_run)

    p_v = sub.add_parser("verify", help="run a verification suite")
    p_v.add_argument("--suite", required=True, choices=hn.SUITE_NAMES)
    p_v.add_argument("--out", default=None)
    p_v.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
