"""Command-line interface.

Subcommands: ``critical-value``, ``test``, ``power``, ``level``, and
``null-diagnostic``.  Exit codes: 0 success, 1 runtime failure, 2 usage or
validation error.  Scalar text output uses 6 significant digits; JSON output
carries full precision and a ``schema`` field of ``smt/1``.
"""

from __future__ import annotations

import argparse
import json
import sys

from .fields import make_field_spec, field_spec_string, parse_field_kind
from .memory_test import TestConfig, compute_statistic, origin_box, shifted_box
from .power_harness import (
    SCHEMA,
    ExperimentGrid,
    empirical_level,
    format_sig,
    ks_distance,
    null_statistic_sample,
    power_table,
    replication_stream,
    write_power_tables,
)
from .stable_core import critical_value, null_cdf_t
from . import fields


def _alpha_arg(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not 0.0 < x < 2.0:
        raise argparse.ArgumentTypeError(f"must lie strictly between 0 and 2, got {text}")
    return x


def _unit_arg(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not 0.0 < x < 1.0:
        raise argparse.ArgumentTypeError(f"must lie strictly between 0 and 1, got {text}")
    return x


def _positive_int_arg(text):
    try:
        x = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if x < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {text}")
    return x


def _field_arg(text):
    try:
        parse_field_kind(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return text


def _add_field_flags(sub):
    sub.add_argument("--field", required=True, type=_field_arg,
                     help="field spec: iid, subgaussian, effdim-iid, effdim-ma1, or ma:[..]=c,...")
    sub.add_argument("--alpha", required=True, type=_alpha_arg, help="stability index in (0, 2)")
    sub.add_argument("--d", type=_positive_int_arg, default=None,
                     help="field dimension (default: implied by the field, else 2)")
    sub.add_argument("--n", required=True, type=_positive_int_arg, help="large-box half-width")
    sub.add_argument("--rho", type=_unit_arg, default=0.65,
                     help="shift exponent in (0, 1), default 0.65")
    sub.add_argument("--seed", type=int, default=0, help="base seed, default 0")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smt",
        description="Block-maxima ratio test for length of memory of stable random fields.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    cv = subs.add_parser("critical-value", help="print the rejection threshold tau_beta")
    cv.add_argument("--alpha", required=True, type=_alpha_arg)
    cv.add_argument("--beta", type=_unit_arg, default=0.1, help="test level, default 0.1")
    cv.add_argument("--json", action="store_true")

    tst = subs.add_parser("test", help="run the test once and print the result as JSON")
    _add_field_flags(tst)
    tst.add_argument("--beta", type=_unit_arg, default=0.1, help="test level, default 0.1")

    pw = subs.add_parser("power", help="empirical power tables over a (alpha, rho, n) grid")
    pw.add_argument("--field", required=True, type=_field_arg)
    pw.add_argument("--alpha-list", required=True, type=_alpha_arg, nargs="+")
    pw.add_argument("--rho-list", type=_unit_arg, nargs="+", default=[0.65])
    pw.add_argument("--n-list", required=True, type=_positive_int_arg, nargs="+")
    pw.add_argument("--d", type=_positive_int_arg, default=None)
    pw.add_argument("--beta", type=_unit_arg, default=0.1)
    pw.add_argument("--reps", type=_positive_int_arg, default=None,
                    help="replications per cell (default 400 for dim 2, 800 for dim 3)")
    pw.add_argument("--seed", type=int, default=0)
    pw.add_argument("--out", default=".", help="output directory, default the working directory")
    pw.add_argument("--format", choices=("csv", "json"), default="csv")

    lv = subs.add_parser("level", help="empirical rejection frequency under a null field")
    _add_field_flags(lv)
    lv.add_argument("--beta", type=_unit_arg, default=0.1)
    lv.add_argument("--reps", type=_positive_int_arg, default=2000)

    nd = subs.add_parser("null-diagnostic",
                         help="KS distance between sampled t_n and its null law")
    _add_field_flags(nd)
    nd.add_argument("--reps", type=_positive_int_arg, default=2000)
    nd.add_argument("--json", action="store_true")

    return parser


def _resolve_field(parser, args):
    # power carries a list of alphas; the grid swaps the field's alpha per table
    alpha = args.alpha_list[0] if hasattr(args, "alpha_list") else args.alpha
    try:
        return make_field_spec(args.field, alpha=alpha, dim=args.d)
    except ValueError as exc:
        parser.error(str(exc))


def _cmd_critical_value(args) -> int:
    tau = critical_value(args.alpha, args.beta)
    if args.json:
        doc = {"schema": SCHEMA, "kind": "critical_value",
               "alpha": args.alpha, "beta": args.beta, "tau_beta": tau}
        print(json.dumps(doc, indent=2))
    else:
        print(format_sig(tau))
    return 0


def _cmd_test(args, field) -> int:
    config = TestConfig(alpha=args.alpha, dim=field.dim, n=args.n, rho=args.rho, beta=args.beta)
    support = [origin_box(config.n, config.dim), shifted_box(config.n, config.rho, config.dim)]
    rng = replication_stream(args.seed, config.alpha, config.rho, config.n, 0)
    result = compute_statistic(fields.realize(field, rng, support), config)
    doc = {
        "schema": SCHEMA,
        "kind": "test",
        "field": field_spec_string(field),
        "alpha": args.alpha,
        "d": field.dim,
        "n": args.n,
        "rho": args.rho,
        "beta": args.beta,
        "seed": args.seed,
        "u_n": result.u_n,
        "v_n": result.v_n,
        "t_n": result.t_n,
        "tau_beta": result.tau_beta,
        "reject": result.reject,
    }
    print(json.dumps(doc, indent=2))
    return 0


def _cmd_power(args, field) -> int:
    reps = args.reps if args.reps is not None else (800 if field.dim == 3 else 400)
    grid = ExperimentGrid(
        field=field,
        alphas=tuple(args.alpha_list),
        rhos=tuple(args.rho_list),
        ns=tuple(args.n_list),
        beta=args.beta,
        replications=reps,
        seed=args.seed,
    )
    tables = power_table(grid)
    for path in write_power_tables(tables, args.out, fmt=args.format):
        print(path)
    return 0


def _cmd_level(args, field) -> int:
    config = TestConfig(alpha=args.alpha, dim=field.dim, n=args.n, rho=args.rho, beta=args.beta)
    result = empirical_level(field, config, args.reps, args.seed)
    doc = {
        "schema": SCHEMA,
        "kind": "level",
        "field": result.field_spec,
        "alpha": config.alpha,
        "d": config.dim,
        "n": config.n,
        "rho": config.rho,
        "beta": config.beta,
        "replications": result.replications,
        "seed": result.seed,
        "empirical_level": result.empirical_level,
    }
    print(json.dumps(doc, indent=2))
    return 0


def _cmd_null_diagnostic(args, field) -> int:
    config = TestConfig(alpha=args.alpha, dim=field.dim, n=args.n, rho=args.rho, beta=0.1)
    sample = null_statistic_sample(field, config, args.reps, args.seed)
    distance = ks_distance(sample, lambda t: null_cdf_t(config.alpha, t))
    if args.json:
        doc = {
            "schema": SCHEMA,
            "kind": "null_diagnostic",
            "field": field_spec_string(field),
            "alpha": config.alpha,
            "d": config.dim,
            "n": config.n,
            "rho": config.rho,
            "replications": args.reps,
            "seed": args.seed,
            "ks_distance": distance,
        }
        print(json.dumps(doc, indent=2))
    else:
        print(format_sig(distance))
    return 0


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "critical-value":
            return _cmd_critical_value(args)
        field = _resolve_field(parser, args)
        if args.command == "test":
            return _cmd_test(args, field)
        if args.command == "power":
            return _cmd_power(args, field)
        if args.command == "level":
            return _cmd_level(args, field)
        if args.command == "null-diagnostic":
            return _cmd_null_diagnostic(args, field)
        parser.error(f"unknown command {args.command!r}")
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"smt: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
