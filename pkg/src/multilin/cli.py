"""Command-line interface.

Subcommands:

* ``bound``     -- evaluate a theorem bound for the configured parameters
* ``sup``       -- measure the empirical sup error of the configured function
* ``sharpness`` -- bound plus the attaining function's measured sup and gap
* ``verify``    -- run the full invariant suite
* ``axioms``    -- sampling check of the majorant axioms for a config's omega
* ``plot``      -- render figures from a previously written report

Exit codes: 0 success, 2 config error, 3 precondition violation,
4 quadrature failure, 5 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import List, Optional, Sequence

from . import checks
from .errors import ConfigError, PreconditionError, QuadratureError, ResourceLimitError
from .exprparse import ExpressionError
from .harness import (
    ErrorReport,
    load_config,
    reports_to_csv,
    reports_to_json,
    run_experiment,
)
from .moduli import PowerMajorant, PowerSumMajorant, check_mc_axioms

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PRECONDITION = 3
EXIT_QUADRATURE = 4
EXIT_RESOURCE = 5


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multilin",
        description="Multilinear spline interpolation with sharp worst-case error certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config_required=True):
        p.add_argument("--config", required=config_required, help="experiment config JSON")
        p.add_argument("--out", help="write the report to this path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--samples", type=int, help="odd per-axis lattice size per block")
        p.add_argument("--seed", type=int, help="seed for axiom sampling")
        p.add_argument("--sequential", action="store_true",
                       help="disable concurrent block scanning")
        p.add_argument("--fd-fallback", action="store_true",
                       help="allow finite-difference derivatives for expression sources")

    add_common(sub.add_parser("bound", help="print a theorem bound"))
    add_common(sub.add_parser("sup", help="empirical sup error of a function"))
    add_common(sub.add_parser("sharpness", help="bound, attaining-function sup, and gap"))
    add_common(sub.add_parser("axioms", help="majorant axiom sampling check"))

    ver = sub.add_parser("verify", help="run the full invariant suite")
    ver.add_argument("--out", help="write the report to this path (default: stdout)")
    ver.add_argument("--format", choices=("csv", "json"), default="csv")
    ver.add_argument("--seed", type=int, default=0)

    plot = sub.add_parser("plot", help="render figures from a report CSV")
    plot.add_argument("--report", required=True, help="report CSV written by bound/sup/sharpness")
    plot.add_argument("--out-dir", help="directory for the PNGs (default: next to the report)")
    return parser


def _apply_overrides(cfg, args):
    updates = {}
    if args.samples is not None:
        if args.samples < 3 or args.samples % 2 == 0:
            raise ConfigError("--samples must be odd and >= 3")
        updates["samples_per_axis_per_block"] = args.samples
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.fd_fallback:
        updates["fd_fallback"] = True
    if args.sequential:
        updates["parallel"] = False
    if updates:
        cfg = dataclasses.replace(cfg, **updates)
    return cfg


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_report(args, with_empirical: bool, force_extremal: bool) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    if force_extremal:
        cfg = dataclasses.replace(cfg, source="extremal", expr=None, deriv_expr=None)
    report = run_experiment(cfg, with_empirical=with_empirical)
    text = reports_to_csv([report]) if args.format == "csv" else reports_to_json([report])
    _emit(text, args.out)
    return EXIT_OK


def _run_axioms(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    if len(cfg.omega_weights) == 1 and cfg.theorem in ("T2", "T5"):
        cap = None if cfg.omega_caps is None else cfg.omega_caps[0]
        omega = PowerMajorant(cfg.omega_weights[0], cfg.omega_exponents[0], cap)
    else:
        omega = PowerSumMajorant(cfg.omega_weights, cfg.omega_exponents, cfg.omega_caps)
    violations = check_mc_axioms(omega, 10_000, cfg.seed)
    if args.format == "json":
        doc = [dataclasses.asdict(v) for v in violations]
        text = json.dumps({"violations": doc}, indent=2, sort_keys=True) + "\n"
    else:
        lines = ["axiom,tau,gamma,lhs,rhs"]
        for v in violations:
            lines.append(
                ",".join(
                    [
                        v.axiom,
                        ";".join(format(t, ".17g") for t in v.tau),
                        ";".join(format(t, ".17g") for t in v.gamma),
                        format(v.lhs, ".17g"),
                        format(v.rhs, ".17g"),
                    ]
                )
            )
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def _run_verify(args) -> int:
    results = checks.run_all(seed=args.seed)
    if args.format == "json":
        text = json.dumps([dataclasses.asdict(r) for r in results], indent=2, sort_keys=True) + "\n"
    else:
        text = checks.render_csv(results)
    _emit(text, args.out)
    if args.out:
        for res in results:
            sys.stdout.write(f"{'pass' if res.passed else 'FAIL'}  {res.name}\n")
    return EXIT_OK if all(r.passed for r in results) else 1


def _run_plot(args) -> int:
    from .plotting import render_report

    written = render_report(args.report, args.out_dir)
    for path in written:
        sys.stdout.write(f"{path}\n")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "bound":
            return _run_report(args, with_empirical=False, force_extremal=False)
        if args.command == "sup":
            return _run_report(args, with_empirical=True, force_extremal=False)
        if args.command == "sharpness":
            return _run_report(args, with_empirical=True, force_extremal=True)
        if args.command == "axioms":
            return _run_axioms(args)
        if args.command == "verify":
            return _run_verify(args)
        return _run_plot(args)
    except (ConfigError, ExpressionError) as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except PreconditionError as exc:
        sys.stderr.write(f"precondition violated: {exc}\n")
        return EXIT_PRECONDITION
    except QuadratureError as exc:
        sys.stderr.write(f"quadrature failure: {exc}\n")
        return EXIT_QUADRATURE
    except ResourceLimitError as exc:
        sys.stderr.write(f"resource cap exceeded: {exc}\n")
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
