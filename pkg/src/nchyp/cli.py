"""Command-line experiment runner and condition checker.

Subcommands
-----------
run           integrate one experiment (preset or JSON config) and write the
              diagnostics trace as CSV
convergence   run a refinement family and report observed orders
check         verify an entropy / stability / well-balancing condition over
              seeded random states
list-presets  show the built-in experiment catalogue

Exit codes: 0 success, 1 invalid configuration, 2 numerical failure,
3 condition violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .conditions import reports_to_csv, run_condition_check
from .experiments import (ExperimentConfig, PRESETS, make_preset,
                          run_convergence, run_experiment)
from .fluxes import make_fluxset
from .systems import make_system
from .timeint import NumericalBlowupError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2
EXIT_VIOLATION = 3

_CHECK_TOLERANCES = {"ec": 1e-12, "es": 1e-14, "wb": 1e-12}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="nchyp", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="integrate one experiment")
    _add_config_flags(run_p)

    conv_p = sub.add_parser("convergence", help="refinement study")
    _add_config_flags(conv_p)
    conv_p.add_argument("--element-list", default="16,64,256",
                        help="comma-separated element counts")

    check_p = sub.add_parser("check", help="verify a flux condition")
    check_p.add_argument("--system", required=True)
    check_p.add_argument("--flux", required=True)
    check_p.add_argument("--condition", choices=sorted(_CHECK_TOLERANCES), default="ec")
    check_p.add_argument("--samples", type=int, default=10_000)
    check_p.add_argument("--seed", type=int, default=0)
    check_p.add_argument("--entropy", default=None)
    check_p.add_argument("--param", action="append", default=[],
                         help="system/flux parameter as key=value (repeatable)")
    check_p.add_argument("--tolerance", type=float, default=None)
    check_p.add_argument("--output", default=None)

    sub.add_parser("list-presets", help="show experiment catalogue")
    return parser


def _add_config_flags(p) -> None:
    p.add_argument("--preset", default=None)
    p.add_argument("--config", default=None, help="JSON file overriding fields")
    p.add_argument("--system", default=None)
    p.add_argument("--flux", default=None)
    p.add_argument("--ic", default=None)
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--elements", type=int, default=None)
    p.add_argument("--cfl", type=float, default=None)
    p.add_argument("--tfinal", type=float, default=None)
    p.add_argument("--alpha", default=None,
                   help="comma-separated blending weights for the flux set")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", default=None)


def _parse_params(items) -> dict:
    out = {}
    for item in items:
        if "=" not in item:
            raise _UsageError(f"--param expects key=value, got {item!r}")
        key, val = item.split("=", 1)
        try:
            out[key] = json.loads(val)
        except json.JSONDecodeError:
            out[key] = val
    return out


def _config_from_args(args) -> ExperimentConfig:
    base: dict = {}
    if args.preset:
        base = make_preset(args.preset).to_dict()
    if args.config:
        with open(args.config) as fh:
            base.update(json.load(fh))
    if not base:
        raise _UsageError("provide --preset and/or --config")
    for key in ("system", "flux", "ic", "degree", "elements", "cfl",
                "seed", "output"):
        val = getattr(args, key)
        if val is not None:
            base[key] = val
    if args.tfinal is not None:
        base["t_final"] = args.tfinal
    if args.alpha is not None:
        weights = [float(a) for a in args.alpha.split(",")]
        flux_params = dict(base.get("flux_params", {}))
        if len(weights) == 1:
            flux_params["alpha"] = weights[0]
        else:
            flux_params["alphas"] = tuple(weights)
        base["flux_params"] = flux_params
    base.setdefault("name", args.preset or "custom")
    base["domain"] = tuple(base.get("domain", (-1.0, 1.0)))
    return ExperimentConfig(**base)


def _cmd_run(args) -> int:
    config = _config_from_args(args)
    result = run_experiment(config)
    s = result.summary
    print(f"{result.name}: t={s['t_final']:.6g} "
          f"entropy_drift={s['entropy_drift']:.3e} "
          f"entropy_residual={s['entropy_residual']:.3e} "
          f"max_mass_drift={max(abs(d) for d in s['mass_drift']):.3e}")
    for key, val in sorted(s.items()):
        if key.startswith("wb_") or key == "l2_error":
            print(f"  {key} = {val:.6e}")
    if config.output:
        print(f"trace written to {config.output}")
    return EXIT_OK


def _cmd_convergence(args) -> int:
    config = _config_from_args(args)
    counts = [int(k) for k in args.element_list.split(",")]
    table = run_convergence(config, counts)
    rows = []
    for i, (k, err) in enumerate(zip(table["elements"], table["errors"])):
        rate = table["eoc"][i - 1] if i else float("nan")
        rows.append({"elements": k, "l2_error": f"{err:.17g}",
                     "eoc": "" if i == 0 else f"{rate:.4f}"})
        print(f"K={k:6d}  error={err:.6e}  eoc={'' if i == 0 else f'{rate:.3f}'}")
    if args.output:
        with open(args.output, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=["elements", "l2_error", "eoc"])
            writer.writeheader()
            writer.writerows(rows)
    return EXIT_OK


def _cmd_check(args) -> int:
    params = _parse_params(args.param)
    system = make_system(args.system, **{k: v for k, v in params.items()
                                         if k in ("gamma", "gravity", "celerity",
                                                  "dim", "m", "n", "split")})
    flux_params = dict(params)
    flux_params.update({k: v for k, v in system.params.items()})
    fluxset = make_fluxset(args.flux, **{k: v for k, v in flux_params.items()
                                         if k not in ("split",)})
    report = run_condition_check(system, fluxset, args.condition,
                                 args.samples, args.seed, entropy=args.entropy)
    tol = args.tolerance if args.tolerance is not None \
        else _CHECK_TOLERANCES[args.condition]
    status = "pass" if report.max_violation <= tol else "FAIL"
    if report.samples == 0:
        print(f"warning: zero samples requested; {report.condition} passes vacuously")
    print(f"{report.condition}: samples={report.samples} "
          f"max_violation={report.max_violation:.3e} tol={tol:.1e} [{status}]")
    if args.output:
        reports_to_csv([report], args.output)
    return EXIT_OK if status == "pass" else EXIT_VIOLATION


def _cmd_list_presets() -> int:
    for name in sorted(PRESETS):
        cfg = PRESETS[name]()
        mesh = f"{cfg.elements} el" if cfg.mesh_kind == "line" \
            else f"{cfg.elements} el warped"
        print(f"{name:24s} {cfg.system:14s} flux={cfg.flux:16s} "
              f"{mesh:16s} cfl={cfg.cfl:g} T={cfg.t_final:g}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "convergence":
            return _cmd_convergence(args)
        if args.command == "check":
            return _cmd_check(args)
        return _cmd_list_presets()
    except (_UsageError, ValueError, TypeError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NumericalBlowupError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
