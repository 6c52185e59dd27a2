"""Command-line entry points.

Subcommands: validate-params, check-init, run, continuation, mms, diagnose.
Exit codes: 0 success, 2 configuration/validation error, 3 solver failure.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import fields as dc_fields

from . import diagnostics, io
from .config import RunConfig, load_config
from .errors import ConfigError, DcnsError, LegFailed, NoContraction
from .fields import Grid
from .initial_data import InitSpec, check_compatibility, gen_initial
from .mms import run_suite
from .params import ModelParams, validate_params
from .picard import ContinuationPlan, RunSetup, continuation_run, solve_with_halving

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3


def _model_params(cfg: RunConfig) -> ModelParams:
    m = cfg.model
    return ModelParams(gamma=m.gamma, nu=m.nu, alpha=m.alpha, beta=m.beta,
                       A=m.A, R=m.R, S_bar=m.S_bar)


def _init_spec(cfg: RunConfig) -> InitSpec:
    i = cfg.init
    return InitSpec(kappa=i.kappa, q=i.q, u0_amp=i.u0_amp,
                    u0_radius=i.u0_radius, s0_amp=i.s0_amp, eta=i.eta)


def _out_dir(cfg: RunConfig) -> str:
    return os.environ.get("CNS_OUT_DIR", cfg.output.dir)


def cmd_validate_params(cfg: RunConfig, args) -> int:
    dc = validate_params(_model_params(cfg), strict=not args.allow_unproven)
    for name in ("c_v", "delta", "iota", "a", "b", "a1", "a2", "a3", "a4", "l_bar"):
        print(f"{name} = {getattr(dc, name):.17g}")
    for w in dc.warnings:
        print(f"warning: {w}")
    return EXIT_OK


def cmd_check_init(cfg: RunConfig, args) -> int:
    strict = not args.allow_unproven
    dc = validate_params(_model_params(cfg), strict=strict)
    spec = _init_spec(cfg)
    coarse_grid = Grid(L=cfg.domain.L, N=cfg.domain.N)
    fine_grid = Grid(L=cfg.domain.L, N=2 * cfg.domain.N)
    r_coarse = gen_initial(spec, coarse_grid, dc, strict=strict)
    r_fine = gen_initial(spec, fine_grid, dc, strict=strict)
    coarse = check_compatibility(r_coarse, dc, threshold=args.threshold)
    report = check_compatibility(r_fine, dc, threshold=args.threshold, coarse=coarse)
    for key, val in report.norms.items():
        print(f"{key} = {val:.17g}  (trend N->2N: {report.trend[key]:.6g})")
    print(f"grad_sqrt_h_l6 = {report.grad_sqrt_h_l6:.17g}")
    print(f"threshold = {report.threshold:g}")
    print(f"passed = {report.passed}")
    return EXIT_OK if report.passed else EXIT_CONFIG


def cmd_run(cfg: RunConfig, args) -> int:
    strict = not args.allow_unproven
    dc = validate_params(_model_params(cfg), strict=strict)
    grid = Grid(L=cfg.domain.L, N=cfg.domain.N)
    r0 = gen_initial(_init_spec(cfg), grid, dc, strict=strict,
                     eps=cfg.regularization.eps)
    result = solve_with_halving(
        r0, dc, cfg.time.t_end, max_halvings=cfg.picard.max_halvings,
        tol=cfg.picard.tol, max_iters=cfg.picard.max_iters,
        upsilon1=cfg.picard.upsilon1, cfl=cfg.time.cfl,
        dt_max=cfg.time.dt_max, eps=cfg.regularization.eps)

    traj = result.trajectory
    records = diagnostics.trajectory_records(traj.times, traj.states, dc,
                                             q=cfg.init.q)

    out = _out_dir(cfg)
    os.makedirs(out, exist_ok=True)
    every = cfg.time.snapshot_every
    last = len(traj) - 1
    for j, (t, state) in enumerate(zip(traj.times, traj.states)):
        if j == 0 or j == last or (every > 0 and j % every == 0):
            io.write_snapshot(os.path.join(out, f"snapshot_{j:06d}.csv"),
                              float(t), state, dc)
    io.write_diagnostics(os.path.join(out, "diagnostics.csv"), records)

    rep = diagnostics.drift_report(records)
    print(f"converged = {result.converged}  iterates = {len(result.reports)}  "
          f"T = {result.T:.17g}  dt = {result.dt:.17g}  halvings = {result.halvings}")
    for name, val in rep.drift.items():
        kind = "abs" if rep.absolute[name] else "rel"
        print(f"drift[{name}] = {val:.6e} ({kind})")
    print(f"outputs in {out}")
    return EXIT_OK


def cmd_continuation(cfg: RunConfig, args) -> int:
    strict = not args.allow_unproven
    dc = validate_params(_model_params(cfg), strict=strict)
    grid = Grid(L=cfg.domain.L, N=cfg.domain.N)
    plan = ContinuationPlan(param=cfg.continuation.param,
                            start=cfg.continuation.start,
                            factor=cfg.continuation.factor,
                            count=cfg.continuation.count,
                            R0=cfg.continuation.R0)
    setup = RunSetup(grid=grid, dc=dc, init=_init_spec(cfg), T=cfg.time.t_end,
                     cfl=cfg.time.cfl, dt_max=cfg.time.dt_max,
                     eps=cfg.regularization.eps, tol=cfg.picard.tol,
                     max_iters=cfg.picard.max_iters,
                     upsilon1=cfg.picard.upsilon1, strict=strict)
    legs = continuation_run(plan, setup)
    print(f"{plan.param} legs: start = {plan.start:g}, factor = {plan.factor:g}")
    for leg in legs:
        parts = [f"{plan.param} = {leg.value:.6g}", f"iters = {leg.iterations}"]
        if leg.diff_u is not None:
            parts.append(f"|du|_2 = {leg.diff_u:.6e}")
        if leg.diff_phi is not None:
            parts.append(f"|dphi|_2 = {leg.diff_phi:.6e}")
        if leg.min_phi_window is not None:
            parts.append(f"min phi on window = {leg.min_phi_window:.6g}")
        print("  ".join(parts))
    return EXIT_OK


def cmd_mms(args) -> int:
    ok = True
    for res in run_suite(args.solver):
        lo, hi = res.expected
        status = "ok" if res.ok else "FAIL"
        print(f"{res.name}: observed order {res.order:.3f} "
              f"(expected [{lo:g}, {hi:g}]) {status}")
        ok = ok and res.ok
    return EXIT_OK if ok else EXIT_SOLVER


def cmd_diagnose(cfg: RunConfig, args) -> int:
    dc = validate_params(_model_params(cfg), strict=not args.allow_unproven)
    grid = Grid(L=cfg.domain.L, N=cfg.domain.N)
    t, state = io.read_snapshot(args.snapshot, grid, eta=cfg.init.eta,
                                eps=cfg.regularization.eps)
    rec = diagnostics.record(state, dc, q=cfg.init.q)
    rec.t = t
    for f in dc_fields(rec):
        val = getattr(rec, f.name)
        if isinstance(val, float):
            print(f"{f.name} = {val:.17g}")
        else:
            print(f"{f.name} = {val}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dcns",
        description="1-D vacuum-degenerate compressible flow laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, needs_config=True, **extra):
        p = sub.add_parser(name, **extra)
        if needs_config:
            p.add_argument("config", help="INI run configuration")
            p.add_argument("--allow-unproven", action="store_true",
                           help="lenient parameter/data admissibility")
        p.set_defaults(fn=fn, needs_config=needs_config)
        return p

    add("validate-params", cmd_validate_params)
    p = add("check-init", cmd_check_init)
    p.add_argument("--threshold", type=float, default=1e6,
                   help="pass/fail bound on the weighted data norms")
    add("run", cmd_run)
    add("continuation", cmd_continuation)
    p = add("mms", cmd_mms, needs_config=False)
    p.add_argument("--solver", choices=("all", "transport", "momentum"),
                   default="all")
    p = add("diagnose", cmd_diagnose)
    p.add_argument("snapshot", help="snapshot CSV to recompute diagnostics for")
    return parser


def cli(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.needs_config:
            cfg = load_config(args.config)
            return args.fn(cfg, args)
        return args.fn(args)
    except (NoContraction, LegFailed) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ConfigError,) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DcnsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main() -> None:
    sys.exit(cli())
