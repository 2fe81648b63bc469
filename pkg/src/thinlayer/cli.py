"""Command-line entry point.

Subcommands: closures, solve-limit, solve-adim, transform-check, sweep.
Exit codes: 0 success, 2 configuration error, 3 solver failure, 4 I/O
error.  With --json, errors are written to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .adim_solver import solve_adimensional
from .closures import TABLE_HEADER, ClosureSet, closure_table
from .config import RunConfig, override_domain_eps, parse_config
from .errors import (
    ConfigError,
    IoError,
    NonConvergence,
    SolveFailure,
    ThinlayerError,
    ValidityViolation,
)
from .experiments import SweepConfig, run_epsilon_sweep, write_report
from .grids import rescale_domain
from .limit_profile import LIMIT_EXPONENT, VelocityProfile, solve_limit_profile
from .transforms import transform_report

_EXIT_CONFIG = 2
_EXIT_SOLVER = 3
_EXIT_IO = 4


def _fmt_rows(rows) -> str:
    return "\n".join(",".join(repr(float(x)) for x in row) for row in rows) + "\n"


def _write_text(path: str, text: str) -> None:
    try:
        if path == "-":
            sys.stdout.write(text)
            return
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def emit_profile_svg(profile: VelocityProfile, path: str) -> None:
    """Write a self-contained SVG of u against height, plus a sibling CSV.

    The viewBox spans exactly the data extent; the curve is a single
    polyline with one point per grid node, and the sibling CSV carries the
    identical (y, u) pairs.
    """
    u = profile.u_values
    y = profile.y_grid
    if len(y) < 2:
        raise ValueError("profile must have at least two nodes")
    u_min, u_max = float(u.min()), float(u.max())
    du = (u_max - u_min) or 1.0
    dy = float(y[-1] - y[0]) or 1.0
    # SVG y grows downward; plot height increasing upward.
    pts = " ".join(f"{ui:.10g},{(y[-1] - yi):.10g}" for ui, yi in zip(u, y))
    font = 0.04 * max(du, dy)
    stroke = 0.004 * max(du, dy)
    svg = f"""<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" viewBox="{u_min:.10g} 0 {du:.10g} {dy:.10g}">
  <rect x="{u_min:.10g}" y="0" width="{du:.10g}" height="{dy:.10g}"
        fill="none" stroke="black" stroke-width="{stroke:.10g}"/>
  <text x="{u_min:.10g}" y="{dy + 1.2 * font:.10g}" font-size="{font:.10g}">u = {u_min:.6g}</text>
  <text x="{u_max - 2 * font:.10g}" y="{dy + 1.2 * font:.10g}" font-size="{font:.10g}">u = {u_max:.6g}</text>
  <text x="{u_min:.10g}" y="{-0.4 * font:.10g}" font-size="{font:.10g}">y = {float(y[-1]):.6g}</text>
  <polyline fill="none" stroke="steelblue" stroke-width="{stroke:.10g}" points="{pts}"/>
</svg>
"""
    _write_text(path, svg)
    csv_path = os.path.splitext(path)[0] + ".csv"
    lines = ["y,u"] + [f"{yi!r},{ui!r}" for yi, ui in zip(y, u)]
    _write_text(csv_path, "\n".join(lines) + "\n")


def _load_config(args) -> RunConfig:
    if getattr(args, "config", None):
        return parse_config(args.config)
    return RunConfig()


def _cmd_closures(args) -> int:
    config = _load_config(args)
    closures = ClosureSet.from_gas(config.gas)
    table = closure_table(closures, args.table)
    _write_text(args.out, TABLE_HEADER + "\n" + _fmt_rows(table))
    return 0


def _cmd_solve_limit(args) -> int:
    config = _load_config(args)
    closures = ClosureSet.from_gas(config.gas)
    curve = config.build_curve()
    column_x = args.column_x if args.column_x is not None else 0.5 * curve.L
    height = float(curve.h(column_x))
    profile = solve_limit_profile(
        height, config.gas.U, closures.constants, args.n,
        exponent=args.exponent, column_x=column_x,
    )
    u = profile.u_values
    rows = np.column_stack([
        profile.y_grid, u,
        closures.temperature(u), closures.pressure(u),
        closures.density(u), closures.viscosity(u),
    ])
    _write_text(args.out, "y,u,T,p,rho,mu\n" + _fmt_rows(rows))
    if args.svg:
        emit_profile_svg(profile, args.svg)
    return 0


def _solve_fields(config: RunConfig, eps: float | None):
    if eps is not None:
        config = override_domain_eps(config, eps)
    closures = ClosureSet.from_gas(config.gas)
    curve = config.build_curve()
    grid = rescale_domain(curve, config.grid_ns, config.grid_nt)
    u_field, v_field, report = solve_adimensional(grid, closures, config.solver)
    return closures, grid, u_field, v_field, report


def _cmd_solve_adim(args) -> int:
    config = _load_config(args)
    if args.ns:
        config = replace(config, grid_ns=args.ns)
    if args.nt:
        config = replace(config, grid_nt=args.nt)
    closures, grid, u_field, v_field, report = _solve_fields(config, args.eps)
    L = grid.scaling.L
    tau = grid.tau_levels()
    sigma = closures.sigma(L * u_field.values)
    rho = closures.density_constant_pressure(L * u_field.values)
    s_col = np.broadcast_to(grid.s[:, None], grid.shape)
    rows = np.column_stack([
        s_col.ravel(), tau.ravel(),
        u_field.values.ravel(), v_field.values.ravel(),
        rho.ravel(), sigma.ravel(),
    ])
    _write_text(args.out, "s,tau,u_eps,v_eps,rho_eps,sigma\n" + _fmt_rows(rows))
    sys.stderr.write(
        f"converged in {report.iterations} sweeps, "
        f"continuity residual {report.continuity_residual_l2:.3e}\n"
    )
    return 0


def _cmd_transform_check(args) -> int:
    config = _load_config(args)
    closures, grid, u_field, v_field, report = _solve_fields(config, args.eps)
    payload = transform_report(u_field, v_field, closures)
    payload["iterations"] = report.iterations
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    _write_text(args.out, text)
    return 0


def _cmd_sweep(args) -> int:
    config = _load_config(args)
    sw = config.sweep
    sweep_config = SweepConfig(
        eps_values=sw.eps_values,
        n_s=sw.n_s,
        n_t=sw.n_t,
        L=config.domain.L,
        delta_frac=sw.delta_frac,
        gas=config.gas,
        solver=config.solver,
        limit_n=sw.limit_n,
        workers=args.workers or sw.workers,
    )
    report = run_epsilon_sweep(sweep_config)
    out_dir = args.out or config.output_dir
    paths = write_report(report, out_dir)
    for row in report.rows:
        sys.stderr.write(
            f"eps={row.eps:g}: l2_error={row.l2_error_rel:.3e} "
            f"energy_ok={row.energy_satisfied}\n"
        )
    sys.stderr.write(f"wrote {paths['csv']}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thinlayer",
        description="Compressible boundary-layer toolkit: closures, solvers, "
                    "transforms, and aspect-ratio convergence studies.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--json", action="store_true",
                        help="emit machine-readable error JSON on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("closures", help="tabulate the thermodynamic closures")
    p.add_argument("--config", help="INI config file")
    p.add_argument("--table", type=int, required=True, metavar="N", help="row count")
    p.add_argument("--out", default="-", help="output CSV path (default stdout)")
    p.set_defaults(func=_cmd_closures)

    p = sub.add_parser("solve-limit", help="solve the limit-formula profile")
    p.add_argument("--config", help="INI config file")
    p.add_argument("--n", type=int, default=1024, help="grid intervals")
    p.add_argument("--column-x", type=float, default=None,
                   help="station x whose height sets the column (default: crest)")
    p.add_argument("--exponent", type=float, default=LIMIT_EXPONENT,
                   help="sigma exponent inside the profile integral")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--svg", help="also write an SVG plot (plus sibling CSV)")
    p.set_defaults(func=_cmd_solve_limit)

    p = sub.add_parser("solve-adim", help="solve the rescaled compressible system")
    p.add_argument("--config", help="INI config file")
    p.add_argument("--eps", type=float, help="aspect ratio override")
    p.add_argument("--ns", type=int, help="stations override")
    p.add_argument("--nt", type=int, help="column intervals override")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_solve_adim)

    p = sub.add_parser("transform-check", help="map, streamfunction and energy report")
    p.add_argument("--config", help="INI config file")
    p.add_argument("--eps", type=float, help="aspect ratio override")
    p.add_argument("--out", required=True, help="output JSON path")
    p.set_defaults(func=_cmd_transform_check)

    p = sub.add_parser("sweep", help="run the aspect-ratio convergence study")
    p.add_argument("--config", help="INI config file")
    p.add_argument("--out", help="output directory")
    p.add_argument("--workers", type=int, help="parallel worker processes")
    p.set_defaults(func=_cmd_sweep)
    return parser


def _exit_code_for(exc: Exception) -> int:
    if isinstance(exc, ConfigError):
        return _EXIT_CONFIG
    if isinstance(exc, (IoError, OSError)):
        return _EXIT_IO
    if isinstance(exc, (NonConvergence, SolveFailure, ValidityViolation)):
        return _EXIT_SOLVER
    if isinstance(exc, ThinlayerError):
        return _EXIT_SOLVER
    raise exc


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - single reporting funnel
        code = _exit_code_for(exc)
        if args.json:
            payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
            sys.stderr.write(json.dumps(payload) + "\n")
        else:
            sys.stderr.write(f"error: {exc}\n")
        return code


if __name__ == "__main__":
    sys.exit(main())
