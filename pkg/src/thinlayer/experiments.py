"""Aspect-ratio sweeps: solve, compare against the limit profile, report.

For each eps the compressible system is solved on its own parabolic-family
domain (H = eps * L, fixed delta/H), the solution is compared in relative
L2 against the limit-formula profile resampled onto the solver columns,
and the gradient energy bound is evaluated.  Rows are assembled in eps
order regardless of worker scheduling, and all numbers are deterministic,
so the CSV report is byte-reproducible.
"""

from __future__ import annotations

import json
import os
import platform
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .adim_solver import (
    SolverOptions,
    continuity_residual,
    momentum_residual,
    solve_adimensional,
)
from .closures import ClosureSet
from .errors import SolveFailure, StationMismatch, ThinlayerError
from .gas import GasParameters
from .geometry import parabolic_curve
from .grids import Field2D, rescale_domain
from .limit_profile import LIMIT_EXPONENT, VelocityProfile, solve_limit_profile
from .transforms import (
    ApproximationWarning,
    build_dorodnitzyn_map,
    build_incompressible_field,
    build_streamfunction,
    energy_bound_check,
)

REPORT_HEADER = (
    "eps,l2_error_rel,momentum_residual,continuity_residual,"
    "energy_lhs,energy_rhs,iterations"
)
TIMING_HEADER = "eps,iterations,wall_time_ms"


@dataclass(frozen=True)
class SweepConfig:
    eps_values: tuple = (0.2, 0.1, 0.05, 0.025)
    n_s: int = 64
    n_t: int = 128
    L: float = 1.0
    delta_frac: float = 0.75          # delta / H for the per-eps domain family
    gas: GasParameters = field(default_factory=GasParameters)
    solver: SolverOptions = field(default_factory=SolverOptions)
    limit_n: int = 2048
    workers: int | None = None        # None -> os.cpu_count()
    output_dir: str | None = None

    def __post_init__(self):
        eps = tuple(float(e) for e in self.eps_values)
        if len(eps) == 0 or any(e <= 0.0 for e in eps):
            raise ValueError("eps_values must be positive")
        if any(b >= a for a, b in zip(eps, eps[1:])):
            raise ValueError("eps_values must be strictly decreasing")
        if not 0.0 < self.delta_frac < 1.0:
            raise ValueError("delta_frac must lie in (0, 1)")
        object.__setattr__(self, "eps_values", eps)


@dataclass(frozen=True)
class SweepRow:
    eps: float
    l2_error_rel: float
    momentum_residual: float
    continuity_residual: float
    energy_lhs: float
    energy_rhs: float
    iterations: int
    wall_time_ms: float
    energy_satisfied: bool


@dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple
    config: SweepConfig

    def errors(self) -> list[float]:
        return [r.l2_error_rel for r in self.rows]

    def strictly_decreasing(self) -> bool:
        e = self.errors()
        return all(b < a for a, b in zip(e, e[1:]))

    def csv_text(self) -> str:
        """Deterministic CSV of the scientific columns (no wall time)."""
        lines = [REPORT_HEADER]
        for r in self.rows:
            lines.append(
                f"{r.eps!r},{r.l2_error_rel!r},{r.momentum_residual!r},"
                f"{r.continuity_residual!r},{r.energy_lhs!r},{r.energy_rhs!r},"
                f"{r.iterations}"
            )
        return "\n".join(lines) + "\n"

    def timing_csv_text(self) -> str:
        lines = [TIMING_HEADER]
        for r in self.rows:
            lines.append(f"{r.eps!r},{r.iterations},{r.wall_time_ms:.3f}")
        return "\n".join(lines) + "\n"


def compare_l2(
    u_field: Field2D,
    limit_profiles: VelocityProfile | list[VelocityProfile],
    gas: GasParameters,
) -> float:
    """Relative L2 error between L * u_eps and the limit profile.

    Profiles are resampled onto the field's tau_hat grid with monotone
    cubic interpolation after normalizing their height (the limit shape
    depends only on y/h).  A single profile is reused for every column;
    a per-column list must match the station count.
    """
    grid = u_field.grid
    L = grid.scaling.L
    if isinstance(limit_profiles, VelocityProfile):
        profiles = [limit_profiles] * grid.n_s
    else:
        profiles = list(limit_profiles)
        if len(profiles) != grid.n_s:
            raise StationMismatch(
                f"{len(profiles)} profiles for {grid.n_s} stations"
            )
    u_lim = np.empty(grid.shape)
    cache: dict[int, np.ndarray] = {}
    for i, prof in enumerate(profiles):
        key = id(prof)
        if key not in cache:
            pch = PchipInterpolator(prof.y_grid / prof.height, prof.u_values)
            cache[key] = pch(grid.tau_hat)
        u_lim[i] = cache[key]

    diff = L * u_field.values - u_lim
    wt = np.ones_like(grid.tau_hat)
    wt[0] = wt[-1] = 0.5
    area = grid.h_eps[:, None] * wt[None, :]
    num = np.sqrt(np.sum(diff**2 * area))
    den = np.sqrt(np.sum(u_lim**2 * area))
    if den == 0.0:
        return 0.0 if num == 0.0 else float("inf")
    return float(num / den)


def _solve_one(args: tuple) -> SweepRow:
    config, eps, profile_y, profile_u = args
    gas = config.gas
    closures = ClosureSet.from_gas(gas)
    profile = VelocityProfile(y_grid=profile_y, u_values=profile_u)
    start = time.perf_counter()
    try:
        curve = parabolic_curve(config.L, config.delta_frac * eps * config.L, eps * config.L)
        grid = rescale_domain(curve, config.n_s, config.n_t)
        u_field, v_field, report = solve_adimensional(grid, closures, config.solver)
        err = compare_l2(u_field, profile, gas)
        mom = momentum_residual(
            u_field, v_field, closures,
            viscosity_exponent=config.solver.viscosity_exponent,
            convection=config.solver.convection,
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ApproximationWarning)
            dmap = build_dorodnitzyn_map(u_field, closures)
        psi = build_streamfunction(u_field, v_field, closures)
        inc = build_incompressible_field(dmap, psi, u_field, v_field, closures)
        energy = energy_bound_check(inc, closures)
        cont = continuity_residual(u_field, v_field, closures)
    except ThinlayerError as exc:
        raise SolveFailure(f"eps = {eps}: {exc}") from exc
    elapsed_ms = (time.perf_counter() - start) * 1e3
    return SweepRow(
        eps=eps,
        l2_error_rel=err,
        momentum_residual=mom,
        continuity_residual=cont,
        energy_lhs=energy.lhs_sq,
        energy_rhs=energy.rhs,
        iterations=report.iterations,
        wall_time_ms=elapsed_ms,
        energy_satisfied=bool(energy.satisfied_squared and energy.satisfied_unsquared),
    )


def run_epsilon_sweep(config: SweepConfig | None = None) -> ConvergenceReport:
    """Solve every eps, compare, check the energy bound, persist reports.

    Per-eps solves run in parallel worker processes; the report is reduced
    in eps order, so scheduling cannot affect the output.  Fails fast with
    SolveFailure (annotated with eps) on any non-converged member.
    """
    config = config or SweepConfig()
    gas = config.gas
    closures = ClosureSet.from_gas(gas)
    # One fine limit profile on a unit column; its shape is height-free.
    profile = solve_limit_profile(
        1.0, gas.U, closures.constants, config.limit_n, exponent=LIMIT_EXPONENT
    )
    jobs = [(config, eps, profile.y_grid, profile.u_values) for eps in config.eps_values]
    workers = config.workers if config.workers is not None else (os.cpu_count() or 1)
    workers = max(1, min(workers, len(jobs)))
    if workers == 1:
        rows = [_solve_one(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_solve_one, jobs))
    report = ConvergenceReport(rows=tuple(rows), config=config)
    if config.output_dir is not None:
        write_report(report, config.output_dir)
    return report


def write_report(report: ConvergenceReport, directory: str) -> dict:
    """Persist report.csv (deterministic), timing.csv, and sweep.json."""
    os.makedirs(directory, exist_ok=True)
    paths = {
        "csv": os.path.join(directory, "report.csv"),
        "timing": os.path.join(directory, "timing.csv"),
        "json": os.path.join(directory, "sweep.json"),
    }
    with open(paths["csv"], "w", encoding="utf-8", newline="\n") as f:
        f.write(report.csv_text())
    with open(paths["timing"], "w", encoding="utf-8", newline="\n") as f:
        f.write(report.timing_csv_text())
    config = report.config
    payload = {
        "config": {
            "eps_values": list(config.eps_values),
            "n_s": config.n_s,
            "n_t": config.n_t,
            "L": config.L,
            "delta_frac": config.delta_frac,
            "gas": asdict(config.gas),
            "solver": asdict(config.solver),
            "limit_n": config.limit_n,
        },
        "environment": {
            "python": platform.python_version(),
            "machine": platform.machine(),
            "numpy": np.__version__,
        },
        "rows": [asdict(r) for r in report.rows],
    }
    with open(paths["json"], "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    return paths
