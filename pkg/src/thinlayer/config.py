"""Strict INI-style configuration for the command-line tools.

Unknown sections or keys are fatal: silent typos in scientific configs
corrupt studies.  Flags given on the command line override file values,
which override the built-in defaults.
"""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass, field, replace

import numpy as np

from .adim_solver import SolverOptions
from .errors import IoError, ParseError, ValidationError
from .gas import GasParameters
from .geometry import HeightCurve, build_height_curve

_GAS_KEYS = {"u": "U", "t_h": "T_h", "mu_h": "mu_h", "c_p": "c_p",
             "r": "R", "b": "b", "p0": "p0", "power_law_exp": "power_law_exp"}
_DOMAIN_KEYS = {"curve", "l", "delta", "h", "table_path"}
_SOLVER_KEYS = {"tolerance", "max_iterations", "relaxation", "ns", "nt",
                "viscosity_exponent", "convection"}
_SWEEP_KEYS = {"eps_values", "ns", "nt", "delta_frac", "workers", "limit_n"}
_OUTPUT_KEYS = {"directory"}
_SECTIONS = {"gas", "domain", "solver", "sweep", "output"}


@dataclass(frozen=True)
class DomainConfig:
    curve: str = "parabolic"
    L: float = 1.0
    delta: float = 0.15
    H: float = 0.2
    table_path: str | None = None


@dataclass(frozen=True)
class SweepSettings:
    eps_values: tuple = (0.2, 0.1, 0.05, 0.025)
    n_s: int = 64
    n_t: int = 128
    delta_frac: float = 0.75
    workers: int | None = None
    limit_n: int = 2048


@dataclass(frozen=True)
class RunConfig:
    gas: GasParameters = field(default_factory=GasParameters)
    domain: DomainConfig = field(default_factory=DomainConfig)
    solver: SolverOptions = field(default_factory=SolverOptions)
    grid_ns: int = 64
    grid_nt: int = 128
    sweep: SweepSettings = field(default_factory=SweepSettings)
    output_dir: str = "out"

    def build_curve(self) -> HeightCurve:
        d = self.domain
        if d.curve in ("parabolic", "sine"):
            return build_height_curve(
                {"family": d.curve, "L": d.L, "delta": d.delta, "H": d.H}
            )
        if d.curve == "table":
            if d.table_path is None:
                raise ValidationError("domain.curve = table requires table_path")
            try:
                data = np.loadtxt(d.table_path, delimiter=",")
            except OSError as exc:
                raise IoError(f"cannot read table {d.table_path}: {exc}") from exc
            return build_height_curve({"family": "table", "x": data[:, 0], "y": data[:, 1]})
        raise ValidationError(
            f"domain.curve = {d.curve!r}, expected parabolic | sine | table"
        )


def _positive(section: str, key: str, value: float) -> float:
    if not value > 0.0:
        raise ValidationError(f"{section}.{key} = {value}, must be > 0")
    return value


def _get_float(parser, section, key, default):
    raw = parser.get(section, key, fallback=None)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError as exc:
        raise ValidationError(f"{section}.{key} = {raw!r} is not a number") from exc


def _get_int(parser, section, key, default):
    raw = parser.get(section, key, fallback=None)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ValidationError(f"{section}.{key} = {raw!r} is not an integer") from exc


def parse_config(path: str) -> RunConfig:
    """Load, validate, and default-fill a RunConfig from an INI file."""
    if not os.path.exists(path):
        raise IoError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path, encoding="utf-8") as f:
            parser.read_file(f)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ParseError(str(exc)) from exc

    for section in parser.sections():
        if section not in _SECTIONS:
            raise ValidationError(f"unknown config section [{section}]")

    known = {"gas": set(_GAS_KEYS), "domain": _DOMAIN_KEYS, "solver": _SOLVER_KEYS,
             "sweep": _SWEEP_KEYS, "output": _OUTPUT_KEYS}
    for section in parser.sections():
        for key in parser.options(section):
            if key not in known[section]:
                raise ValidationError(f"unknown key {key!r} in section [{section}]")

    gas_defaults = GasParameters()
    gas_kwargs = {}
    for ini_key, attr in _GAS_KEYS.items():
        gas_kwargs[attr] = _get_float(parser, "gas", ini_key, getattr(gas_defaults, attr))
    gas = GasParameters(**gas_kwargs)
    for name in ("U", "T_h", "mu_h", "c_p", "R", "p0"):
        value = getattr(gas, name)
        if name != "U":
            _positive("gas", name, value)
        elif value < 0.0:
            raise ValidationError(f"gas.U = {value}, must be >= 0")
    if gas.b <= 1.0:
        raise ValidationError(f"gas.b = {gas.b}, must be > 1 (polytropic exponent)")

    dom_defaults = DomainConfig()
    domain = DomainConfig(
        curve=parser.get("domain", "curve", fallback=dom_defaults.curve),
        L=_positive("domain", "L", _get_float(parser, "domain", "l", dom_defaults.L)),
        delta=_positive("domain", "delta", _get_float(parser, "domain", "delta", dom_defaults.delta)),
        H=_positive("domain", "H", _get_float(parser, "domain", "h", dom_defaults.H)),
        table_path=parser.get("domain", "table_path", fallback=None),
    )
    if domain.curve not in ("parabolic", "sine", "table"):
        raise ValidationError(
            f"domain.curve = {domain.curve!r}, expected parabolic | sine | table"
        )
    if domain.table_path is not None and not os.path.exists(domain.table_path):
        raise IoError(f"domain.table_path does not exist: {domain.table_path}")

    sol_defaults = SolverOptions()
    tol = _get_float(parser, "solver", "tolerance", sol_defaults.tolerance)
    max_it = _get_int(parser, "solver", "max_iterations", sol_defaults.max_iterations)
    relax = _get_float(parser, "solver", "relaxation", sol_defaults.relaxation)
    visc_exp = _get_float(parser, "solver", "viscosity_exponent", float("nan"))
    convection = parser.getboolean("solver", "convection", fallback=sol_defaults.convection)
    if not 0.0 < relax <= 1.0:
        raise ValidationError(f"solver.relaxation = {relax}, must be in (0, 1]")
    if not tol > 0.0:
        raise ValidationError(f"solver.tolerance = {tol}, must be > 0")
    if max_it < 1:
        raise ValidationError(f"solver.max_iterations = {max_it}, must be >= 1")
    solver = SolverOptions(
        tolerance=tol,
        max_iterations=max_it,
        relaxation=relax,
        viscosity_exponent=None if math.isnan(visc_exp) else visc_exp,
        convection=convection,
    )
    grid_ns = _get_int(parser, "solver", "ns", 64)
    grid_nt = _get_int(parser, "solver", "nt", 128)
    if grid_ns < 3 or grid_nt < 8:
        raise ValidationError("solver.ns must be >= 3 and solver.nt >= 8")

    sweep_defaults = SweepSettings()
    raw_eps = parser.get("sweep", "eps_values", fallback=None)
    if raw_eps is None:
        eps_values = sweep_defaults.eps_values
    else:
        try:
            eps_values = tuple(float(tok) for tok in raw_eps.replace(",", " ").split())
        except ValueError as exc:
            raise ValidationError(f"sweep.eps_values = {raw_eps!r} is not a number list") from exc
        if not eps_values or any(e <= 0 for e in eps_values):
            raise ValidationError("sweep.eps_values must be positive")
        if any(b >= a for a, b in zip(eps_values, eps_values[1:])):
            raise ValidationError("sweep.eps_values must be strictly decreasing")
    sweep = SweepSettings(
        eps_values=eps_values,
        n_s=_get_int(parser, "sweep", "ns", sweep_defaults.n_s),
        n_t=_get_int(parser, "sweep", "nt", sweep_defaults.n_t),
        delta_frac=_get_float(parser, "sweep", "delta_frac", sweep_defaults.delta_frac),
        workers=_get_int(parser, "sweep", "workers", 0) or None,
        limit_n=_get_int(parser, "sweep", "limit_n", sweep_defaults.limit_n),
    )
    if not 0.0 < sweep.delta_frac < 1.0:
        raise ValidationError(f"sweep.delta_frac = {sweep.delta_frac}, must be in (0, 1)")

    output_dir = parser.get("output", "directory", fallback="out")
    return RunConfig(
        gas=gas, domain=domain, solver=solver,
        grid_ns=grid_ns, grid_nt=grid_nt, sweep=sweep, output_dir=output_dir,
    )


def override_domain_eps(config: RunConfig, eps: float) -> RunConfig:
    """Rebuild the domain for a requested aspect ratio, keeping delta/H."""
    if eps <= 0.0:
        raise ValidationError(f"eps = {eps}, must be > 0")
    d = config.domain
    ratio = d.delta / d.H
    new_h = eps * d.L
    return replace(config, domain=replace(d, H=new_h, delta=ratio * new_h))
