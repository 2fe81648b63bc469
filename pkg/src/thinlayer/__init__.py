"""Compressible boundary-layer toolkit.

Gas closures in sigma = 1 - u^2/(2 i0), the thin-domain rescaling and its
finite-difference solver, density-weighted incompressibility transforms
with the gradient energy estimate, the separable limit-profile solver, and
the aspect-ratio convergence study tying them together.
"""

__version__ = "0.1.0"

from .adim_solver import (
    SolverOptions,
    SolveReport,
    continuity_residual,
    momentum_residual,
    recover_v,
    solve_adimensional,
)
from .closures import ClosureSet, closure_table
from .experiments import (
    ConvergenceReport,
    SweepConfig,
    compare_l2,
    run_epsilon_sweep,
)
from .gas import DerivedConstants, GasParameters, derive_constants
from .geometry import (
    HeightCurve,
    build_height_curve,
    parabolic_curve,
    sine_curve,
    sine_squared_curve,
    table_curve,
)
from .grids import DomainScaling, Field2D, Grid2D, raw_grid, rescale_domain
from .limit_profile import (
    LIMIT_EXPONENT,
    ResidualReport,
    VelocityProfile,
    g_integral,
    residual_check,
    solve_limit_profile,
)
from .quadrature import adaptive_quadrature, gauss_kronrod_15
from .transforms import (
    DorodnitzynMap,
    EnergyReport,
    FluxForm,
    IncompressibleField,
    build_dorodnitzyn_map,
    build_incompressible_field,
    build_streamfunction,
    divergence_l2,
    energy_bound_check,
    flux_form_from_callables,
    flux_form_from_fields,
    flux_form_from_solution,
    gradient_norm_sq,
    jacobian_probe,
    loop_check,
    transform_report,
)

__all__ = [name for name in dir() if not name.startswith("_")]
