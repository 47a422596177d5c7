"""Embedded exponential-type low-regularity integrators for KdV on the torus.

The library solves u_t + u_xxx = (1/2) (u^2)_x on (0, 2*pi) with periodic
boundary conditions by Fourier pseudo-spectral discretization in space and
exponential-type stepping in time.  Three schemes are exposed: a classical
first-order low-regularity integrator (lri1_step) and two embedded variants
(elri1_step, elri2_step) that remain first/second order accurate for much
rougher initial data.  `oracles` re-derives one step of each embedded scheme
by exact per-frequency-triple time integration; `studies` reproduces the
convergence-order experiments; the `kdvlri` console script fronts both.
"""

from .spectral import (
    Field,
    Grid,
    conjugate_symmetry_defect,
    dx,
    exp_airy,
    integral,
    inv_dx,
    mean_value,
    project_zero_mean,
    read_field,
    sobolev_norm,
    to_spectrum,
    translate,
    truncate_two_thirds,
    write_field,
)
from .rough_data import RoughSpec, generate_rough, splitmix64_uniform
from .integrators import (
    BlowUpError,
    SchemeConfigError,
    SchemeKind,
    SolverRun,
    Trajectory,
    elri1_step,
    elri2_step,
    evolve,
    lri1_step,
    solve_with_mean_shift,
    step_function,
)
from .oracles import (
    CheckResult,
    CostGuardError,
    ReferenceMismatchError,
    an_time_integral,
    embedded_form_step,
    fn_closed_form,
    fn_quadrature,
    ifrk4_solve,
    reference_solution,
    verification_suite,
)
from .studies import (
    ConvergenceReport,
    FitDataError,
    StudyConfig,
    emit_report,
    estimate_order,
    parse_report_csv,
    run_convergence_study,
    run_local_error_study,
    smooth_test_data,
)

__version__ = "0.1.0"

__all__ = [
    "BlowUpError",
    "CheckResult",
    "ConvergenceReport",
    "CostGuardError",
    "Field",
    "FitDataError",
    "Grid",
    "ReferenceMismatchError",
    "RoughSpec",
    "SchemeConfigError",
    "SchemeKind",
    "SolverRun",
    "StudyConfig",
    "Trajectory",
    "an_time_integral",
    "conjugate_symmetry_defect",
    "dx",
    "elri1_step",
    "elri2_step",
    "embedded_form_step",
    "emit_report",
    "estimate_order",
    "evolve",
    "exp_airy",
    "fn_closed_form",
    "fn_quadrature",
    "generate_rough",
    "ifrk4_solve",
    "integral",
    "inv_dx",
    "lri1_step",
    "mean_value",
    "parse_report_csv",
    "project_zero_mean",
    "read_field",
    "reference_solution",
    "run_convergence_study",
    "run_local_error_study",
    "smooth_test_data",
    "sobolev_norm",
    "solve_with_mean_shift",
    "splitmix64_uniform",
    "step_function",
    "to_spectrum",
    "translate",
    "truncate_two_thirds",
    "verification_suite",
    "write_field",
]
