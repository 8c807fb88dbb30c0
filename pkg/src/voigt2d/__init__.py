"""Deterministic pseudo-spectral Euler / Euler-Voigt solver on the 2D
torus, with a convergence-experiment harness for the alpha -> 0 limit."""

__version__ = "0.1.0"

from .grid import TWO_PI, GridSpec
from .spectral import (
    SYMMETRY_TOL,
    SpectralField,
    SymmetryError,
    VelocityPair,
    biot_savart,
    curl,
    dealias,
    derivative,
    divergence,
    forward_transform,
    helmholtz_filter,
    inverse_laplacian,
    inverse_transform,
    l2_inner,
    laplacian,
    leray_project,
    values_oversampled,
    zero_mean,
)
from .dynamics import (
    BlowUpError,
    SolverConfig,
    TrajectoryRecord,
    cfl_dt,
    euler_rhs,
    integrate,
    rhs,
    step_rk4,
    voigt_rhs,
)
from .diagnostics import (
    DiagnosticSample,
    cz_ratio,
    error_norms,
    gagliardo_ratio,
    gradient_l2,
    growth_monitor,
    l2_norm,
    lp_norm,
    sample_state,
    sobolev_norm,
    velocity_l2,
    velocity_sobolev,
    voigt_energy,
    voigt_enstrophy,
)
from .initial_data import (
    KINDS,
    DataRecipe,
    galerkin_truncate,
    make_alpha_family,
    make_eigenfunction,
    make_random_sobolev,
    make_taylor_family,
    make_yudovich_patch,
    realize,
)
from .harness import (
    ERROR_METRICS,
    REGIMES,
    ConvergenceReport,
    FitResult,
    SweepPlan,
    TheoreticalRate,
    choose_cutoff,
    fit_rate,
    galerkin_reference_sweep,
    run_pair,
    run_sweep,
    theoretical_slope,
)
from .config import ConfigError, RunConfig, load_config, parse_config
from .snapshots import (
    FORMAT_VERSION,
    Snapshot,
    SnapshotError,
    read_snapshot,
    snapshot_of,
    write_snapshot,
)

__all__ = [
    "TWO_PI",
    "GridSpec",
    "SYMMETRY_TOL",
    "SpectralField",
    "SymmetryError",
    "VelocityPair",
    "biot_savart",
    "curl",
    "dealias",
    "derivative",
    "divergence",
    "forward_transform",
    "helmholtz_filter",
    "inverse_laplacian",
    "inverse_transform",
    "l2_inner",
    "laplacian",
    "leray_project",
    "values_oversampled",
    "zero_mean",
    "BlowUpError",
    "SolverConfig",
    "TrajectoryRecord",
    "cfl_dt",
    "euler_rhs",
    "integrate",
    "rhs",
    "step_rk4",
    "voigt_rhs",
    "DiagnosticSample",
    "cz_ratio",
    "error_norms",
    "gagliardo_ratio",
    "gradient_l2",
    "growth_monitor",
    "l2_norm",
    "lp_norm",
    "sample_state",
    "sobolev_norm",
    "velocity_l2",
    "velocity_sobolev",
    "voigt_energy",
    "voigt_enstrophy",
    "KINDS",
    "DataRecipe",
    "galerkin_truncate",
    "make_alpha_family",
    "make_eigenfunction",
    "make_random_sobolev",
    "make_taylor_family",
    "make_yudovich_patch",
    "realize",
    "ERROR_METRICS",
    "REGIMES",
    "ConvergenceReport",
    "FitResult",
    "SweepPlan",
    "TheoreticalRate",
    "choose_cutoff",
    "fit_rate",
    "galerkin_reference_sweep",
    "run_pair",
    "run_sweep",
    "theoretical_slope",
    "ConfigError",
    "RunConfig",
    "load_config",
    "parse_config",
    "FORMAT_VERSION",
    "Snapshot",
    "SnapshotError",
    "read_snapshot",
    "snapshot_of",
    "write_snapshot",
    "__version__",
]
