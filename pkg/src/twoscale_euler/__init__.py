"""Two-scale solver suite for the weakly compressible 1D isentropic Euler
equations on the 2*pi torus: a Mach-free homogenized solver with
oscillatory reconstruction, a stiff Roe reference solver, and an analysis
harness for convergence, TVD, truncation-order, shock-formation, and
cost-scaling studies.
"""

from .grid import (GridSpec, PeriodicField, SnapshotSeries, TWO_PI,
                   integral, make_grid, sample_field, spacetime_norms,
                   total_variation)
from .homogenized import (HomogenizedParams, HomogenizedState, advance,
                          cfl_timestep, derive_params, roe_flux_scalar,
                          split_initial, step_pair)
from .reconstruction import (ReconstructionQuery, evaluate_piecewise,
                             fast_phase, reconstruct_field, reconstruct_pair)
from .direct import (EulerState, RoeAverage, advance_direct, direct_step,
                     direct_timestep, init_direct, roe_average)
from .analysis import (BenchmarkRow, ErrorReport, SlopeFit, SweepResult,
                       TruncationReport, benchmark_steps,
                       characteristics_oracle, compare_runs, crossing_time,
                       detect_shock_time, fit_slope, sweep_epsilons,
                       truncation_error)
from .kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = [
    "GridSpec", "PeriodicField", "SnapshotSeries", "TWO_PI",
    "make_grid", "sample_field", "integral", "total_variation",
    "spacetime_norms",
    "HomogenizedParams", "HomogenizedState", "derive_params", "split_initial",
    "roe_flux_scalar", "cfl_timestep", "step_pair", "advance",
    "ReconstructionQuery", "fast_phase", "evaluate_piecewise",
    "reconstruct_pair", "reconstruct_field",
    "EulerState", "RoeAverage", "init_direct", "roe_average",
    "direct_timestep", "direct_step", "advance_direct",
    "ErrorReport", "SweepResult", "TruncationReport", "SlopeFit",
    "BenchmarkRow", "characteristics_oracle", "crossing_time",
    "truncation_error", "compare_runs", "sweep_epsilons", "fit_slope",
    "detect_shock_time", "benchmark_steps",
    "KERNEL_BACKEND", "__version__",
]
