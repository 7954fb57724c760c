"""Measurement harness: characteristics oracle, local truncation error,
two-solver comparisons with Mach sweeps and slope fits, shock-time
detection, and step-count benchmarks.
"""

import math
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np
from scipy.optimize import brentq

from .errors import OracleConvergenceError
from .grid import (TWO_PI, GridSpec, PeriodicField, SnapshotSeries,
                   make_grid, spacetime_norms)
from .homogenized import HomogenizedState, derive_params, split_initial, advance
from .direct import init_direct, advance_direct
from .reconstruction import ReconstructionQuery, reconstruct_field

_ORACLE_TOL = 1e-12
# refuse characteristic queries past this fraction of the crossing time:
# the implicit relation becomes multivalued at the crossing
_PRE_SHOCK_FRACTION = 0.99


# ---------------------------------------------------------------------------
# characteristics oracle

def crossing_time(q0: Callable[[float], float], alpha: float,
                  n_samples: int = 8192) -> float:
    """First characteristic-crossing time 1 / (2*alpha*max(-q0')), estimated
    from central differences on a fine sample; inf when no crossing."""
    if alpha <= 0.0:
        return math.inf
    xs = np.arange(n_samples) * (TWO_PI / n_samples)
    vals = np.array([q0(x) for x in xs])
    slopes = (np.roll(vals, -1) - np.roll(vals, 1)) * (n_samples / (2.0 * TWO_PI))
    steepest = float(-slopes.min())
    if steepest <= 0.0:
        return math.inf
    return 1.0 / (2.0 * alpha * steepest)


def _oracle_context(q0: Callable[[float], float], alpha: float):
    """Crossing time and value bracket, computed once per profile."""
    t_cross = crossing_time(q0, alpha)
    xs = np.arange(4096) * (TWO_PI / 4096)
    vals = np.array([q0(x) for x in xs])
    return t_cross, float(vals.min()) - 1e-9, float(vals.max()) + 1e-9


def _oracle_solve(q0, alpha, beta, x, t, context) -> float:
    t_cross, lo, hi = context
    if t < 0.0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if t == 0.0:
        return float(q0(x))
    if t >= _PRE_SHOCK_FRACTION * t_cross:
        raise OracleConvergenceError(
            x, t, f"query beyond {_PRE_SHOCK_FRACTION} of crossing time "
                  f"{t_cross:.6g}"
        )

    def residual(q):
        return q - q0(x - (2.0 * alpha * q + beta) * t)

    if hi - lo < 4e-9:  # constant profile: characteristics parallel
        return float(q0(x))
    try:
        q = brentq(residual, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    except ValueError as exc:
        raise OracleConvergenceError(x, t, str(exc)) from exc
    if abs(residual(q)) > _ORACLE_TOL:
        raise OracleConvergenceError(x, t, f"residual {residual(q):.3e}")
    return float(q)


def characteristics_oracle(q0: Callable[[float], float], alpha: float,
                           beta: float, x: float, t: float) -> float:
    """Exact pre-shock solution of d/dt q + d/dx (alpha*q^2 + beta*q) = 0:
    the implicit relation q = q0(x - (2*alpha*q + beta)*t) solved by a
    bracketed root find to 1e-12 residual."""
    return _oracle_solve(q0, alpha, beta, x, t, _oracle_context(q0, alpha))


# ---------------------------------------------------------------------------
# local truncation error

@dataclass(frozen=True)
class TruncationReport:
    """Local truncation error of the scalar Roe scheme against the exact
    characteristic solution, with the tally of interface-speed sign cases
    (++, --, +-, -+)."""

    h: float
    k: float
    t: float
    max_error: float
    l1_error: float
    case_counts: tuple


def truncation_error(q0: Callable[[float], float], coeffs, h: float,
                     k: float, t_n: float) -> TruncationReport:
    """Insert the exact solution into one Roe update at time t_n and return
    the residual divided by k, over all cells."""
    alpha, beta = coeffs
    n_cells = int(round(TWO_PI / h))
    grid = make_grid(n_cells)
    h = grid.spacing
    xs = grid.centers
    ctx = _oracle_context(q0, alpha)
    qn = np.array([_oracle_solve(q0, alpha, beta, x, t_n, ctx) for x in xs])
    qn1 = np.array(
        [_oracle_solve(q0, alpha, beta, x, t_n + k, ctx) for x in xs]
    )
    qp = np.roll(qn, -1)
    qm = np.roll(qn, 1)

    def f(q):
        return alpha * q * q + beta * q

    err = (qn - qn1) / k - (1.0 / (2.0 * h)) * (
        f(qp) - f(qm)
        - np.abs(alpha * (qp + qn) + beta) * (qp - qn)
        + np.abs(alpha * (qn + qm) + beta) * (qn - qm)
    )

    s_right = alpha * (qp + qn) + beta
    s_left = alpha * (qn + qm) + beta
    case1 = (s_right >= 0.0) & (s_left >= 0.0)
    case2 = ~case1 & (s_right <= 0.0) & (s_left <= 0.0)
    case3 = ~case1 & ~case2 & (s_right >= 0.0)
    case4 = ~(case1 | case2 | case3)
    counts = (int(case1.sum()), int(case2.sum()),
              int(case3.sum()), int(case4.sum()))

    return TruncationReport(
        h=h, k=k, t=t_n,
        max_error=float(np.abs(err).max()),
        l1_error=h * float(np.abs(err).sum()),
        case_counts=counts,
    )


# ---------------------------------------------------------------------------
# two-solver comparison

@dataclass(frozen=True)
class ErrorReport:
    """Space-time norms of (velocity, density) differences between the
    direct run and the reconstructed approximation, for one Mach number."""

    epsilon: float
    u_l1: float
    u_l2: float
    u_linf: float
    rho_l1: float
    rho_l2: float
    rho_linf: float
    n_cells: int
    t_final: float
    courant: float


def _difference_norms(times, fields_a, fields_b, step, grid):
    """Norms of per-snapshot differences, one series per component."""
    n_components = len(fields_a[0])
    out = []
    for c in range(n_components):
        diffs = SnapshotSeries()
        for t, fa, fb in zip(times, fields_a, fields_b):
            diffs.append(t, PeriodicField(grid, fa[c].values - fb[c].values))
        out.append(spacetime_norms(diffs, step))
    return out


def compare_runs(epsilon: float, gamma: float, u0: PeriodicField,
                 rho0: PeriodicField, grid: GridSpec, t_final: float,
                 courant: float = 0.9, direct_courant: float = 1.0,
                 record_every: int = 1) -> ErrorReport:
    """Run both solvers and measure the reconstruction gap.

    The two-scale run records at every `record_every`-th of its own steps;
    the direct run is advanced to exactly each recorded time by clipping
    (no interpolation).  The direct reference defaults to its stability
    limit (direct_courant = 1.0): any extra margin adds an O(h/epsilon)
    dissipation floor that buries the O(epsilon) gap being measured.
    Norms use the left-endpoint rule on [0, t_final) with the mean
    recording interval as the time weight.
    """
    if u0.grid.n_cells != grid.n_cells or rho0.grid.n_cells != grid.n_cells:
        raise ValueError("initial data does not live on the given grid")
    if t_final <= 0.0:
        raise ValueError(f"t_final must be positive, got {t_final}")
    params = derive_params(u0, rho0, gamma)
    state0 = split_initial(u0, rho0, params)
    series, _, _ = advance(state0, t_final, courant, record_every)

    direct_state = init_direct(u0, rho0, epsilon, gamma)
    times = []
    recon_fields = []
    direct_fields = []
    for t_n, (fwd, bwd) in series:
        _, direct_state, _ = advance_direct(
            direct_state, t_n, direct_courant, record_every=10 ** 9
        )
        if t_n >= t_final:
            break  # left-endpoint rule: the final time lies outside [0, T)
        snapshot = HomogenizedState(fwd, bwd, t_n, params)
        query = ReconstructionQuery.from_time(t_n, epsilon)
        u_rec, rho_rec = reconstruct_field(snapshot, query)
        times.append(t_n)
        recon_fields.append((u_rec, rho_rec))
        direct_fields.append(
            (direct_state.velocity(), direct_state.density_perturbation())
        )

    if len(times) > 1:
        step = (times[-1] - times[0]) / (len(times) - 1)
    else:
        step = t_final if t_final > 0.0 else 1.0
    (u_norms, rho_norms) = _difference_norms(
        times, direct_fields, recon_fields, step, grid
    )
    return ErrorReport(
        epsilon=epsilon,
        u_l1=u_norms[0], u_l2=u_norms[1], u_linf=u_norms[2],
        rho_l1=rho_norms[0], rho_l2=rho_norms[1], rho_linf=rho_norms[2],
        n_cells=grid.n_cells, t_final=t_final, courant=courant,
    )


# ---------------------------------------------------------------------------
# slope fits and sweeps

@dataclass(frozen=True)
class SlopeFit:
    """Least-squares line through the origin: error ~ slope * epsilon."""

    slope: float
    residual: float


def fit_slope(points) -> SlopeFit:
    """Fit error = K * epsilon through the origin: K = sum(e*eps)/sum(eps^2),
    with the relative residual ||e - K*eps|| / ||e||."""
    pts = [(float(e), float(v)) for e, v in points]
    if not pts:
        raise ValueError("fit_slope needs at least one point")
    eps = np.array([p[0] for p in pts])
    err = np.array([p[1] for p in pts])
    if (eps <= 0.0).any():
        raise ValueError("epsilon values must be positive")
    slope = float((err * eps).sum() / (eps * eps).sum())
    norm = float(np.linalg.norm(err))
    residual = 0.0 if norm == 0.0 else float(
        np.linalg.norm(err - slope * eps) / norm
    )
    return SlopeFit(slope, residual)


_NORM_KEYS = ("u_l1", "u_l2", "u_linf", "rho_l1", "rho_l2", "rho_linf")


@dataclass
class SweepResult:
    """Error reports over a Mach sweep plus per-column slope fits."""

    reports: List[ErrorReport]
    slopes: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)

    @classmethod
    def from_reports(cls, reports):
        reports = sorted(reports, key=lambda r: -r.epsilon)
        slopes = {}
        residuals = {}
        for key in _NORM_KEYS:
            fit = fit_slope([(r.epsilon, getattr(r, key)) for r in reports])
            slopes[key] = fit.slope
            residuals[key] = fit.residual
        return cls(reports, slopes, residuals)


def sweep_epsilons(epsilons, gamma, u0, rho0, grid, t_final,
                   courant=0.9, direct_courant=1.0) -> SweepResult:
    """compare_runs over a list of Mach numbers."""
    reports = [
        compare_runs(eps, gamma, u0, rho0, grid, t_final, courant,
                     direct_courant)
        for eps in epsilons
    ]
    return SweepResult.from_reports(reports)


# ---------------------------------------------------------------------------
# shock detection

def detect_shock_time(run: SnapshotSeries, threshold_factor: float,
                      component: int = 0) -> Optional[float]:
    """First snapshot time where the steepest discrete slope
    max_i |Q_{i+1} - Q_i| / h exceeds threshold_factor times its value in
    the first snapshot; None if never crossed.  Invariant under adding a
    constant to the field."""
    if threshold_factor <= 1.0:
        raise ValueError(
            f"threshold_factor must exceed 1, got {threshold_factor}"
        )
    if len(run) == 0:
        raise ValueError("empty snapshot series")
    baseline = None
    for t, fields in run:
        f = fields[component]
        slope = float(
            np.abs(np.roll(f.values, -1) - f.values).max()
        ) / f.grid.spacing
        if baseline is None:
            baseline = slope
            if baseline == 0.0:
                baseline = None  # flat start: wait for structure
            continue
        if slope > threshold_factor * baseline:
            return t
    return None


# ---------------------------------------------------------------------------
# step-count benchmark

@dataclass(frozen=True)
class BenchmarkRow:
    epsilon: float
    steps_homog: int
    steps_direct: int
    seconds_homog: float
    seconds_direct: float


def benchmark_steps(epsilons, gamma, u0, rho0, grid, t_final,
                    courant=0.9, direct_courant=0.9) -> List[BenchmarkRow]:
    """Step counts and wall times per Mach number.  The two-scale count is
    identical across the sweep (the Mach number never enters its loop);
    wall times are informative only."""
    params = derive_params(u0, rho0, gamma)
    rows = []
    for eps in epsilons:
        t0 = time.perf_counter()
        state0 = split_initial(u0, rho0, params)
        _, _, steps_h = advance(state0, t_final, courant, record_every=10 ** 9)
        t1 = time.perf_counter()
        dstate = init_direct(u0, rho0, eps, gamma)
        _, _, steps_d = advance_direct(dstate, t_final, direct_courant,
                                       record_every=10 ** 9)
        t2 = time.perf_counter()
        rows.append(BenchmarkRow(eps, steps_h, steps_d, t1 - t0, t2 - t1))
    return rows
