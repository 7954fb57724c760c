"""Mach-free core: the two zero-mean profiles whose quadratic conservation
laws carry the slow dynamics, advanced with a scalar Roe scheme.

The forward/backward profiles obey

    d/dt Q + d/dx (alpha*Q^2 + beta*Q) = 0,    alpha = (gamma+1)/4,

with beta = (2*u_mean +- (gamma-1)*rho_mean) / (4*pi).  Both profiles are
stepped with one shared time step so reconstruction can evaluate them at
a common time.
"""

from dataclasses import dataclass

import numpy as np

from .errors import CFLViolationError, NonFiniteFieldError, StationaryFieldError
from .grid import TWO_PI, PeriodicField, SnapshotSeries, integral
from . import kernels

_MEAN_TOL = 1e-12
# slack for k built from the CFL formula itself at courant exactly 1
_CFL_SLACK = 1.0 + 1e-12


@dataclass(frozen=True)
class HomogenizedParams:
    """Flux coefficients derived from the adiabatic exponent and the initial
    means."""

    gamma: float
    u_mean: float
    rho_mean: float
    alpha: float
    beta_forward: float
    beta_backward: float

    @classmethod
    def from_means(cls, gamma, u_mean, rho_mean):
        if gamma < 1.0:
            raise ValueError(f"gamma must be >= 1, got {gamma}")
        alpha = (gamma + 1.0) / 4.0
        beta_forward = (2.0 * u_mean + (gamma - 1.0) * rho_mean) / (2.0 * TWO_PI)
        beta_backward = (2.0 * u_mean - (gamma - 1.0) * rho_mean) / (2.0 * TWO_PI)
        return cls(float(gamma), float(u_mean), float(rho_mean),
                   alpha, beta_forward, beta_backward)


def derive_params(u0: PeriodicField, rho0: PeriodicField, gamma: float) -> HomogenizedParams:
    """Compute the flux coefficients from initial velocity and density."""
    if u0.grid.n_cells != rho0.grid.n_cells:
        raise ValueError("u0 and rho0 live on different grids")
    return HomogenizedParams.from_means(gamma, integral(u0), integral(rho0))


@dataclass(frozen=True)
class HomogenizedState:
    """Zero-mean forward/backward profiles at time t."""

    forward: PeriodicField
    backward: PeriodicField
    t: float
    params: HomogenizedParams

    def __post_init__(self):
        if self.forward.grid.n_cells != self.backward.grid.n_cells:
            raise ValueError("forward and backward profiles on different grids")
        for name, f in (("forward", self.forward), ("backward", self.backward)):
            m = integral(f)
            if abs(m) > _MEAN_TOL:
                raise ValueError(
                    f"{name} profile mean {m:.3e} exceeds {_MEAN_TOL:.0e}"
                )

    @property
    def grid(self):
        return self.forward.grid


def split_initial(u0: PeriodicField, rho0: PeriodicField,
                  params: HomogenizedParams) -> HomogenizedState:
    """Split (u0, rho0) into the zero-mean forward/backward profiles at t=0."""
    if u0.grid.n_cells != rho0.grid.n_cells:
        raise ValueError("u0 and rho0 live on different grids")
    cf = (params.u_mean + params.rho_mean) / TWO_PI
    cb = (params.u_mean - params.rho_mean) / TWO_PI
    fwd = 0.5 * (u0.values + rho0.values - cf)
    bwd = 0.5 * (u0.values - rho0.values - cb)
    return HomogenizedState(
        PeriodicField(u0.grid, fwd), PeriodicField(u0.grid, bwd), 0.0, params
    )


def roe_flux_scalar(q_right, q_left, alpha, beta):
    """Roe interface flux for f(q) = alpha*q^2 + beta*q, upwinding by the
    sign of the interface speed alpha*(q_right + q_left) + beta.  Exactly
    consistent: roe_flux_scalar(q, q, a, b) == f(q)."""
    fr = alpha * q_right * q_right + beta * q_right
    fl = alpha * q_left * q_left + beta * q_left
    speed = np.abs(alpha * (q_right + q_left) + beta)
    return 0.5 * (fr + fl) - 0.5 * speed * (q_right - q_left)


def max_wave_speed(state: HomogenizedState) -> float:
    """Largest interface speed over both profiles."""
    p = state.params
    return max(
        kernels.scalar_max_speed(state.forward.values, p.alpha, p.beta_forward),
        kernels.scalar_max_speed(state.backward.values, p.alpha, p.beta_backward),
    )


def cfl_timestep(state: HomogenizedState, courant: float) -> float:
    """Time step k = courant * h / max-speed; independent of the Mach number
    by construction."""
    if not 0.0 < courant <= 1.0:
        raise ValueError(f"courant must be in (0, 1], got {courant}")
    s = max_wave_speed(state)
    if s == 0.0:
        raise StationaryFieldError("cfl_timestep")
    return courant * state.grid.spacing / s


def _checked_step(values, alpha, beta, k_over_h, operation, step_index=None):
    out = kernels.scalar_roe_step(values, alpha, beta, k_over_h)
    finite = np.isfinite(out)
    if not finite.all():
        raise NonFiniteFieldError(operation, int(np.argmin(finite)), step_index)
    return out


def step_pair(state: HomogenizedState, k: float) -> HomogenizedState:
    """Advance both profiles by one Roe step of size k (CFL-checked)."""
    if k <= 0.0:
        raise ValueError(f"time step must be positive, got {k}")
    h = state.grid.spacing
    cfl = k * max_wave_speed(state) / h
    if cfl > _CFL_SLACK:
        raise CFLViolationError("step_pair", cfl)
    p = state.params
    fwd = _checked_step(state.forward.values, p.alpha, p.beta_forward, k / h,
                        "step_pair")
    bwd = _checked_step(state.backward.values, p.alpha, p.beta_backward, k / h,
                        "step_pair")
    return HomogenizedState(
        PeriodicField(state.grid, fwd), PeriodicField(state.grid, bwd),
        state.t + k, p,
    )


def advance(state: HomogenizedState, t_target: float, courant: float = 0.9,
            record_every: int = 1):
    """Advance to exactly t_target (last step clipped), recording (forward,
    backward) snapshots every `record_every` steps plus first and last.

    Returns (series, final_state, steps_taken).
    """
    if t_target < state.t:
        raise ValueError(f"t_target {t_target} is before state time {state.t}")
    if record_every < 1:
        raise ValueError("record_every must be a positive integer")
    if not 0.0 < courant <= 1.0:
        raise ValueError(f"courant must be in (0, 1], got {courant}")

    grid = state.grid
    h = grid.spacing
    p = state.params
    fwd = state.forward.values.copy()
    bwd = state.backward.values.copy()
    t = state.t

    series = SnapshotSeries()
    series.append(t, (state.forward, state.backward))
    if t_target == state.t:
        return series, state, 0

    steps = 0
    while t < t_target:
        s = max(
            kernels.scalar_max_speed(fwd, p.alpha, p.beta_forward),
            kernels.scalar_max_speed(bwd, p.alpha, p.beta_backward),
        )
        if s == 0.0:
            raise StationaryFieldError("advance")
        k = courant * h / s
        if t + k >= t_target:
            k = t_target - t  # clipping only shrinks k, still admissible
            t = t_target
        else:
            t = t + k
        fwd = _checked_step(fwd, p.alpha, p.beta_forward, k / h, "advance", steps)
        bwd = _checked_step(bwd, p.alpha, p.beta_backward, k / h, "advance", steps)
        steps += 1
        if steps % record_every == 0 or t >= t_target:
            series.append(t, (PeriodicField(grid, fwd), PeriodicField(grid, bwd)))

    final = HomogenizedState(
        PeriodicField(grid, fwd), PeriodicField(grid, bwd), t, p
    )
    return series, final, steps
