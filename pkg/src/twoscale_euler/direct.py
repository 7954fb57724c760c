"""Reference solver: two-wave Roe scheme for the stiff system in
conservative variables (density, momentum) with pressure p(r) = r^gamma / gamma
scaled by 1/mach^2, so acoustic waves travel at speed ~ 1/mach and the
admissible time step shrinks accordingly.
"""

from dataclasses import dataclass

import numpy as np

from .errors import CFLViolationError, NonFiniteFieldError, VacuumError
from .grid import PeriodicField, SnapshotSeries
from . import kernels

_CFL_SLACK = 1.0 + 1e-12


@dataclass(frozen=True)
class EulerState:
    """Conservative state (density, momentum) at time t; density is the
    dimensionless total density (1 + mach * perturbation) and must stay
    positive."""

    density: PeriodicField
    momentum: PeriodicField
    t: float
    mach: float
    gamma: float

    def __post_init__(self):
        if self.density.grid.n_cells != self.momentum.grid.n_cells:
            raise ValueError("density and momentum live on different grids")
        if self.mach <= 0.0:
            raise ValueError(f"mach must be positive, got {self.mach}")
        if self.gamma < 1.0:
            raise ValueError(f"gamma must be >= 1, got {self.gamma}")
        positive = self.density.values > 0.0
        if not positive.all():
            raise VacuumError("EulerState", int(np.argmin(positive)))

    @property
    def grid(self):
        return self.density.grid

    def velocity(self) -> PeriodicField:
        return PeriodicField(self.grid, self.momentum.values / self.density.values)

    def density_perturbation(self) -> PeriodicField:
        """(density - 1) / mach: the variable the reconstruction approximates."""
        return PeriodicField(self.grid, (self.density.values - 1.0) / self.mach)


@dataclass(frozen=True)
class RoeAverage:
    """Interface averages: velocity u_hat and pressure derivative p_slope
    (>= 0); the acoustic speed is sqrt(p_slope) / mach."""

    velocity: float
    pressure_slope: float

    def __post_init__(self):
        if self.pressure_slope < 0.0:
            raise ValueError("pressure_slope must be nonnegative")


def init_direct(u0: PeriodicField, rho0: PeriodicField, mach: float,
                gamma: float) -> EulerState:
    """Initial conservative state: density = 1 + mach * rho0, momentum =
    density * u0."""
    if u0.grid.n_cells != rho0.grid.n_cells:
        raise ValueError("u0 and rho0 live on different grids")
    density = 1.0 + mach * rho0.values
    positive = density > 0.0
    if not positive.all():
        raise VacuumError("init_direct", int(np.argmin(positive)))
    return EulerState(
        PeriodicField(u0.grid, density),
        PeriodicField(u0.grid, density * u0.values),
        0.0, float(mach), float(gamma),
    )


def roe_average(left, right, mach, gamma) -> RoeAverage:
    """Roe averages between cell states (density, velocity).

    velocity is the sqrt(density)-weighted mean; pressure_slope is the
    pressure difference quotient, with the removable equal-density
    singularity replaced by density^(gamma-1).  `mach` does not enter the
    averages themselves (only the acoustic speed built from them).
    """
    del mach
    rl, ul = left
    rr, ur = right
    if rl <= 0.0 or rr <= 0.0:
        raise VacuumError("roe_average", 0)
    sl = np.sqrt(rl)
    sr = np.sqrt(rr)
    u_hat = (ur * sr + ul * sl) / (sr + sl)
    if rr == rl:
        p_slope = rr ** (gamma - 1.0)
    else:
        p_slope = (rr ** gamma - rl ** gamma) / (gamma * (rr - rl))
    return RoeAverage(float(u_hat), float(p_slope))


def max_wave_speed(state: EulerState) -> float:
    """Largest interface acoustic speed |u_hat| + sqrt(p_slope)/mach."""
    return kernels.direct_max_speed(
        state.density.values, state.momentum.values, state.mach, state.gamma
    )


def direct_timestep(state: EulerState, courant: float) -> float:
    """Admissible step courant * h / max-speed; shrinks like mach for small
    mach."""
    if not 0.0 < courant <= 1.0:
        raise ValueError(f"courant must be in (0, 1], got {courant}")
    return courant * state.grid.spacing / max_wave_speed(state)


def _checked_direct_step(density, momentum, mach, gamma, k_over_h,
                         operation, step_index=None):
    d, m = kernels.direct_roe_step(density, momentum, mach, gamma, k_over_h)
    finite = np.isfinite(d) & np.isfinite(m)
    if not finite.all():
        raise NonFiniteFieldError(operation, int(np.argmin(finite)), step_index)
    positive = d > 0.0
    if not positive.all():
        raise VacuumError(operation, int(np.argmin(positive)), step_index)
    return d, m


def direct_step(state: EulerState, k: float) -> EulerState:
    """One CFL-checked Roe update of (density, momentum)."""
    if k <= 0.0:
        raise ValueError(f"time step must be positive, got {k}")
    h = state.grid.spacing
    cfl = k * max_wave_speed(state) / h
    if cfl > _CFL_SLACK:
        raise CFLViolationError("direct_step", cfl)
    d, m = _checked_direct_step(
        state.density.values, state.momentum.values, state.mach, state.gamma,
        k / h, "direct_step",
    )
    return EulerState(
        PeriodicField(state.grid, d), PeriodicField(state.grid, m),
        state.t + k, state.mach, state.gamma,
    )


def advance_direct(state: EulerState, t_target: float, courant: float = 0.9,
                   record_every: int = 1):
    """Advance to exactly t_target (clipped last step), recording snapshots
    of (velocity, density perturbation) every `record_every` steps plus
    first and last.

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
    mach, gamma = state.mach, state.gamma
    density = state.density.values.copy()
    momentum = state.momentum.values.copy()
    t = state.t

    series = SnapshotSeries()
    series.append(t, (state.velocity(), state.density_perturbation()))
    if t_target == state.t:
        return series, state, 0

    steps = 0
    while t < t_target:
        s = kernels.direct_max_speed(density, momentum, mach, gamma)
        k = courant * h / s
        if t + k >= t_target:
            k = t_target - t
            t = t_target
        else:
            t = t + k
        density, momentum = _checked_direct_step(
            density, momentum, mach, gamma, k / h, "advance_direct", steps
        )
        steps += 1
        if steps % record_every == 0 or t >= t_target:
            series.append(t, (
                PeriodicField(grid, momentum / density),
                PeriodicField(grid, (density - 1.0) / mach),
            ))

    final = EulerState(
        PeriodicField(grid, density), PeriodicField(grid, momentum),
        t, mach, gamma,
    )
    return series, final, steps
