"""Uniform periodic mesh on the 2*pi torus, cell-averaged fields, and the
integral / total-variation / space-time-norm functionals shared by all
solvers.

The domain is fixed to [0, 2*pi): every coefficient of the homogenized
model carries explicit 1/(2*pi) factors tied to that length.  Cell i is
the half-open interval [x_i - h/2, x_i + h/2) around the center
x_i = i*h, with periodic wrap.
"""

from dataclasses import dataclass, field
from functools import cached_property
import math

import numpy as np

from .errors import NonFiniteFieldError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic mesh: n_cells cells of width 2*pi/n_cells."""

    n_cells: int

    def __post_init__(self):
        if not isinstance(self.n_cells, (int, np.integer)) or isinstance(self.n_cells, bool):
            raise TypeError(f"n_cells must be an integer, got {self.n_cells!r}")
        if self.n_cells < 4:
            raise ValueError(
                f"n_cells must be >= 4 (degenerate stencil), got {self.n_cells}"
            )

    @cached_property
    def spacing(self) -> float:
        return TWO_PI / self.n_cells

    @cached_property
    def centers(self) -> np.ndarray:
        xs = np.arange(self.n_cells, dtype=np.float64) * self.spacing
        xs.setflags(write=False)
        return xs


def make_grid(n_cells: int) -> GridSpec:
    """Build the uniform periodic mesh with the given cell count."""
    if not float(n_cells).is_integer():
        raise TypeError(f"n_cells must be an integer, got {n_cells!r}")
    return GridSpec(int(n_cells))


@dataclass(frozen=True, eq=False)
class PeriodicField:
    """Piecewise-constant scalar field: one value per cell of `grid`.

    Values are validated finite and frozen read-only on construction, so
    instances can be shared across threads without copying.
    """

    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64, copy=True).ravel()
        if vals.shape[0] != self.grid.n_cells:
            raise ValueError(
                f"field has {vals.shape[0]} values for a grid of "
                f"{self.grid.n_cells} cells"
            )
        finite = np.isfinite(vals)
        if not finite.all():
            raise NonFiniteFieldError("PeriodicField", int(np.argmin(finite)))
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def with_values(self, values) -> "PeriodicField":
        return PeriodicField(self.grid, values)


def sample_field(grid: GridSpec, source) -> PeriodicField:
    """Sample a callable u(x), or tabulated (x, value) pairs, onto the grid.

    Tabulated input is assigned by nearest point (periodic distance) and
    must cover [0, 2*pi) with at least n_cells points and no gap wider
    than two cells.
    """
    if callable(source):
        xs = grid.centers
        try:
            vals = np.asarray(source(xs), dtype=np.float64)
            if vals.shape != xs.shape:
                raise TypeError
        except Exception:
            vals = np.array([float(source(x)) for x in xs], dtype=np.float64)
        return PeriodicField(grid, vals)

    pairs = [(float(x), float(v)) for x, v in source]
    if len(pairs) < grid.n_cells:
        raise ValueError(
            f"tabulated input has {len(pairs)} points; need at least "
            f"{grid.n_cells}"
        )
    pts = np.array(sorted((x % TWO_PI, v) for x, v in pairs))
    xs, vs = pts[:, 0], pts[:, 1]
    gaps = np.diff(np.append(xs, xs[0] + TWO_PI))
    if gaps.max() > 2.0 * grid.spacing:
        raise ValueError(
            f"tabulated input has a coverage gap of {gaps.max():.6g} "
            f"(> 2h = {2 * grid.spacing:.6g})"
        )
    # nearest tabulated point per center, with periodic wrap
    idx = np.searchsorted(xs, grid.centers)
    left = (idx - 1) % len(xs)
    right = idx % len(xs)
    dl = np.abs(grid.centers - xs[left])
    dl = np.minimum(dl, TWO_PI - dl)
    dr = np.abs(grid.centers - xs[right])
    dr = np.minimum(dr, TWO_PI - dr)
    vals = np.where(dl <= dr, vs[left], vs[right])
    return PeriodicField(grid, vals)


def integral(f: PeriodicField) -> float:
    """Midpoint-rule integral h * sum(values); spectrally exact for
    trigonometric polynomials of degree < n_cells."""
    return f.grid.spacing * float(f.values.sum())


def total_variation(f: PeriodicField) -> float:
    """Discrete periodic total variation sum_i |Q_i - Q_{i-1}|."""
    return float(np.abs(f.values - np.roll(f.values, 1)).sum())


class SnapshotSeries:
    """Time-ordered snapshots: (time, one or more PeriodicField) entries."""

    def __init__(self):
        self._times = []
        self._fields = []

    def append(self, time: float, fields):
        if isinstance(fields, PeriodicField):
            fields = (fields,)
        fields = tuple(fields)
        if not fields:
            raise ValueError("snapshot must carry at least one field")
        if self._times and time <= self._times[-1]:
            raise ValueError(
                f"snapshot times must increase strictly: {time} after "
                f"{self._times[-1]}"
            )
        self._times.append(float(time))
        self._fields.append(fields)

    @property
    def times(self):
        return tuple(self._times)

    def __len__(self):
        return len(self._times)

    def __iter__(self):
        return iter(zip(self._times, self._fields))

    def __getitem__(self, i):
        return self._times[i], self._fields[i]


def spacetime_norms(diffs: SnapshotSeries, step: float):
    """Discrete L1/L2/Linf norms of a series of single-field snapshots over
    space and time, every snapshot weighted by the time step `step`:

        L1   = sum_n step * h * sum_i |d_i^n|
        L2   = sqrt(sum_n step * h * sum_i (d_i^n)^2)
        Linf = max_{n,i} |d_i^n|
    """
    if len(diffs) == 0:
        raise ValueError("empty snapshot series")
    l1 = 0.0
    l2sq = 0.0
    linf = 0.0
    for _, fields in diffs:
        if len(fields) != 1:
            raise ValueError("spacetime_norms expects one field per snapshot")
        v = fields[0].values
        h = fields[0].grid.spacing
        l1 += step * h * float(np.abs(v).sum())
        l2sq += step * h * float((v * v).sum())
        linf = max(linf, float(np.abs(v).max()))
    return l1, math.sqrt(l2sq), linf
