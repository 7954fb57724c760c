"""File formats for run artifacts.

Snapshot CSV: per snapshot, comment header lines `# key=value` (always
n_cells and t, plus any extras, keys sorted), then rows `x,v1[,v2...]`
with 17 significant digits.  Series files concatenate snapshot blocks.
All writers are atomic (temp file + rename) so concurrent jobs never
interleave within a file, and every format round-trips byte-identically.
"""

import os
import tempfile
from contextlib import contextmanager

import numpy as np

from .grid import PeriodicField, SnapshotSeries, make_grid


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


@contextmanager
def atomic_write(path):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as handle:
            yield handle
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_snapshot_series(path, series: SnapshotSeries, extras=None,
                          extras_fn=None):
    """Write a snapshot series; `extras` apply to every block, `extras_fn(t)`
    may add per-snapshot entries (e.g. the fast phase)."""
    extras = dict(extras or {})
    with atomic_write(path) as out:
        for t, fields in series:
            grid = fields[0].grid
            header = {"n_cells": str(grid.n_cells), "t": _fmt(t)}
            header.update({k: _value_str(v) for k, v in extras.items()})
            if extras_fn is not None:
                header.update(
                    {k: _value_str(v) for k, v in extras_fn(t).items()}
                )
            for key in sorted(header):
                out.write(f"# {key}={header[key]}\n")
            columns = [f.values for f in fields]
            for i, x in enumerate(grid.centers):
                row = ",".join([_fmt(x)] + [_fmt(c[i]) for c in columns])
                out.write(row + "\n")


def _value_str(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return _fmt(v)


def read_snapshot_series(path):
    """Read a snapshot series file; returns (SnapshotSeries, per-snapshot
    header dicts)."""
    series = SnapshotSeries()
    headers = []
    block_header = {}
    block_rows = []

    def flush():
        if not block_rows:
            return
        n_cells = int(block_header["n_cells"])
        if len(block_rows) != n_cells:
            raise ValueError(
                f"snapshot block has {len(block_rows)} rows, expected {n_cells}"
            )
        grid = make_grid(n_cells)
        data = np.array(block_rows)
        fields = tuple(
            PeriodicField(grid, data[:, c]) for c in range(1, data.shape[1])
        )
        series.append(float(block_header["t"]), fields)
        headers.append(dict(block_header))

    with open(path, "r") as handle:
        for line in handle:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                if block_rows:
                    flush()
                    block_header = {}
                    block_rows = []
                key, _, value = line[1:].strip().partition("=")
                block_header[key.strip()] = value
            else:
                block_rows.append([float(p) for p in line.split(",")])
    flush()
    return series, headers


def write_key_values(path, entries):
    with atomic_write(path) as out:
        for key, value in entries.items():
            out.write(f"{key}={_value_str(value)}\n")


def read_key_values(path):
    entries = {}
    with open(path, "r") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            entries[key] = value
    return entries


ERROR_TABLE_COLUMNS = ("epsilon", "u_l1", "u_l2", "u_linf",
                       "rho_l1", "rho_l2", "rho_linf")


def write_error_table(path, reports):
    with atomic_write(path) as out:
        out.write(",".join(ERROR_TABLE_COLUMNS) + "\n")
        for r in reports:
            out.write(
                ",".join(_fmt(getattr(r, c)) for c in ERROR_TABLE_COLUMNS)
                + "\n"
            )


def read_error_table(path):
    rows = []
    with open(path, "r") as handle:
        header = handle.readline().strip().split(",")
        if tuple(header) != ERROR_TABLE_COLUMNS:
            raise ValueError(f"unexpected error-table header: {header}")
        for line in handle:
            line = line.strip()
            if line:
                rows.append({
                    k: float(v)
                    for k, v in zip(header, line.split(","))
                })
    return rows


BENCHMARK_COLUMNS = ("epsilon", "steps_homog", "steps_direct",
                     "seconds_homog", "seconds_direct")


def write_benchmark_table(path, rows):
    with atomic_write(path) as out:
        out.write(",".join(BENCHMARK_COLUMNS) + "\n")
        for r in rows:
            out.write(",".join([
                _fmt(r.epsilon), str(r.steps_homog), str(r.steps_direct),
                _fmt(r.seconds_homog), _fmt(r.seconds_direct),
            ]) + "\n")


def read_benchmark_table(path):
    rows = []
    with open(path, "r") as handle:
        header = handle.readline().strip().split(",")
        if tuple(header) != BENCHMARK_COLUMNS:
            raise ValueError(f"unexpected benchmark header: {header}")
        for line in handle:
            line = line.strip()
            if not line:
                continue
            eps, sh, sd, th, td = line.split(",")
            rows.append({
                "epsilon": float(eps),
                "steps_homog": int(sh),
                "steps_direct": int(sd),
                "seconds_homog": float(th),
                "seconds_direct": float(td),
            })
    return rows
