"""CSV snapshots and the trajectory manifest."""

import csv
from pathlib import Path

import numpy as np

from .grid import ConservedField

FMT = "%.17g"


def snapshot_header(dim):
    cols = ["x", "y"][:dim] + ["rho"] + ["ux", "uy"][:dim] + ["e", "p", "s", "min_s_to_date"]
    return cols


def snapshot_table(field: ConservedField, eos, min_s_to_date=None):
    """Columns of one snapshot as a 2D array, one row per cell (C order)."""
    grid = field.grid
    rho, u, e = field.rho, field.u, field.e
    s = eos.entropy(rho, e)
    if min_s_to_date is None:
        min_s_to_date = s
    cols = [X.ravel() for X in grid.mesh()]
    cols.append(rho.ravel())
    cols.extend(u[k].ravel() for k in range(grid.dim))
    cols.extend([e.ravel(), eos.pressure(rho, e).ravel(), s.ravel(), np.asarray(min_s_to_date).ravel()])
    return np.column_stack(cols)


def write_snapshot(path, field: ConservedField, eos, min_s_to_date=None):
    table = snapshot_table(field, eos, min_s_to_date)
    np.savetxt(path, table, fmt=FMT, delimiter=",", header=",".join(snapshot_header(field.grid.dim)), comments="")
    return Path(path)


def read_snapshot(path):
    """Return ``(header, table)`` for a snapshot file."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, table


def write_manifest(path, entries):
    """``entries`` is an iterable of (index, t, snapshot path relative to the manifest)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "t", "path"])
        for i, t, p in entries:
            w.writerow([i, FMT % t, str(p)])
    return Path(path)


def read_manifest(path):
    with open(path, newline="") as fh:
        return [(int(r["index"]), float(r["t"]), r["path"]) for r in csv.DictReader(fh)]
