"""Snapshot and spectrum serialization.

Snapshots are CSV files of per-cell macroscopic moments, one row per cell in
x-major order, every float rendered with 17 significant digits so files are
byte-identical across reruns of the same configuration.  The distribution
itself is only dumped on request (one .npy per snapshot; it is n_cells x
n_nodes doubles).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .phase_space import compute_moments


@dataclass
class SnapshotRecord:
    """Macroscopic state of one instant, ready for serialization."""

    t: float
    space: object
    moments: object


def snapshot_from_field(t, field):
    return SnapshotRecord(t=float(t), space=field.space, moments=compute_moments(field))


def _fmt(x):
    return format(float(x), ".17g")


def snapshot_header(dim):
    coords = ["x", "y"][:dim]
    ucols = ["ux", "uy"][:dim]
    qcols = ["qx", "qy"][:dim]
    return ",".join(["t"] + coords + ["rho"] + ucols + ["T", "E"] + qcols)


def write_snapshot(record, path):
    """Write one snapshot CSV; rows ordered x-major (y fastest in 2D)."""
    space = record.space
    m = record.moments
    mesh = space.center_mesh()
    n = space.n_cells
    coords = [c.reshape(n) for c in mesh]
    rho = m.rho.reshape(n)
    u = m.u.reshape(n, space.dim)
    T = m.T.reshape(n)
    E = m.E.reshape(n)
    q = m.q.reshape(n, space.dim)

    lines = [snapshot_header(space.dim)]
    tstr = _fmt(record.t)
    for i in range(n):
        row = [tstr]
        row += [_fmt(c[i]) for c in coords]
        row.append(_fmt(rho[i]))
        row += [_fmt(u[i, d]) for d in range(space.dim)]
        row += [_fmt(T[i]), _fmt(E[i])]
        row += [_fmt(q[i, d]) for d in range(space.dim)]
        lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_snapshot(path):
    """Load a snapshot CSV back into a dict of column arrays."""
    text = Path(path).read_text(encoding="utf-8").strip().split("\n")
    names = text[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in text[1:]])
    return {name: data[:, k] for k, name in enumerate(names)}


def snapshot_filename(t):
    return f"snapshot_t{t:.6f}.csv"


def distribution_filename(t):
    return f"distribution_t{t:.6f}.npy"


def write_distribution(field, path):
    np.save(path, field.values)


def write_spectrum_csv(spectra, path, n_cells=None):
    """Write (mode, eigenvalues) pairs as CSV with header mode,re,im.

    2D modes (mx, my) are flattened to mx * Iy + my so the mode column stays
    a single integer; ``n_cells`` supplies Iy in that case.
    """
    lines = ["mode,re,im"]
    for mode, lam in spectra:
        if np.isscalar(mode):
            mcol = int(mode)
        else:
            iy = n_cells[1] if n_cells is not None else 1
            mcol = int(mode[0]) * int(iy) + int(mode[1])
        for val in np.asarray(lam):
            lines.append(f"{mcol},{_fmt(val.real)},{_fmt(val.imag)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
