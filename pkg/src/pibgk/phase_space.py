"""Phase-space grids, distribution fields, Maxwellians, and velocity moments.

The distribution f(x, v, t) is stored cell-major: an array of shape
``space.shape + (velocity.n_nodes,)`` so that the collision relaxation,
which is local in space, streams over contiguous memory.

Velocity integrals use the midpoint rule on a uniform tensor grid with
symmetric bounds, so odd moments of even profiles vanish to roundoff and
Gaussian integrands converge near-spectrally.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    GridMismatch,
    NonPositiveDensity,
    NonPositiveInput,
    NonPositiveTemperature,
    PibgkError,
)

BOUNDARY_TAGS = ("outflow", "periodic")


def _as_axis_bounds(bounds, dim=None):
    """Normalize bounds input to a tuple of per-axis (lo, hi) pairs."""
    arr = np.asarray(bounds, dtype=float)
    if arr.ndim == 1:
        if arr.shape != (2,):
            raise ValueError(f"bounds must be (lo, hi) or a list of pairs, got {bounds!r}")
        pairs = (tuple(arr),) * (dim or 1)
    elif arr.ndim == 2 and arr.shape[1] == 2:
        pairs = tuple(tuple(row) for row in arr)
    else:
        raise ValueError(f"bounds must be (lo, hi) or a list of pairs, got {bounds!r}")
    for lo, hi in pairs:
        if not hi > lo:
            raise ValueError(f"empty axis interval [{lo}, {hi}]")
    return pairs


def _per_axis_counts(n, naxes):
    counts = (int(n),) * naxes if np.isscalar(n) else tuple(int(k) for k in n)
    if len(counts) != naxes or any(k < 1 for k in counts):
        raise ValueError(f"need one positive count per axis, got {n!r}")
    return counts


@dataclass(frozen=True)
class VelocityGrid:
    """Uniform tensor grid of velocity nodes with midpoint quadrature weights.

    Attributes
    ----------
    dim : velocity dimension (1 or 2)
    bounds : per-axis (lo, hi); symmetric, lo = -hi
    n_per_axis : node count per axis
    nodes : (n_nodes, dim) node coordinates, x-axis fastest varying last
    weights : (n_nodes,) quadrature weights, all equal to prod(spacing)
    spacing : per-axis node spacing
    """

    dim: int
    bounds: tuple
    n_per_axis: tuple
    nodes: np.ndarray
    weights: np.ndarray
    spacing: tuple

    @classmethod
    def uniform(cls, bounds, n_nodes):
        """Build a grid from symmetric per-axis bounds and node counts.

        ``uniform((-8, 8), 80)`` gives 1D; ``uniform([(-10, 10)] * 2, 30)``
        or ``uniform((-10, 10), (30, 30))`` give 2D.
        """
        if np.isscalar(n_nodes):
            pairs = _as_axis_bounds(bounds)
            counts = _per_axis_counts(n_nodes, len(pairs))
        else:
            counts = tuple(int(k) for k in n_nodes)
            pairs = _as_axis_bounds(bounds, dim=len(counts))
            counts = _per_axis_counts(counts, len(pairs))
        dim = len(pairs)
        for lo, hi in pairs:
            if abs(lo + hi) > 1e-12 * max(abs(lo), abs(hi)):
                raise ValueError(f"velocity bounds must be symmetric, got [{lo}, {hi}]")
        spacing = tuple((hi - lo) / k for (lo, hi), k in zip(pairs, counts))
        axes = [
            lo + (np.arange(k) + 0.5) * dv
            for (lo, hi), k, dv in zip(pairs, counts, spacing)
        ]
        mesh = np.meshgrid(*axes, indexing="ij")
        nodes = np.stack([m.ravel() for m in mesh], axis=-1)
        weights = np.full(nodes.shape[0], math.prod(spacing))
        return cls(dim=dim, bounds=pairs, n_per_axis=counts, nodes=nodes,
                   weights=weights, spacing=spacing)

    @property
    def n_nodes(self):
        return self.nodes.shape[0]

    def component(self, axis):
        """Velocity component along one axis, shape (n_nodes,)."""
        return self.nodes[:, axis]

    def speed_squared(self):
        """|v|^2 per node."""
        return np.einsum("jd,jd->j", self.nodes, self.nodes)


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform cell-centered spatial grid with per-axis boundary tags."""

    dim: int
    bounds: tuple
    cells: tuple
    spacing: tuple
    bc: tuple   # "outflow" | "periodic" per axis

    @classmethod
    def uniform(cls, bounds, cells, bc):
        pairs = _as_axis_bounds(bounds, dim=None if not np.isscalar(cells) else 1)
        counts = _per_axis_counts(cells, len(pairs))
        tags = (bc,) * len(pairs) if isinstance(bc, str) else tuple(bc)
        if len(tags) != len(pairs):
            raise ValueError("need one boundary tag per axis")
        for tag in tags:
            if tag not in BOUNDARY_TAGS:
                raise ValueError(f"unknown boundary tag {tag!r}, expected one of {BOUNDARY_TAGS}")
        spacing = tuple((hi - lo) / k for (lo, hi), k in zip(pairs, counts))
        return cls(dim=len(pairs), bounds=pairs, cells=counts, spacing=spacing, bc=tags)

    @property
    def shape(self):
        return self.cells

    @property
    def n_cells(self):
        return math.prod(self.cells)

    def centers(self, axis):
        """Cell-center coordinates along one axis."""
        lo, _ = self.bounds[axis]
        return lo + (np.arange(self.cells[axis]) + 0.5) * self.spacing[axis]

    def center_mesh(self):
        """Cell-center coordinate arrays, one (cells...) array per axis."""
        axes = [self.centers(d) for d in range(self.dim)]
        return np.meshgrid(*axes, indexing="ij")

    @property
    def cell_volume(self):
        return math.prod(self.spacing)


@dataclass
class DistributionField:
    """Discrete phase-space density f[cell, velocity node]."""

    values: np.ndarray
    space: SpatialGrid
    velocity: VelocityGrid

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        expected = self.space.shape + (self.velocity.n_nodes,)
        if self.values.shape != expected:
            raise GridMismatch(
                f"field shape {self.values.shape} does not match grids, expected {expected}"
            )

    def copy(self):
        return DistributionField(self.values.copy(), self.space, self.velocity)

    def moments(self):
        return compute_moments(self)

    def total_mass(self):
        """Total discrete mass: sum over cells and nodes of w_j f Delta x^D."""
        return float(np.sum(self.values @ self.velocity.weights) * self.space.cell_volume)


@dataclass
class MomentField:
    """Macroscopic fields derived from a distribution: per-cell arrays.

    E is stored consistently with rho, u, T:  E = rho |u|^2 / 2 + D rho T / 2.
    """

    rho: np.ndarray
    u: np.ndarray    # (..., dim)
    T: np.ndarray
    E: np.ndarray
    q: np.ndarray    # (..., dim)


def maxwellian(rho, u, T, grid):
    """Maxwellian profile rho (2 pi T)^(-D/2) exp(-|v - u|^2 / (2 T)) at the nodes.

    Broadcasts over leading axes: scalars give a (n_nodes,) profile, per-cell
    arrays give an array of profiles with the node axis last.

    Raises
    ------
    NonPositiveInput
        if any rho <= 0 or T <= 0 (NaN counts as non-positive).
    """
    rho = np.asarray(rho, dtype=float)
    T = np.asarray(T, dtype=float)
    u = np.asarray(u, dtype=float)
    if u.ndim == 0:
        u = u[None]
    if u.shape[-1] != grid.dim:
        raise GridMismatch(f"bulk velocity has {u.shape[-1]} components, grid has {grid.dim}")
    if not np.all(rho > 0):
        raise NonPositiveInput("maxwellian requires rho > 0 everywhere")
    if not np.all(T > 0):
        raise NonPositiveInput("maxwellian requires T > 0 everywhere")

    sq = np.zeros(np.broadcast_shapes(rho.shape, T.shape, u.shape[:-1]) + (grid.n_nodes,))
    for d in range(grid.dim):
        sq += (grid.nodes[:, d] - u[..., d, None]) ** 2
    norm = rho / (2.0 * math.pi * T) ** (grid.dim / 2.0)
    out = norm[..., None] * np.exp(-sq / (2.0 * T[..., None]))
    if rho.ndim == 0:
        return out.reshape(grid.n_nodes)
    return out


def _first_bad_cell(mask):
    first = np.argwhere(mask)[0]
    return int(first[0]) if first.size == 1 else tuple(int(i) for i in first)


def _rho_u_T(values, grid):
    """Density, bulk velocity, temperature of f-values with node axis last.

    Raises NonPositiveDensity / NonPositiveTemperature with the offending
    cell index; NaN input fails these checks as well.
    """
    w = grid.weights
    rho = values @ w
    bad = ~(rho > 0)
    if bad.any():
        raise NonPositiveDensity(f"rho <= 0 (or non-finite) in cell {_first_bad_cell(bad)}")
    u = np.empty(rho.shape + (grid.dim,))
    for d in range(grid.dim):
        u[..., d] = (values @ (w * grid.nodes[:, d])) / rho
    m2 = values @ (w * grid.speed_squared())
    usq = np.einsum("...d,...d->...", u, u)
    T = (m2 - rho * usq) / (grid.dim * rho)
    bad = ~(T > 0)
    if bad.any():
        raise NonPositiveTemperature(f"T <= 0 (or non-finite) in cell {_first_bad_cell(bad)}")
    return rho, u, T


def compute_moments(field):
    """Full macroscopic state (rho, u, T, E, q) of a distribution field."""
    rho, u, T = _rho_u_T(field.values, field.velocity)
    usq = np.einsum("...d,...d->...", u, u)
    E = 0.5 * rho * usq + 0.5 * field.velocity.dim * rho * T
    q = compute_heat_flux(field, u)
    return MomentField(rho=rho, u=u, T=T, E=E, q=q)


def compute_heat_flux(field, u):
    """Heat flux q^d = 1/2 sum_j w_j |c_j|^2 c_j^d f_j with c = v - u."""
    grid = field.velocity
    u = np.asarray(u, dtype=float)
    if u.shape != field.values.shape[:-1] + (grid.dim,):
        raise GridMismatch("bulk velocity shape does not match the field")
    csq = np.zeros(field.values.shape)
    comps = []
    for d in range(grid.dim):
        c = grid.nodes[:, d] - u[..., d, None]
        comps.append(c)
        csq += c * c
    weighted = field.values * csq
    q = np.empty(u.shape)
    for d in range(grid.dim):
        q[..., d] = 0.5 * ((weighted * comps[d]) @ grid.weights)
    return q


def local_equilibrium(values, grid, mode="analytic", tol=1e-13, max_iter=12):
    """Local Maxwellian sharing the moments of f, evaluated at the nodes.

    mode="analytic" evaluates the closed-form Maxwellian of the discrete
    moments; its own discrete moments then differ from f's by the quadrature
    error.  mode="corrected" fixed-point adjusts the (rho, u, T) parameters
    until the discrete moments of the profile match f's within ``tol``
    (relative; u measured in thermal-speed units), then rescales so the
    discrete mass matches exactly.  The scaling leaves u and T untouched.
    """
    rho, u, T = _rho_u_T(values, grid)
    if mode == "analytic":
        return maxwellian(rho, u, T, grid)
    if mode != "corrected":
        raise ValueError(f"unknown equilibrium mode {mode!r}")

    rc, uc, Tc = rho.copy(), u.copy(), T.copy()
    sqT = np.sqrt(T)
    for _ in range(max_iter):
        M = maxwellian(rc, uc, Tc, grid)
        rm, um, Tm = _rho_u_T(M, grid)
        err = max(
            np.max(np.abs(rm - rho) / rho),
            np.max(np.abs(um - u) / sqT[..., None]),
            np.max(np.abs(Tm - T) / T),
        )
        if err <= tol:
            break
        rc *= rho / rm
        uc += u - um
        Tc *= T / Tm
    else:
        raise PibgkError(
            "moment-corrected equilibrium did not converge; "
            "velocity grid too coarse or domain too small for this state"
        )
    # Exact discrete mass match; multiplicative scaling preserves u and T.
    return M * (rho / rm)[..., None]


def check_velocity_domain(u, T, grid, n_sigma=5.0):
    """Warn when bulk +/- n_sigma thermal widths poke outside the grid.

    A Gaussian tail cut at 5 sigma carries ~3e-7 of the mass; states beyond
    that lose moment accuracy silently, which this check surfaces.
    """
    u = np.asarray(u, dtype=float)
    T = np.asarray(T, dtype=float)
    width = n_sigma * np.sqrt(T)
    for d in range(grid.dim):
        lo, hi = grid.bounds[d]
        reach = np.abs(u[..., d]) + width
        excess = float(np.max(reach - hi))
        if excess > 0:
            warnings.warn(
                f"velocity axis {d} bounds [{lo}, {hi}] clip the distribution: "
                f"|u| + {n_sigma} sqrt(T) exceeds the bound by up to {excess:.3g}",
                stacklevel=2,
            )
