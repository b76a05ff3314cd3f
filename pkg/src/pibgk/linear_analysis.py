"""Linearized collision operator: basis, projection, spectra, and the advisor.

Linearizing the Maxwellian around the global equilibrium (rho, u, T) =
(1, 0, 1) turns the collision term into -(I - P)/epsilon, where P is the
rank-(D+2) orthogonal projection onto the collision invariants under the
Gaussian-weighted inner product

    (g, h) = integral g(v) conj(h(v)) (2 pi)^(-D/2) exp(-|v|^2 / 2) dv.

The invariant basis is (1, v_1, ..., v_D, (|v|^2 - D)/2^(D/2)); the stated
energy normalization is exact only for D in {1, 2}, which is all this module
supports.  Quadrature makes the analytic basis only approximately
orthonormal, so a discretely re-orthonormalized copy is kept and used for
every projection and spectrum computation; the analytic copy remains
available for fidelity checks.

Spectra are computed on a similarity-symmetrized form of the operators
(conjugation by diag(sqrt(w_j wG_j))), which turns the projection into a
Euclidean-symmetric matrix and keeps dense eigensolves accurate even though
the Gaussian weights span many orders of magnitude.

Under periodic boundaries the transport term diagonalizes per spatial
Fourier mode, so the coupled transport+collision operator reduces to one
J x J matrix per mode; the advisor scans those modes, pushes every
eigenvalue through the projective amplification factor, and accepts the
parameter choice only if no mode is amplified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import AdviceRejected, EigensolverFailure, GridMismatch, UnsupportedDimension
from .integrators import ProjectiveParameters

_SYMBOL_COEFFS = {
    # Downwind-biased point-value derivative stencils (offsets -2..+1) for
    # positive speed; these are the linear-weight limits of the nonlinear
    # reconstructions in the transport module.
    "upwind1": {-1: -1.0, 0: 1.0},
    "weno2": {-2: 0.25, -1: -1.25, 0: 0.75, 1: 0.25},
    "weno3": {-2: 1.0 / 6.0, -1: -1.0, 0: 0.5, 1: 1.0 / 3.0},
}


def gaussian_weight(grid):
    """Unit Gaussian weight (2 pi)^(-D/2) exp(-|v|^2/2) at the nodes."""
    return np.exp(-0.5 * grid.speed_squared()) / (2.0 * math.pi) ** (grid.dim / 2.0)


def weighted_inner_product(g, h, grid):
    """Gaussian-weighted discrete inner product of two velocity profiles."""
    g = np.asarray(g)
    h = np.asarray(h)
    if g.shape != (grid.n_nodes,) or h.shape != (grid.n_nodes,):
        raise GridMismatch(
            f"profiles of lengths {g.shape} and {h.shape} do not match {grid.n_nodes} nodes"
        )
    return np.sum(grid.weights * gaussian_weight(grid) * g * np.conj(h))


@dataclass(frozen=True)
class WeightedBasis:
    """Collision-invariant basis evaluated on a velocity grid.

    ``analytic`` holds the closed-form functions; ``orthonormal`` is the
    modified Gram-Schmidt re-orthonormalization under the discrete weighted
    inner product, with Gram matrix equal to identity to roundoff.
    """

    grid: object
    analytic: np.ndarray      # (D+2, n_nodes)
    orthonormal: np.ndarray   # (D+2, n_nodes)
    gauss_weight: np.ndarray  # (n_nodes,)

    @property
    def size(self):
        return self.analytic.shape[0]


def build_basis(grid):
    """Analytic and re-orthonormalized invariant bases on ``grid``."""
    if grid.dim not in (1, 2):
        raise UnsupportedDimension(
            f"collision-invariant basis supports dim 1 or 2, got {grid.dim}"
        )
    if grid.n_nodes < grid.dim + 2:
        raise GridMismatch(f"need at least {grid.dim + 2} velocity nodes")
    rows = [np.ones(grid.n_nodes)]
    for d in range(grid.dim):
        rows.append(grid.component(d).copy())
    rows.append((grid.speed_squared() - grid.dim) / 2.0 ** (grid.dim / 2.0))
    analytic = np.vstack(rows)

    wG = gaussian_weight(grid)
    ww = grid.weights * wG
    ortho = analytic.copy()
    # Two MGS passes keep the discrete Gram matrix at identity to roundoff.
    for _ in range(2):
        for k in range(ortho.shape[0]):
            for l in range(k):
                ortho[k] -= np.sum(ww * ortho[k] * ortho[l]) * ortho[l]
            ortho[k] /= math.sqrt(np.sum(ww * ortho[k] ** 2))
    return WeightedBasis(grid=grid, analytic=analytic, orthonormal=ortho, gauss_weight=wG)


def gram_matrix(profiles, grid):
    """Matrix of pairwise weighted inner products of the given profiles."""
    profiles = np.asarray(profiles)
    ww = grid.weights * gaussian_weight(grid)
    return (profiles * ww) @ profiles.T


def project(profile, basis):
    """Orthogonal projection onto the invariant subspace (re-orthonormalized)."""
    profile = np.asarray(profile)
    if profile.shape[-1] != basis.grid.n_nodes:
        raise GridMismatch(
            f"profile length {profile.shape[-1]} does not match {basis.grid.n_nodes} nodes"
        )
    ww = basis.grid.weights * basis.gauss_weight
    coeffs = (profile * ww) @ basis.orthonormal.T
    return coeffs @ basis.orthonormal


def linearized_maxwellian(profile, basis):
    """Equilibrium linearized at the global Maxwellian.

    Identical to ``project``: the linearized equilibrium is exactly the
    invariant-subspace component of the distribution.
    """
    return project(profile, basis)


def projection_matrix(basis, symmetrized=False):
    """Dense matrix of the invariant projection acting on node values.

    The raw matrix is self-adjoint only under the weighted inner product;
    ``symmetrized=True`` returns the similar matrix C C^T (conjugation by
    diag(sqrt(w wG))), which is Euclidean-symmetric and shares the spectrum.
    """
    ww = basis.grid.weights * basis.gauss_weight
    if symmetrized:
        C = (basis.orthonormal * np.sqrt(ww)).T
        return C @ C.T
    return basis.orthonormal.T @ (basis.orthonormal * ww)


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense discrete operator with the parameters it was assembled from."""

    matrix: np.ndarray
    eps: float
    mode: object = None        # spatial Fourier mode, None for collision only
    symmetrized: bool = True


def collision_operator(eps, basis, symmetrized=True):
    """Dense matrix of the linearized collision term -(I - P)/eps."""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    P = projection_matrix(basis, symmetrized=symmetrized)
    J = basis.grid.n_nodes
    return OperatorMatrix(matrix=-(np.eye(J) - P) / eps, eps=eps, mode=None,
                          symmetrized=symmetrized)


def collision_spectrum(eps, basis):
    """Eigenvalues of the linearized collision operator, ascending.

    Exactly D+2 eigenvalues at 0 and the rest at -1/eps, up to roundoff.
    """
    op = collision_operator(eps, basis, symmetrized=True)
    try:
        return scipy.linalg.eigvalsh(op.matrix)
    except scipy.linalg.LinAlgError as exc:
        raise EigensolverFailure(f"collision spectrum failed: {exc}") from exc


def transport_symbol(v, theta, dx, order="upwind1"):
    """Fourier symbol of the discrete upwinded v d/dx at phase angle theta.

    Returns sigma(v, theta) such that the transport tendency contributes
    -sigma to the per-mode operator; Re(sigma) >= 0 for all angles
    (upwinding is dissipative).  Speeds of either sign are handled by
    mirror symmetry, zero speed contributes nothing.
    """
    try:
        coeffs = _SYMBOL_COEFFS[order]
    except KeyError:
        raise ValueError(f"unknown reconstruction order {order!r}") from None
    v = np.asarray(v, dtype=float)
    s = sum(c * np.exp(1j * k * theta) for k, c in coeffs.items()) / dx
    return np.where(v >= 0, v * s, -v * np.conj(s))


def transport_collision_operator(eps, dx, basis, mode, n_cells, order="upwind1",
                                 symmetrized=True):
    """Per-Fourier-mode matrix of transport plus linearized collision.

    ``mode`` is an integer wavenumber (or a tuple in 2D) on a periodic grid
    of ``n_cells`` cells per axis; the phase angle along each axis is
    2 pi m / I.  The symmetrizing similarity transform commutes with the
    diagonal transport symbol, so both terms can be assembled directly.
    """
    grid = basis.grid
    modes = (mode,) if np.isscalar(mode) else tuple(mode)
    counts = (n_cells,) if np.isscalar(n_cells) else tuple(n_cells)
    spacings = (dx,) if np.isscalar(dx) else tuple(dx)
    if not len(modes) == len(counts) == len(spacings) == grid.dim:
        raise GridMismatch(
            f"mode/cells/spacing must have one entry per axis ({grid.dim})"
        )
    sigma = np.zeros(grid.n_nodes, dtype=complex)
    for d in range(grid.dim):
        theta = 2.0 * math.pi * modes[d] / counts[d]
        sigma += transport_symbol(grid.component(d), theta, spacings[d], order)
    P = projection_matrix(basis, symmetrized=symmetrized)
    J = grid.n_nodes
    A = -np.diag(sigma) - (np.eye(J) - P) / eps
    return OperatorMatrix(matrix=A, eps=eps, mode=mode, symmetrized=symmetrized)


def transport_collision_spectrum(eps, dx, basis, modes, n_cells, order="upwind1"):
    """Eigenvalues of the coupled per-mode operator for each requested mode.

    Returns a list of (mode, eigenvalues) pairs in the order given.
    """
    out = []
    for mode in modes:
        op = transport_collision_operator(eps, dx, basis, mode, n_cells, order)
        try:
            lam = scipy.linalg.eigvals(op.matrix)
        except scipy.linalg.LinAlgError as exc:
            raise EigensolverFailure(f"eigensolve failed for mode {mode}: {exc}") from exc
        out.append((mode, lam[np.argsort(lam.real)]))
    return out


def projective_amplification(lam, params, tableau=None):
    """Amplification factor of a projective step on the test problem f' = lam f.

    With tau = 1 + dt_inner lam, the chord slope after the damping phase is
    lam tau^K times the seed, so projective forward Euler (tableau None)
    amplifies by tau^K (tau + (dt_outer - (K+1) dt_inner) lam); the PRK
    recurrence threads the same chord factor through the stage seeds.
    Vectorized over ``lam``.
    """
    lam = np.asarray(lam, dtype=complex)
    dti = params.dt_inner
    K = params.damping_steps
    dto = params.dt_outer
    tau = 1.0 + dti * lam
    span = params.inner_span
    if tableau is None:
        return tau ** K * (tau + (dto - span) * lam)
    chord = lam * tau ** K
    seeds = [np.ones_like(lam)]
    for s in range(1, tableau.stages):
        acc = np.zeros_like(lam)
        for l in range(s):
            if tableau.a[s, l] != 0.0:
                acc = acc + (tableau.a[s, l] / tableau.c[s]) * chord * seeds[l]
        seeds.append(tau ** (K + 1) + (tableau.c[s] * dto - span) * acc)
    comb = sum(tableau.b[s] * chord * seeds[s] for s in range(tableau.stages))
    return tau ** (K + 1) + (dto - span) * comb


def _default_mode_sample(counts):
    """Modes scanned by the advisor: everything in 1D, a sweep per axis in 2D."""
    if len(counts) == 1:
        return [m for m in range(counts[0])]
    picks = []
    for count in counts:
        base = {0, 1, 2, 3, count // 4, count // 2 - 1, count // 2,
                (3 * count) // 4, count - 1}
        picks.append(sorted(m % count for m in base))
    return [(mx, my) for mx in picks[0] for my in picks[1]]


@dataclass(frozen=True)
class ParameterAdvice:
    """Advised projective parameters plus the spectral stability evidence."""

    params: ProjectiveParameters
    max_amplification: float
    worst_mode: object
    worst_eigenvalue: complex
    use_direct_rk4: bool
    note: str

    @property
    def margin(self):
        """Distance of the worst amplification below the unit circle."""
        return 1.0 - self.max_amplification


def advise_parameters(eps, dx, basis, n_cells, cfl_fraction=0.4, damping_steps=2,
                      tableau=None, order="upwind1", modes=None, tol=1e-8):
    """Projective parameters for a target stiffness and mesh, spectrally vetted.

    The rule: inner step equal to eps (so damping kills the collisional
    cluster in one step), K = ``damping_steps``, outer step a CFL fraction
    of the finest spacing.  Every sampled Fourier mode of the linearized
    operator is pushed through the projective amplification factor of the
    chosen outer method; if any eigenvalue is amplified beyond 1 + ``tol``
    the advice is rejected.

    When (K+1) eps already reaches the CFL-limited outer step there is
    nothing left to project over; the advice then degenerates to
    dt_outer = (K+1) dt_inner and recommends direct RK4 instead.
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    spacings = (dx,) if np.isscalar(dx) else tuple(dx)
    counts = (n_cells,) if np.isscalar(n_cells) else tuple(n_cells)
    if any(not s > 0 for s in spacings):
        raise ValueError(f"spacing must be positive, got {dx}")
    if tableau is None:
        from .integrators import named_tableau
        tableau = named_tableau("rk4")

    dt_inner = eps
    K = int(damping_steps)
    dt_raw = cfl_fraction * min(spacings)
    span = (K + 1) * dt_inner
    degenerate = span >= dt_raw * (1 - 1e-12)
    params = ProjectiveParameters(dt_inner, K, max(dt_raw, span))

    scan = modes if modes is not None else _default_mode_sample(counts)
    worst = -np.inf
    worst_mode = None
    worst_lam = None
    for mode, lam in transport_collision_spectrum(eps, dx, basis, scan, n_cells, order):
        amp = np.abs(projective_amplification(lam, params, tableau))
        k = int(np.argmax(amp))
        if amp[k] > worst:
            worst, worst_mode, worst_lam = float(amp[k]), mode, complex(lam[k])

    if degenerate:
        note = ("outer step collapses onto the damping phase at this stiffness; "
                "projective integration gains nothing, use direct RK4")
        return ParameterAdvice(params=params, max_amplification=worst,
                               worst_mode=worst_mode, worst_eigenvalue=worst_lam,
                               use_direct_rk4=True, note=note)
    if worst > 1.0 + tol:
        raise AdviceRejected(
            f"amplification {worst:.6g} > 1 at mode {worst_mode}, "
            f"eigenvalue {worst_lam:.6g}"
        )
    return ParameterAdvice(params=params, max_amplification=worst,
                           worst_mode=worst_mode, worst_eigenvalue=worst_lam,
                           use_direct_rk4=False, note="spectral check passed")
