"""Initial conditions: Riemann problems, shock-bubble interaction, fixtures.

Each builder samples macroscopic states at cell centers and returns the
corresponding Maxwellian distribution field.  Builders are deterministic and
warn when a state's thermal spread does not fit the velocity grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .phase_space import (
    DistributionField,
    SpatialGrid,
    VelocityGrid,
    check_velocity_domain,
    maxwellian,
)


@dataclass(frozen=True)
class MacroState:
    """A positive-density, positive-temperature macroscopic state."""

    rho: float
    u: tuple
    T: float

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        object.__setattr__(self, "u", tuple(float(c) for c in self.u))


SOD_LEFT = MacroState(rho=1.0, u=(0.0,), T=1.0)
SOD_RIGHT = MacroState(rho=0.125, u=(0.0,), T=0.25)

# Pre/post states of a Mach-2 shock in a D=2 monatomic gas; the shock sits
# at x = -1 and runs into fluid at rest.
SHOCK_LEFT = MacroState(rho=16.0 / 7.0, u=(math.sqrt(5.0 / 3.0) * 7.0 / 16.0, 0.0),
                        T=133.0 / 64.0)
SHOCK_RIGHT_T = 1.0
BUBBLE_CENTER = (0.5, 0.0)
BUBBLE_AMPLITUDE = 1.5
BUBBLE_SHARPNESS = 16.0


def _require_dims(space, velocity, dim, name):
    if space.dim != dim or velocity.dim != dim:
        raise DimensionMismatch(
            f"{name} needs {dim}D space and velocity grids, "
            f"got {space.dim}D space / {velocity.dim}D velocity"
        )


def _field_from_states(rho, u, T, space, velocity):
    check_velocity_domain(u, T, velocity)
    return DistributionField(maxwellian(rho, u, T, velocity), space, velocity)


def sod_1d(space, velocity):
    """Centered Riemann problem: (1, 0, 1) left of x = 0.5, (0.125, 0, 0.25) right.

    Cells are classified by center; a center exactly on the interface takes
    the left state.
    """
    _require_dims(space, velocity, 1, "sod1d")
    x = space.centers(0)
    left = x <= 0.5
    rho = np.where(left, SOD_LEFT.rho, SOD_RIGHT.rho)
    T = np.where(left, SOD_LEFT.T, SOD_RIGHT.T)
    u = np.zeros((space.cells[0], 1))
    return _field_from_states(rho, u, T, space, velocity)


def shock_bubble_2d(space, velocity):
    """Mach-2 shock at x = -1 approaching a Gaussian density bubble at (0.5, 0).

    Right of the shock the gas is at rest with T = 1 and density
    1 + 1.5 exp(-16 |x - x0|^2); the bubble profile replaces the background
    density (its far field tends to the uniform right state).
    """
    _require_dims(space, velocity, 2, "shockbubble2d")
    X, Y = space.center_mesh()
    left = X <= -1.0
    bubble = 1.0 + BUBBLE_AMPLITUDE * np.exp(
        -BUBBLE_SHARPNESS * ((X - BUBBLE_CENTER[0]) ** 2 + (Y - BUBBLE_CENTER[1]) ** 2)
    )
    rho = np.where(left, SHOCK_LEFT.rho, bubble)
    T = np.where(left, SHOCK_LEFT.T, SHOCK_RIGHT_T)
    u = np.zeros(X.shape + (2,))
    u[..., 0] = np.where(left, SHOCK_LEFT.u[0], 0.0)
    return _field_from_states(rho, u, T, space, velocity)


def sine_wave_1d(space, velocity, amplitude=0.1):
    """Smooth periodic density perturbation rho = 1 + A sin(2 pi x / L), u = 0, T = 1."""
    _require_dims(space, velocity, 1, "sinewave1d")
    lo, hi = space.bounds[0]
    x = space.centers(0)
    rho = 1.0 + amplitude * np.sin(2.0 * math.pi * (x - lo) / (hi - lo))
    if np.any(rho <= 0):
        raise ValueError(f"amplitude {amplitude} makes the density non-positive")
    u = np.zeros((space.cells[0], 1))
    T = np.ones(space.cells[0])
    return _field_from_states(rho, u, T, space, velocity)


def uniform_equilibrium(state, space, velocity):
    """Spatially uniform Maxwellian field of one macroscopic state."""
    if len(state.u) != velocity.dim:
        raise DimensionMismatch(
            f"state velocity has {len(state.u)} components, grid has {velocity.dim}"
        )
    rho = np.full(space.shape, state.rho)
    T = np.full(space.shape, state.T)
    u = np.broadcast_to(np.asarray(state.u), space.shape + (velocity.dim,)).copy()
    return _field_from_states(rho, u, T, space, velocity)


@dataclass(frozen=True)
class ScenarioSpec:
    """Builder plus the grid defaults a scenario was designed for."""

    dim: int
    build: object
    space_bounds: tuple
    space_bc: tuple
    velocity_bounds: tuple
    velocity_nodes: tuple


SCENARIOS = {
    "sod1d": ScenarioSpec(
        dim=1, build=sod_1d,
        space_bounds=((0.0, 1.0),), space_bc=("outflow",),
        velocity_bounds=((-8.0, 8.0),), velocity_nodes=(80,),
    ),
    "shockbubble2d": ScenarioSpec(
        dim=2, build=shock_bubble_2d,
        space_bounds=((-2.0, 3.0), (-1.0, 1.0)), space_bc=("outflow", "periodic"),
        velocity_bounds=((-10.0, 10.0), (-10.0, 10.0)), velocity_nodes=(30, 30),
    ),
    "sinewave1d": ScenarioSpec(
        dim=1, build=sine_wave_1d,
        space_bounds=((0.0, 1.0),), space_bc=("periodic",),
        velocity_bounds=((-8.0, 8.0),), velocity_nodes=(80,),
    ),
}


def build_scenario(name, space, velocity):
    """Construct the initial field of a named scenario on the given grids."""
    try:
        spec = SCENARIOS[name]
    except KeyError:
        known = ", ".join(sorted(SCENARIOS))
        raise ValueError(f"unknown scenario {name!r}, known scenarios: {known}") from None
    return spec.build(space, velocity)


def default_grids(name, cells=None, velocity_nodes=None, velocity_bounds=None):
    """Grids for a named scenario, with optional resolution overrides."""
    spec = SCENARIOS[name]
    if cells is None:
        cells = {1: (100,), 2: (200, 25)}[spec.dim]
    space = SpatialGrid.uniform(spec.space_bounds, cells, spec.space_bc)
    vb = velocity_bounds if velocity_bounds is not None else spec.velocity_bounds
    vn = velocity_nodes if velocity_nodes is not None else spec.velocity_nodes
    velocity = VelocityGrid.uniform(vb, vn)
    return space, velocity
