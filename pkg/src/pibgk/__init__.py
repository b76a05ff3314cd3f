"""Discrete-velocity BGK solver with projective time integration.

The package solves the kinetic relaxation equation

    df/dt + v . grad_x f = (M(f) - f) / epsilon

on uniform phase-space grids with upwind WENO transport, and integrates it
in time either directly (forward Euler, RK4) or with projective methods
whose cost is independent of the stiffness epsilon: a few damping steps of
size ~epsilon followed by an extrapolated Runge-Kutta outer step of CFL
size.  A companion linear-analysis module computes spectra of the
linearized operator and vets projective parameter choices.
"""

__version__ = "0.1.0"

from .bgk import make_rhs, rhs
from .errors import (
    AdviceRejected,
    ConfigError,
    DimensionMismatch,
    EigensolverFailure,
    GridMismatch,
    GridTooSmall,
    InvalidTableau,
    NonPositiveDensity,
    NonPositiveInput,
    NonPositiveTemperature,
    ParseError,
    PibgkError,
    StepUnstable,
    UnsupportedDimension,
    ValidationError,
)
from .integrators import (
    ButcherTableau,
    ProjectiveParameters,
    StepperState,
    TimeScheme,
    forward_euler_step,
    integrate,
    named_tableau,
    pfe_step,
    prk_step,
    rk4_step,
    validate_tableau,
)
from .linear_analysis import (
    ParameterAdvice,
    WeightedBasis,
    advise_parameters,
    build_basis,
    collision_spectrum,
    gram_matrix,
    linearized_maxwellian,
    project,
    projective_amplification,
    transport_collision_spectrum,
    weighted_inner_product,
)
from .phase_space import (
    DistributionField,
    MomentField,
    SpatialGrid,
    VelocityGrid,
    compute_heat_flux,
    compute_moments,
    local_equilibrium,
    maxwellian,
)
from .scenarios import (
    SCENARIOS,
    MacroState,
    build_scenario,
    default_grids,
    shock_bubble_2d,
    sine_wave_1d,
    sod_1d,
    uniform_equilibrium,
)
from .transport import fill_ghost_cells, ghost_width, transport_rhs, weno_derivative

__all__ = [name for name in dir() if not name.startswith("_")]
