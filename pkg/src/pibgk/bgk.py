"""Assembly of the semidiscrete BGK right-hand side.

The tendency of f is the sum of upwind transport and collisional relaxation
toward the local Maxwellian at rate 1/epsilon:

    df/dt = -v . grad_x f + (M(f) - f) / epsilon

Moments and the Maxwellian are recomputed at every evaluation; lagging them
would break the temporal order of the outer integrators.  Unphysical moments
abort with a diagnostic instead of being clamped, since clamping would mask
exactly the instabilities this solver is meant to expose.
"""

from __future__ import annotations

import numpy as np

from .phase_space import local_equilibrium
from .transport import DEFAULT_WENO_EPSILON, transport_values


def make_rhs(space, velocity, eps, order="weno3", maxwellian_mode="analytic",
             weno_eps=DEFAULT_WENO_EPSILON):
    """Build a tendency closure values -> d(values)/dt for the time steppers."""
    if not eps > 0:
        raise ValueError(f"relaxation parameter must be positive, got {eps}")
    inv_eps = 1.0 / eps

    def rhs_values(values):
        # Intermediate overflow shows up as non-finite output and is caught
        # by the steppers; warnings here would only add noise on the way down.
        with np.errstate(over="ignore", invalid="ignore"):
            tend = transport_values(values, space, velocity, order, weno_eps)
            M = local_equilibrium(values, velocity, mode=maxwellian_mode)
            tend += (M - values) * inv_eps
        return tend

    return rhs_values


def rhs(field, eps, order="weno3", maxwellian_mode="analytic",
        weno_eps=DEFAULT_WENO_EPSILON):
    """Full semidiscrete tendency of a DistributionField, as raw values."""
    fn = make_rhs(field.space, field.velocity, eps, order, maxwellian_mode, weno_eps)
    return fn(field.values)
