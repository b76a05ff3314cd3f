import numpy as np
import pytest

from pibgk import SpatialGrid, VelocityGrid


@pytest.fixture
def vgrid_1d():
    """The standard 1D velocity grid: [-8, 8] with 80 midpoint nodes."""
    return VelocityGrid.uniform((-8.0, 8.0), 80)


@pytest.fixture
def vgrid_2d():
    """The standard 2D velocity grid: [-10, 10]^2 with 30 nodes per axis."""
    return VelocityGrid.uniform((-10.0, 10.0), (30, 30))


@pytest.fixture
def sod_space():
    return SpatialGrid.uniform((0.0, 1.0), 100, "outflow")


def rng(seed=0):
    return np.random.RandomState(seed)
