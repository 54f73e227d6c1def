import numpy as np
import pytest

from moyal import PhaseGrid


@pytest.fixture(scope="session")
def grid64():
    return PhaseGrid(8.0, 64)


@pytest.fixture(scope="session")
def grid128():
    return PhaseGrid(8.0, 128)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


def gaussian(grid, center=(0.0, 0.0), width=1.0, tilt=0.0):
    """Sampled ``exp(-|u - c|^2 / (2 w^2) + i tilt q)``."""
    q0, p0 = center
    return grid.sample(lambda q, p: np.exp(-((q - q0) ** 2 + (p - p0) ** 2) / (2 * width**2) + 1j * tilt * q))
