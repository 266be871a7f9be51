import numpy as np
import pytest

from orthojulia import measures, orthopoly

SQUARE = (-2 - 2j, 2 - 2j, 2 + 2j, -2 + 2j)


@pytest.fixture(scope="session")
def circle():
    m = measures.build_circle(0, 1, 512)
    return m, orthopoly.orthonormalize(m, 20)


@pytest.fixture(scope="session")
def arcsine():
    m = measures.build_interval_arcsine(-2, 2, 2048)
    return m, orthopoly.orthonormalize(m, 20)


@pytest.fixture(scope="session")
def square():
    m = measures.build_polygon_boundary(SQUARE, 400)
    return m, orthopoly.orthonormalize(m, 20)


@pytest.fixture(scope="session")
def disks():
    m = measures.build_symmetric_disks(2.0, 0.5, 256)
    return m, orthopoly.orthonormalize(m, 11)


@pytest.fixture(scope="session")
def brolin_basilica():
    m = measures.build_brolin([-1, 0, 1], 2**16, 7)
    return m, orthopoly.orthonormalize(m, 16)


def joukowski_green(z):
    """Green's function of the complement of [-2, 2]: log|w| with w + 1/w = z, |w| >= 1."""
    z = np.asarray(z, dtype=complex)
    w = (z + np.sqrt(z - 2) * np.sqrt(z + 2)) / 2
    return np.log(np.maximum(np.abs(w), 1 / np.abs(w)))
