# FDpy: distance functions over finite point sets in R^3.
# License: GNU-GPL Style.

import os

import numpy as np
import pytest

from FDpy.config import GeodesicConfig, PerturbationSchedule, RunConfig
from FDpy.distance import PRINTED_PAIR_VALUES, DistanceMatrix
from FDpy.geometry_tools import Point3
from FDpy.io_tools import load_points_csv
from FDpy.poly_surface import PolynomialSurface, monomial_basis

file_dir = os.path.dirname(os.path.realpath(__file__))
TEN_POINTS_PATH = os.path.join(file_dir, '..', 'data', 'ten_points.csv')
# -----------------------------------------------------------------------------------------------------------


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: oracle tests that take several seconds')
# -----------------------------------------------------------------------------------------------------------


def surface(degree, coeffs, scaling=None):
    """Surface of the given degree from a coefficient list in basis order."""
    return PolynomialSurface(monomial_basis(degree), coeffs, scaling)
# -----------------------------------------------------------------------------------------------------------


def plane(a0, ay, ax):
    """z = a0 + ay*y + ax*x."""
    return surface(1, [a0, ay, ax])
# -----------------------------------------------------------------------------------------------------------


def on_plane(x, y, a0=1.0, ay=-1.0, ax=2.0):
    return Point3(x, y, a0 + ay*y + ax*x)
# -----------------------------------------------------------------------------------------------------------


def printed_matrix():
    """Three-point matrix of the printed ten-point example values."""
    d = PRINTED_PAIR_VALUES
    vals = [[0.0, d[('P1', 'P3')], d[('P10', 'P1')]],
            [d[('P1', 'P3')], 0.0, d[('P10', 'P3')]],
            [d[('P10', 'P1')], d[('P10', 'P3')], 0.0]]
    return DistanceMatrix(('P1', 'P3', 'P10'), 4, vals)
# -----------------------------------------------------------------------------------------------------------


@pytest.fixture
def geo_cfg():
    """Geodesic settings small enough for unit tests."""
    return GeodesicConfig(initial_nodes=33, max_nodes=257, restarts=1)
# -----------------------------------------------------------------------------------------------------------


@pytest.fixture
def run_cfg(geo_cfg):
    return RunConfig(degree=1, geodesic=geo_cfg, perturbation=PerturbationSchedule())
# -----------------------------------------------------------------------------------------------------------


@pytest.fixture
def ten_points():
    return load_points_csv(TEN_POINTS_PATH)
# -----------------------------------------------------------------------------------------------------------


@pytest.fixture
def rng():
    return np.random.default_rng(20150401)
