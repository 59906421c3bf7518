# FDpy: distance functions over finite point sets in R^3.
# License: GNU-GPL Style.

import itertools

import numpy as np
from numpy.testing import assert_allclose
import pytest

from FDpy.distance import DistanceMatrix, euclidean_matrix, metric_audit
from FDpy.errors import ConfigError, IncompleteMatrix
from FDpy.geometry_tools import array_to_points
from FDpy.routing import (Tour, brute_force_tour, metric_closure, nn_tour, plan_route,
                          tour_length, two_opt)
from FDpy.tests.conftest import printed_matrix
# -----------------------------------------------------------------------------------------------------------


def matrix(vals):
    vals = np.asarray(vals, dtype=float)
    return DistanceMatrix(['P%d' % (k + 1) for k in range(len(vals))], None, vals)
# -----------------------------------------------------------------------------------------------------------


def random_symmetric(rng, n):
    a = rng.uniform(1, 10, size=(n, n))
    a = np.triu(a, 1)
    return matrix(a + a.T)
# -----------------------------------------------------------------------------------------------------------


def test_triangle_tour():
    m = matrix([[0, 1, 2], [1, 0, 3], [2, 3, 0]])
    t = nn_tour(m)
    assert t.order == (0, 1, 2)
    assert t.length == 6.0
# -----------------------------------------------------------------------------------------------------------


def test_collinear_tour():
    """
    Points at x = 0, 1, 2: the tour 0 -> 1 -> 2 -> 0 has length 1 + 1 + 2.
    """
    m = matrix([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    t = nn_tour(m)
    assert t.order == (0, 1, 2)
    assert t.length == 4.0
    assert two_opt(m, t).length == 4.0
# -----------------------------------------------------------------------------------------------------------


def test_two_points():
    m = matrix([[0, 2.5], [2.5, 0]])
    assert nn_tour(m).length == 5.0
    assert nn_tour(m, start=1).order == (1, 0)
    assert brute_force_tour(m).length == 5.0
# -----------------------------------------------------------------------------------------------------------


def test_nn_ties_go_to_lowest_index():
    m = matrix([[0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]])
    assert nn_tour(m).order == (0, 1, 2, 3)
    assert nn_tour(m, start=2).order == (2, 0, 1, 3)
    with pytest.raises(ConfigError):
        nn_tour(m, start=4)
# -----------------------------------------------------------------------------------------------------------


def test_two_opt_keeps_optimal_tour():
    m = matrix([[0, 1, 2], [1, 0, 3], [2, 3, 0]])
    t = nn_tour(m)
    assert two_opt(m, t) == t
# -----------------------------------------------------------------------------------------------------------


def test_two_opt_uncrosses():
    """Unit square visited along a diagonal."""
    r = np.sqrt(2)
    m = matrix([[0, 1, r, 1], [1, 0, 1, r], [r, 1, 0, 1], [1, r, 1, 0]])
    crossed = Tour((0, 2, 1, 3), tour_length(m, (0, 2, 1, 3)))
    assert_allclose(crossed.length, 2 + 2*r)
    better = two_opt(m, crossed)
    assert_allclose(better.length, 4.0)
# -----------------------------------------------------------------------------------------------------------


@pytest.mark.parametrize('n', [3, 4, 5, 6, 7])
def test_two_opt_quality(n, rng):
    """
    Over seeded n-point coplanar instances, whose matrices are Euclidean,
    2-opt never loses to its nearest neighbour start and mostly reaches
    the optimum.
    """
    hits = 0
    trials = 100
    for _ in range(trials):
        xy = rng.uniform(-5, 5, size=(n, 2))
        z = xy.dot(rng.uniform(-2, 2, size=2)) + rng.uniform(-1, 1)
        m = euclidean_matrix(array_to_points(np.column_stack((xy, z))))
        start = nn_tour(m)
        best = two_opt(m, start)
        assert best.length <= start.length + 1e-12
        assert_allclose(best.length, tour_length(m, best.order))
        hits += best.length <= brute_force_tour(m).length*(1 + 1e-9)
    assert hits >= 0.8*trials
# -----------------------------------------------------------------------------------------------------------


@pytest.mark.parametrize('n', [3, 4, 5, 6, 7])
def test_brute_force_is_optimal(n, rng):
    m = random_symmetric(rng, n)
    opt = brute_force_tour(m)
    assert opt.order[0] == 0
    for perm in itertools.permutations(range(1, n)):
        assert opt.length <= tour_length(m, (0,) + perm) + 1e-12
    assert opt.length <= two_opt(m, nn_tour(m)).length + 1e-12
# -----------------------------------------------------------------------------------------------------------


def test_brute_force_limit(rng):
    with pytest.raises(ConfigError):
        brute_force_tour(random_symmetric(rng, 10))
# -----------------------------------------------------------------------------------------------------------


def test_metric_closure():
    m = printed_matrix()
    closed = metric_closure(m)
    assert closed.transform == 'metric-closure'
    assert m.transform is None
    assert_allclose(closed.values[0, 2], 4.123340349 + 12.78704132, rtol=1e-12)
    assert closed.values[0, 1] == m.values[0, 1]
    assert metric_audit(closed).is_metric
# -----------------------------------------------------------------------------------------------------------


def test_plan_route():
    m = printed_matrix()
    route = plan_route(m)
    assert route['labels'] == ('P1', 'P3', 'P10')
    assert not route['closure']
    assert route['two_opt'].length <= route['nn'].length
    route = plan_route(m, closure=True)
    assert route['closure']
    assert_allclose(route['nn'].length, 2*(4.123340349 + 12.78704132))
# -----------------------------------------------------------------------------------------------------------


def test_invalid_inputs():
    with pytest.raises(ConfigError):
        Tour((0, 0, 1), 1.0)
    with pytest.raises(IncompleteMatrix):
        nn_tour(matrix([[0, np.nan], [np.nan, 0]]))
    with pytest.raises(ConfigError):
        nn_tour(matrix([[0.0]]))
