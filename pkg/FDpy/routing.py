# FDpy: distance functions over finite point sets in R^3.
# License: GNU-GPL Style.
"""
Single-vehicle tour heuristics over a (possibly non-metric) symmetric
distance matrix: nearest neighbour construction, 2-opt improvement and an
exhaustive oracle for small instances.
"""

from dataclasses import dataclass, replace
import itertools
import logging

import numpy as np
from scipy.sparse import csgraph

from .errors import ConfigError

logger = logging.getLogger(__name__)

BRUTE_FORCE_MAX = 9
# -----------------------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class Tour:
    """
    A closed tour.

    Attributes
    ----------
    order: tuple of int
        Permutation of the point indices; the tour returns to order[0].

    length: float
        Sum of the matrix entries along the cycle.
    """
    order: tuple
    length: float

    def __post_init__(self):
        object.__setattr__(self, 'order', tuple(int(k) for k in self.order))
        if sorted(self.order) != list(range(len(self.order))):
            raise ConfigError('tour order must be a permutation of 0..%d' % (len(self.order) - 1))
# -----------------------------------------------------------------------------------------------------------


def tour_length(m, order):
    """Sum of d(order[k], order[k+1]) around the cycle."""
    d = m.values
    order = list(order)
    return float(sum(d[a, b] for a, b in zip(order, order[1:] + order[:1])))
# -----------------------------------------------------------------------------------------------------------


def _check(m):
    m.require_complete()
    if len(m) < 2:
        raise ConfigError('a tour needs at least 2 points')
# -----------------------------------------------------------------------------------------------------------


def nn_tour(m, start=0):
    """
    Nearest neighbour tour from ``start``; ties go to the lowest index.

    Raises
    ------
    IncompleteMatrix
        The matrix holds failed pairs.
    """
    _check(m)
    n = len(m)
    if not 0 <= start < n:
        raise ConfigError('start index %d out of range' % start)
    d = m.values
    order = [start]
    left = [k for k in range(n) if k != start]
    while left:
        cur = order[-1]
        nxt = left[0]
        for k in left[1:]:
            if d[cur, k] < d[cur, nxt]:
                nxt = k
        order.append(nxt)
        left.remove(nxt)
    return Tour(order, tour_length(m, order))
# -----------------------------------------------------------------------------------------------------------


def two_opt(m, t):
    """
    Apply improving 2-opt exchanges (segment reversals) until none is left.

    Only moves that shorten the tour by more than round-off are taken, so
    the length strictly decreases with every move and the loop terminates.
    The matrix must be symmetric; the triangle inequality is not needed.
    """
    _check(m)
    d = m.values
    order = list(t.order)
    n = len(order)
    tol = 1e-12*max(1.0, t.length)
    improved = True
    moves = 0
    while improved:
        improved = False
        for i in range(1, n - 1):
            for k in range(i + 1, n):
                a, b = order[i - 1], order[i]
                c, e = order[k], order[(k + 1) % n]
                delta = d[a, c] + d[b, e] - d[a, b] - d[c, e]
                if delta < -tol:
                    order[i:k + 1] = order[i:k + 1][::-1]
                    improved = True
                    moves += 1
    length = tour_length(m, order)
    if length > t.length:
        return t
    logger.debug('two_opt: %d moves, %.12g -> %.12g', moves, t.length, length)
    return Tour(order, length)
# -----------------------------------------------------------------------------------------------------------


def brute_force_tour(m):
    """
    Shortest tour by enumeration of all cycles through index 0; the first
    optimum in lexicographic order is returned. Limited to small instances.
    """
    _check(m)
    n = len(m)
    if n > BRUTE_FORCE_MAX:
        raise ConfigError('brute force limited to %d points' % BRUTE_FORCE_MAX)
    best = None
    for rest in itertools.permutations(range(1, n)):
        order = (0,) + rest
        length = tour_length(m, order)
        if best is None or length < best.length:
            best = Tour(order, length)
    return best
# -----------------------------------------------------------------------------------------------------------


def metric_closure(m):
    """
    Shortest-path closure of the matrix: every entry replaced by the
    shortest chain of entries joining the pair. The result satisfies the
    triangle inequality and is labelled ``transform='metric-closure'``;
    it is no longer the surface distance.
    """
    m.require_complete()
    graph = csgraph.csgraph_from_dense(np.array(m.values), null_value=np.inf)
    closed = csgraph.floyd_warshall(graph, directed=False)
    closed = np.minimum(closed, closed.T)
    np.fill_diagonal(closed, 0.0)
    return replace(m, values=closed, transform='metric-closure')
# -----------------------------------------------------------------------------------------------------------


def plan_route(m, start=0, closure=False):
    """
    Nearest neighbour tour improved by 2-opt.

    Returns
    -------
    dict
        ``{nn, two_opt, closure}`` with the two tours.
    """
    if closure:
        m = metric_closure(m)
    first = nn_tour(m, start)
    best = two_opt(m, first)
    return {'nn': first, 'two_opt': best, 'closure': bool(closure), 'labels': m.labels}
