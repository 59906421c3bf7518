# FDpy: distance functions over finite point sets in R^3.
# License: GNU-GPL Style.
"""
Pairwise surface distances over a finite point set X.

* ``distance_dn``: the geodesic length between x and y on the degree-n
  surface that passes through both and is least-squares over X minus
  {x, y}.
* ``distance_hat``: ``distance_dn`` over X with x and y adjoined.
* ``projected_baseline_distance``: the geodesic between the vertical feet
  of x and y on one surface fitted to all of X.
* ``distance_matrix`` and ``metric_audit``: all pairs, and the check of
  the metric axioms on the result.
"""

from dataclasses import dataclass, field, replace
import logging
import multiprocessing

import numpy as np

from .errors import ConfigError, FDError, IncompleteMatrix, SingularSystem
from .geodesic import geodesic_distance
from .geometry_tools import Point3, euclidean_distance, same_xy, union, without
from .poly_surface import lift, scaling_for
from .surface_fit import (fit_constrained, fit_unconstrained, minimum_norm_unconstrained_fit,
                          perturbation_resolve, rank_report)

logger = logging.getLogger(__name__)

AUDIT_TOL = 1e-9

# Printed values of the ten-point worked example, keyed by (label, label).
PRINTED_PAIR_VALUES = {
    ('P10', 'P1'): 18.84342860,
    ('P10', 'P3'): 12.78704132,
    ('P1', 'P3'): 4.123340349,
}
PRINTED_MATCH_RTOL = 0.01
# -----------------------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class DistanceMatrix:
    """
    Symmetric table of pair distances.

    Attributes
    ----------
    labels: tuple of str

    degree: int
        Surface degree the entries were computed with (None for a matrix
        read from a file that does not record it).

    values: numpy array
        Read-only (n x n) array; a failed pair holds NaN.

    provenance: dict
        (i, j) with i < j -> ``{resolver, converged, perturbation_steps,
        geodesic_nodes}``, plus ``error`` for a failed pair.

    transform: str or None
        Name of a transformation applied after the pair computations
        (``'metric-closure'``); None for raw distances.
    """
    labels: tuple
    degree: int
    values: np.ndarray
    provenance: dict = field(default_factory=dict)
    transform: str = None

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 2 or vals.shape[0] != vals.shape[1]:
            raise ConfigError('a distance matrix must be square, got shape %s' % (vals.shape,))
        labels = tuple(str(l) for l in self.labels)
        if len(labels) != vals.shape[0]:
            raise ConfigError('%d labels for a %d x %d matrix'
                              % (len(labels), vals.shape[0], vals.shape[0]))
        vals.flags.writeable = False
        object.__setattr__(self, 'values', vals)
        object.__setattr__(self, 'labels', labels)

    def __len__(self):
        return self.values.shape[0]

    @property
    def complete(self):
        return bool(np.all(np.isfinite(self.values)))

    def failures(self):
        """Provenance records of the pairs that carry an error."""
        return {key: rec for key, rec in self.provenance.items() if 'error' in rec}

    def require_complete(self):
        if not self.complete:
            bad = np.argwhere(~np.isfinite(self.values))
            i, j = bad[0]
            raise IncompleteMatrix('matrix entry (%s, %s) is missing'
                                   % (self.labels[i], self.labels[j]),
                                   missing=int(bad.shape[0]))
# -----------------------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class MetricAuditReport:
    """
    Outcome of ``metric_audit``.

    ``triangle_violations`` lists ``{i, j, k, lhs, rhs, margin}`` for every
    triple with d(i, k) > d(i, j) + d(j, k) + tol * (1 + rhs).
    """
    identity_ok: bool
    symmetry_ok: bool
    nonneg_ok: bool
    triangle_violations: list
    labels: tuple = ()
    tolerance: float = AUDIT_TOL

    @property
    def is_metric(self):
        return (self.identity_ok and self.symmetry_ok and self.nonneg_ok
                and not self.triangle_violations)
# -----------------------------------------------------------------------------------------------------------


def _provenance(resolver, converged, steps, nodes):
    return {'resolver': resolver, 'converged': bool(converged),
            'perturbation_steps': int(steps), 'geodesic_nodes': int(nodes)}
# -----------------------------------------------------------------------------------------------------------


def _scaling(points, cfg):
    return scaling_for(points) if cfg.scaling else None
# -----------------------------------------------------------------------------------------------------------


def distance_dn(points, x, y, degree, cfg):
    """
    Distance between two members of a finite point set.

    Parameters
    ----------
    points: list of Point3
        The set X; ``x`` and ``y`` must belong to it.

    x, y: Point3

    degree: int
        Degree n of the fitted surface, >= 1.

    cfg: RunConfig

    Returns
    -------
    length: float

    provenance: dict
        ``{resolver, converged, perturbation_steps, geodesic_nodes}``;
        resolver is ``'identity'``, ``'direct'`` or ``'perturbation'``.

    Raises
    ------
    VerticalPair, NoConvergence, AllSingular
    """
    if x == y:
        return 0.0, _provenance('identity', True, 0, 1)
    if x not in points or y not in points:
        raise ConfigError('query points must belong to the point set')
    # fit and solve from the lexicographically smaller point; d(x, y) == d(y, x) bit for bit
    if tuple(y) < tuple(x):
        x, y = y, x
    scaling = _scaling(points, cfg)
    others = without(points, x, y)
    try:
        surf = fit_constrained(x, y, others, degree, scaling)
    except SingularSystem as err:
        logger.info('pair (%g, %g, %g)-(%g, %g, %g): %s; resolving by perturbation',
                    x.x, x.y, x.z, y.x, y.y, y.z, err.message)
        res = perturbation_resolve(x, y, others, degree, cfg.perturbation, cfg.geodesic, scaling)
        return res.length, _provenance(res.resolver, res.path.converged, res.steps,
                                       res.path.n_nodes)
    length, path = geodesic_distance(surf, x, y, cfg.geodesic)
    return length, _provenance('direct', path.converged, 0, path.n_nodes)
# -----------------------------------------------------------------------------------------------------------


def distance_hat(points, x, y, degree, cfg):
    """
    Distance between arbitrary points relative to X: ``distance_dn`` over
    X with x and y adjoined (points already in X are not duplicated).
    """
    return distance_dn(union(points, x, y), x, y, degree, cfg)[0]
# -----------------------------------------------------------------------------------------------------------


def _pair_task(task):
    points, i, j, degree, cfg = task
    try:
        return distance_dn(points, points[i], points[j], degree, cfg)
    except FDError as err:
        logger.warning('pair (%d, %d) failed: %s', i, j, err.message)
        prov = _provenance('failed', False, 0, 0)
        prov['error'] = err.to_dict()
        return np.nan, prov
# -----------------------------------------------------------------------------------------------------------


def distance_matrix(points, degree, cfg, labels=None, processes=None):
    """
    All pair distances of ``points``.

    Each unordered pair is computed once, with seeds derived from
    (cfg.master_seed, i, j), and mirrored; the diagonal is zero. A pair that
    raises is stored as NaN with an ``error`` record in its provenance and
    does not stop the other pairs. With ``cfg.parallel`` the pairs are
    spread over a process pool; results are identical to a sequential run.

    Returns
    -------
    DistanceMatrix
    """
    n = len(points)
    if labels is None:
        labels = ['P%d' % (k + 1) for k in range(n)]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    tasks = [(points, i, j, degree, cfg.for_pair(i, j)) for i, j in pairs]
    if cfg.parallel and len(tasks) > 1:
        with multiprocessing.Pool(processes) as pool:
            results = list(pool.imap(_pair_task, tasks, chunksize=1))
    else:
        results = [_pair_task(t) for t in tasks]

    values = np.zeros((n, n))
    provenance = {}
    for (i, j), (val, prov) in zip(pairs, results):
        values[i, j] = values[j, i] = val
        provenance[(i, j)] = prov
    logger.info('distance matrix: %d points, degree %d, %d failed pairs',
                n, degree, sum('error' in p for p in provenance.values()))
    return DistanceMatrix(labels, degree, values, provenance)
# -----------------------------------------------------------------------------------------------------------


def projected_baseline_distance(points, x, y, degree, cfg):
    """
    Geodesic length between the vertical feet of x and y on the surface
    fitted to all of ``points`` without interpolation constraints.

    A singular fit falls back to the minimum-norm least-squares surface.
    """
    if x == y:
        return 0.0
    scaling = _scaling(points, cfg)
    try:
        surf = fit_unconstrained(points, degree, scaling)
    except SingularSystem as err:
        logger.info('baseline fit singular (%s); using the minimum-norm surface', err.message)
        surf = minimum_norm_unconstrained_fit(points, degree, scaling)
    foot_x = lift(surf, x.x, x.y)
    foot_y = lift(surf, y.x, y.y)
    if same_xy(foot_x, foot_y):
        return 0.0
    return geodesic_distance(surf, foot_x, foot_y, cfg.geodesic)[0]
# -----------------------------------------------------------------------------------------------------------


def metric_audit(m, tol=AUDIT_TOL):
    """
    Check the metric axioms on a complete distance matrix.

    Parameters
    ----------
    m: DistanceMatrix

    tol: float
        Relative audit tolerance; a triangle counts as violated when
        d(i, k) > d(i, j) + d(j, k) + tol * (1 + d(i, j) + d(j, k)).

    Returns
    -------
    MetricAuditReport
        Triples are listed with i < k when the matrix is symmetric (the
        mirrored triple is the same inequality), otherwise for every
        ordered (i, k).

    Raises
    ------
    IncompleteMatrix
    """
    m.require_complete()
    d = m.values
    n = d.shape[0]
    identity_ok = bool(np.all(np.diag(d) == 0.0))
    symmetry_ok = bool(np.array_equal(d, d.T))
    nonneg_ok = bool(np.all(d >= 0.0))

    violations = []
    for j in range(n):
        rhs = d[:, j][:, None] + d[j, :][None, :]
        bad = d > rhs + tol*(1.0 + rhs)
        bad[j, :] = False
        bad[:, j] = False
        np.fill_diagonal(bad, False)
        if symmetry_ok:
            bad = np.triu(bad, 1)
        for i, k in np.argwhere(bad):
            violations.append({'i': int(i), 'j': int(j), 'k': int(k),
                               'lhs': float(d[i, k]), 'rhs': float(rhs[i, k]),
                               'margin': float(d[i, k] - rhs[i, k])})
    violations.sort(key=lambda v: (v['i'], v['k'], v['j']))
    if violations:
        logger.info('metric audit: %d triangle violations', len(violations))
    return MetricAuditReport(identity_ok, symmetry_ok, nonneg_ok, violations, m.labels, tol)
# -----------------------------------------------------------------------------------------------------------


def euclidean_matrix(points, labels=None):
    """Matrix of 3D Euclidean distances, used as a reference metric."""
    n = len(points)
    if labels is None:
        labels = ['P%d' % (k + 1) for k in range(n)]
    values = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            values[i, j] = values[j, i] = euclidean_distance(points[i], points[j])
    return DistanceMatrix(labels, None, values)
# -----------------------------------------------------------------------------------------------------------


def worked_example_study(points, labels, cfg, degrees=(1, 2, 3, 4)):
    """
    Distances of the worked-example pairs (P10, P1), (P10, P3), (P1, P3) per
    degree, compared with the printed values.

    Parameters
    ----------
    points: list of Point3
        The ten-point table.

    labels: list of str
        Must contain 'P1', 'P3' and 'P10'.

    cfg: RunConfig

    degrees: iterable of int

    Returns
    -------
    dict
        ``rows``: per degree the rank of the unconstrained system, the three
        distances with their provenance and relative errors and whether all
        three lie within 1% of the printed values.
        ``reproduction_degree``: the matching degree with the smallest
        worst error, or None.
        ``best_degree``: the degree with the smallest worst error.
        ``audit``: ``MetricAuditReport`` of the three-point matrix at
        ``best_degree``.
    """
    labels = [str(l) for l in labels]
    index = {l: k for k, l in enumerate(labels)}
    for name in ('P1', 'P3', 'P10'):
        if name not in index:
            raise ConfigError('the study needs a point labelled %s' % name)
    ranks = {r['degree']: r for r in rank_report(points, degrees, _scaling(points, cfg))}

    rows = []
    for deg in degrees:
        run = replace(cfg, degree=int(deg))
        entry = {'degree': int(deg), 'rank': ranks[deg]['rank'], 'terms': ranks[deg]['terms'],
                 'distances': {}, 'relative_errors': {}, 'provenance': {}}
        for (a, b), printed in PRINTED_PAIR_VALUES.items():
            i, j = index[a], index[b]
            key = '%s-%s' % (a, b)
            try:
                val, prov = distance_dn(points, points[i], points[j], deg, run.for_pair(i, j))
            except FDError as err:
                logger.warning('study degree %d pair %s failed: %s', deg, key, err.message)
                val, prov = np.nan, {'error': err.to_dict()}
            entry['distances'][key] = float(val)
            entry['relative_errors'][key] = float(abs(val - printed)/printed)
            entry['provenance'][key] = prov
        errs = list(entry['relative_errors'].values())
        entry['max_relative_error'] = float(np.max(errs))
        entry['matches'] = bool(all(e <= PRINTED_MATCH_RTOL for e in errs))
        rows.append(entry)

    finite = [r for r in rows if np.isfinite(r['max_relative_error'])]
    best = min(finite, key=lambda r: r['max_relative_error']) if finite else None
    matching = [r for r in finite if r['matches']]
    repro = min(matching, key=lambda r: r['max_relative_error'])['degree'] if matching else None

    audit = None
    if best is not None:
        d = best['distances']
        vals = np.array([[0.0, d['P1-P3'], d['P10-P1']],
                         [d['P1-P3'], 0.0, d['P10-P3']],
                         [d['P10-P1'], d['P10-P3'], 0.0]])
        audit = metric_audit(DistanceMatrix(('P1', 'P3', 'P10'), best['degree'], vals))
    return {'rows': rows, 'reproduction_degree': repro,
            'best_degree': best['degree'] if best is not None else None, 'audit': audit}
# -----------------------------------------------------------------------------------------------------------


def circle_configuration(n_circle=9, radius=1.0, height=100.0, n_inner=0, inner_radius=0.5):
    """
    Points on a circle in the plane z = 0, optionally a concentric inner
    ring, and a tall point above the center (last in the list). The first
    point is (radius, 0, 0).
    """
    pts = []
    for k in range(n_circle):
        t = 2*np.pi*k/n_circle
        pts.append(Point3(radius*np.cos(t), radius*np.sin(t), 0.0))
    for k in range(n_inner):
        t = 2*np.pi*(k + 0.5)/n_inner
        pts.append(Point3(inner_radius*np.cos(t), inner_radius*np.sin(t), 0.0))
    pts.append(Point3(0.0, 0.0, height))
    return pts
# -----------------------------------------------------------------------------------------------------------


def tall_point_comparison(points, cfg, degree=2):
    """
    Baseline (vertical feet) distance against ``distance_hat`` between the
    first point and the last (tall) point of ``points``.

    Returns
    -------
    dict
        ``{baseline, distance_hat, chord, ratio}`` with ratio = baseline /
        distance_hat.
    """
    p1, pn = points[0], points[-1]
    base = projected_baseline_distance(points, p1, pn, degree, cfg)
    dhat = distance_hat(points, p1, pn, degree, cfg)
    return {'degree': int(degree), 'baseline': float(base), 'distance_hat': float(dhat),
            'chord': euclidean_distance(p1, pn),
            'ratio': float(base/dhat) if dhat > 0 else np.nan}
