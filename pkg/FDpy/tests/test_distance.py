# FDpy: distance functions over finite point sets in R^3.
# License: GNU-GPL Style.

from dataclasses import replace

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal
import pytest

from FDpy.config import GeodesicConfig, RunConfig
from FDpy.distance import (PRINTED_PAIR_VALUES, DistanceMatrix, circle_configuration, distance_dn,
                           distance_hat, distance_matrix, euclidean_matrix, tall_point_comparison,
                           worked_example_study, metric_audit, projected_baseline_distance)
from FDpy.errors import ConfigError, IncompleteMatrix
from FDpy.geometry_tools import Point3, array_to_points, euclidean_distance
from FDpy.tests.conftest import printed_matrix, on_plane
# -----------------------------------------------------------------------------------------------------------


def hump_points():
    """
    Three points on the line y = 0 with a cloud sampled from
    z = 10 (1 - x^2) around them. The surface through the two outer points
    follows the hump; the surfaces through adjacent points stay low.
    """
    a, b, c = Point3(-1, 0, 0), Point3(0, 0, 0), Point3(1, 0, 0)
    cloud = [Point3(x, y, 10.0*(1 - x*x)) for x in (-2, -1, 0, 1, 2) for y in (-2, -1, 1, 2)]
    return [a, b, c] + cloud
# -----------------------------------------------------------------------------------------------------------


def test_identity(run_cfg):
    pts = [on_plane(x, y) for x, y in [(0, 0), (1, 0), (0, 1), (2, 2)]]
    length, prov = distance_dn(pts, pts[2], pts[2], 1, run_cfg)
    assert length == 0.0
    assert prov['resolver'] == 'identity'
    with pytest.raises(ConfigError):
        distance_dn(pts, pts[0], Point3(9, 9, 9), 1, run_cfg)
# -----------------------------------------------------------------------------------------------------------


def test_coplanar_sets_are_euclidean(run_cfg):
    pts = [on_plane(x, y) for x, y in [(0, 0), (1, 0), (0, 1), (2, 3), (-1, 4), (3, -2)]]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            length, prov = distance_dn(pts, pts[i], pts[j], 1, run_cfg)
            assert prov['resolver'] == 'direct'
            assert_allclose(length, euclidean_distance(pts[i], pts[j]), rtol=1e-8)
# -----------------------------------------------------------------------------------------------------------


def test_distance_hat_reduces_to_dn(run_cfg):
    pts = [Point3(0, 0, 0), Point3(2, 0, 1), Point3(0, 2, -1), Point3(1, 3, 2), Point3(3, 1, 0)]
    assert distance_hat(pts, pts[0], pts[3], 2, run_cfg) == \
        distance_dn(pts, pts[0], pts[3], 2, run_cfg)[0]
# -----------------------------------------------------------------------------------------------------------


def test_distance_hat_outside_points(run_cfg):
    """
    With X empty the degree-1 surface through x and y is singular and is
    resolved by perturbation; the distance is at least the chord.
    """
    x, y = Point3(0, 0, 0), Point3(3, 4, 2)
    d = distance_hat([], x, y, 1, run_cfg)
    assert d >= euclidean_distance(x, y) - 1e-9
# -----------------------------------------------------------------------------------------------------------


def test_symmetry(run_cfg):
    pts = [Point3(0, 0, 0), Point3(2, 0, 1), Point3(0, 2, -1), Point3(1, 3, 2), Point3(3, 1, 0),
           Point3(-1, 1, 1)]
    cfg = replace(run_cfg, degree=2)
    for i, j in [(1, 4), (0, 3), (2, 5)]:
        d12, p12 = distance_dn(pts, pts[i], pts[j], 2, cfg)
        d21, p21 = distance_dn(pts, pts[j], pts[i], 2, cfg)
        assert d12 == d21
        assert p12 == p21 and p12['converged']
    # singular at degree 3: both orders go through the same perturbation schedule
    d12, p12 = distance_dn(pts[:4], pts[0], pts[2], 3, cfg)
    d21, p21 = distance_dn(pts[:4], pts[2], pts[0], 3, cfg)
    assert p12['resolver'] == 'perturbation'
    assert d12 == d21 and p12 == p21
# -----------------------------------------------------------------------------------------------------------


def test_tall_point_degree1(run_cfg):
    """
    Nine points on the unit circle and one 100 above its center. The
    plane fitted to all ten points is z = 10, so the feet are 1 apart;
    the plane through the pair is z = 100 (1 - x) and its geodesic is the
    chord.
    """
    pts = circle_configuration()
    res = tall_point_comparison(pts, run_cfg, degree=1)
    chord = np.sqrt(1 + 100.0**2)
    assert_allclose(res['chord'], chord)
    assert_allclose(res['baseline'], 1.0, rtol=1e-8)
    assert res['distance_hat'] >= chord - 1e-9
    assert_allclose(res['distance_hat'], chord, rtol=1e-8)
    assert res['ratio'] < 0.02
# -----------------------------------------------------------------------------------------------------------


def test_tall_point_with_inner_ring(run_cfg):
    """
    Eight points on the unit circle, eight at radius 1/2 and the tall
    point. The degree-2 fit to all points is z = alpha + beta r^2 with
    17 alpha + 10 beta = 100 and 10 alpha + 8.5 beta = 0, and the baseline
    is the meridian length of that paraboloid over 0 <= r <= 1.
    """
    pts = circle_configuration(n_circle=8, n_inner=8)
    res = tall_point_comparison(pts, run_cfg, degree=2)
    beta = -100.0/4.45
    k = 2*abs(beta)
    meridian = np.sqrt(1 + k*k)/2 + np.arcsinh(k)/(2*k)
    assert_allclose(res['baseline'], meridian, rtol=1e-4)
    assert res['distance_hat'] >= res['chord'] - 1e-9
    assert res['ratio'] < 0.25
# -----------------------------------------------------------------------------------------------------------


def test_projected_baseline_on_plane(run_cfg):
    pts = [on_plane(x, y) for x, y in [(0, 0), (1, 0), (0, 1), (2, 3), (-1, 4)]]
    d = projected_baseline_distance(pts, pts[0], pts[3], 1, run_cfg)
    assert_allclose(d, euclidean_distance(pts[0], pts[3]), rtol=1e-8)
    assert projected_baseline_distance(pts, pts[1], pts[1], 1, run_cfg) == 0.0
# -----------------------------------------------------------------------------------------------------------


def test_hump_is_not_a_metric(geo_cfg):
    """
    The outer pair is measured over the hump (about 20) while each
    adjacent pair stays near the line (about 3 each).
    """
    pts = hump_points()
    cfg = RunConfig(degree=2, geodesic=geo_cfg)
    a, b, c = pts[:3]
    d_ab = distance_dn(pts, a, b, 2, cfg)[0]
    d_bc = distance_dn(pts, b, c, 2, cfg)[0]
    d_ac = distance_dn(pts, a, c, 2, cfg)[0]
    assert d_ac > d_ab + d_bc + 1.0

    m = DistanceMatrix(('a', 'b', 'c'), 2, [[0, d_ab, d_ac], [d_ab, 0, d_bc], [d_ac, d_bc, 0]])
    report = metric_audit(m)
    assert report.identity_ok and report.symmetry_ok and report.nonneg_ok
    assert not report.is_metric
    assert len(report.triangle_violations) == 1
    v = report.triangle_violations[0]
    assert (v['i'], v['j'], v['k']) == (0, 1, 2)
    assert_allclose(v['margin'], d_ac - d_ab - d_bc)
# -----------------------------------------------------------------------------------------------------------


def test_audit_printed_values():
    report = metric_audit(printed_matrix())
    assert len(report.triangle_violations) == 1
    v = report.triangle_violations[0]
    assert [report.labels[v[k]] for k in ('i', 'j', 'k')] == ['P1', 'P3', 'P10']
    assert_allclose(v['margin'], 1.933046931, atol=1e-8)
    assert v['lhs'] == PRINTED_PAIR_VALUES[('P10', 'P1')]
# -----------------------------------------------------------------------------------------------------------


def test_audit_euclidean(rng):
    pts = array_to_points(rng.uniform(-10, 10, size=(12, 3)))
    report = metric_audit(euclidean_matrix(pts))
    assert report.is_metric
    assert report.triangle_violations == []
# -----------------------------------------------------------------------------------------------------------


def test_audit_small_and_broken_matrices():
    assert metric_audit(DistanceMatrix(('a', 'b'), 1, [[0, 2], [2, 0]])).is_metric

    report = metric_audit(DistanceMatrix(('a', 'b', 'c'), 1, [[0, 1, 2], [1, 0.5, 1], [2.5, 1, 0]]))
    assert not report.identity_ok
    assert not report.symmetry_ok
    assert report.nonneg_ok

    report = metric_audit(DistanceMatrix(('a', 'b'), 1, [[0, -1], [-1, 0]]))
    assert not report.nonneg_ok

    with pytest.raises(IncompleteMatrix):
        metric_audit(DistanceMatrix(('a', 'b'), 1, [[0, np.nan], [np.nan, 0]]))
    with pytest.raises(ConfigError):
        DistanceMatrix(('a',), 1, [[0, 1], [1, 0]])
# -----------------------------------------------------------------------------------------------------------


def test_audit_tolerance():
    """A violation within the relative tolerance is not reported."""
    m = DistanceMatrix(('a', 'b', 'c'), 1, [[0, 1, 2 + 1e-12], [1, 0, 1], [2 + 1e-12, 1, 0]])
    assert metric_audit(m).is_metric
    m = DistanceMatrix(('a', 'b', 'c'), 1, [[0, 1, 2 + 1e-6], [1, 0, 1], [2 + 1e-6, 1, 0]])
    assert not metric_audit(m).is_metric
# -----------------------------------------------------------------------------------------------------------


def test_matrix_invariants(run_cfg):
    pts = [Point3(0, 0, 0), Point3(2, 0, 1), Point3(0, 2, -1), Point3(1, 3, 2), Point3(3, 1, 0)]
    m = distance_matrix(pts, 1, run_cfg)
    assert m.labels == ('P1', 'P2', 'P3', 'P4', 'P5')
    assert m.complete and not m.failures()
    assert_array_equal(np.diag(m.values), 0.0)
    assert_array_equal(m.values, m.values.T)
    assert np.all(m.values >= 0)
    assert set(m.provenance) == {(i, j) for i in range(5) for j in range(i + 1, 5)}
    for i in range(5):
        for j in range(i + 1, 5):
            assert m.values[i, j] >= euclidean_distance(pts[i], pts[j]) - 1e-9
    with pytest.raises(ValueError):
        m.values[0, 1] = 1.0
# -----------------------------------------------------------------------------------------------------------


def test_matrix_records_failures(run_cfg):
    pts = [Point3(0, 0, 0), Point3(0, 0, 1), Point3(2, 0, 1), Point3(0, 2, -1), Point3(1, 3, 2)]
    m = distance_matrix(pts, 1, run_cfg, labels=['a', 'b', 'c', 'd', 'e'])
    assert np.isnan(m.values[0, 1]) and np.isnan(m.values[1, 0])
    assert not m.complete
    failed = m.failures()
    assert list(failed) == [(0, 1)]
    assert failed[(0, 1)]['error']['error'] == 'vertical-pair'
    assert np.isfinite(m.values[0, 2])
    with pytest.raises(IncompleteMatrix):
        m.require_complete()
# -----------------------------------------------------------------------------------------------------------


def test_parallel_matches_sequential(run_cfg):
    pts = [Point3(0, 0, 0), Point3(2, 0, 1), Point3(0, 2, -1), Point3(1, 3, 2), Point3(3, 1, 0),
           Point3(-2, 1, 1)]
    cfg = replace(run_cfg, degree=2)
    seq = distance_matrix(pts, 2, cfg)
    par = distance_matrix(pts, 2, replace(cfg, parallel=True), processes=2)
    assert_array_equal(seq.values, par.values)
    assert seq.provenance == par.provenance
# -----------------------------------------------------------------------------------------------------------


@pytest.mark.slow
def test_matrix_axioms_random_sets(rng):
    """
    100 random sets at degrees 1-3: every pair resolves and converges, the
    matrix is exactly symmetric with a zero diagonal, and no distance is
    below the chord.
    """
    geo = GeodesicConfig(initial_nodes=9, max_nodes=33, restarts=0)
    for _ in range(100):
        pts = array_to_points(rng.uniform(-3, 3, size=(int(rng.integers(2, 7)), 3)))
        n = len(pts)
        for degree in (1, 2, 3):
            m = distance_matrix(pts, degree, RunConfig(degree=degree, geodesic=geo))
            assert m.complete, m.failures()
            assert all(p['converged'] for p in m.provenance.values())
            assert_array_equal(np.diag(m.values), 0.0)
            assert_array_equal(m.values, m.values.T)
            for i in range(n):
                for j in range(i + 1, n):
                    assert m.values[i, j] >= euclidean_distance(pts[i], pts[j]) - 1e-9
# -----------------------------------------------------------------------------------------------------------


def test_worked_example_study_degree1(ten_points, run_cfg):
    points, labels = ten_points
    study = worked_example_study(points, labels, run_cfg, degrees=(1,))
    row = study['rows'][0]
    assert row['degree'] == 1 and row['terms'] == 3 and row['rank'] == 3
    assert set(row['distances']) == {'P10-P1', 'P10-P3', 'P1-P3'}
    p1, p3 = points[labels.index('P1')], points[labels.index('P3')]
    assert row['distances']['P1-P3'] >= euclidean_distance(p1, p3) - 1e-9
    assert study['best_degree'] == 1
    assert study['audit'].labels == ('P1', 'P3', 'P10')
    with pytest.raises(ConfigError):
        worked_example_study(points, ['Q%d' % k for k in range(len(points))], run_cfg, degrees=(1,))
# -----------------------------------------------------------------------------------------------------------


@pytest.mark.slow
def test_worked_example_study_all_degrees(ten_points):
    """
    Degrees 1-4 on the ten points. The degree-1 surfaces are planes, so
    that row is the three chords. No degree can reach the printed P1-P3
    value, which is below its chord; the closest degree is therefore 1 and
    its three distances satisfy the triangle inequality.
    """
    points, labels = ten_points
    cfg = RunConfig(geodesic=GeodesicConfig(initial_nodes=17, max_nodes=129, restarts=1))
    study = worked_example_study(points, labels, cfg)
    rows = study['rows']
    assert [r['degree'] for r in rows] == [1, 2, 3, 4]
    chords = {'P10-P1': np.sqrt(90), 'P10-P3': np.sqrt(267), 'P1-P3': np.sqrt(53)}
    assert_allclose([rows[0]['distances'][k] for k in chords], list(chords.values()), rtol=1e-8)
    for row in rows:
        for key, chord in chords.items():
            assert row['distances'][key] >= chord - 1e-9
            assert row['provenance'][key]['converged']
        assert row['relative_errors']['P1-P3'] >= 0.76
        assert not row['matches']
    assert rows[3]['terms'] == 15 and rows[3]['rank'] <= 10
    assert study['reproduction_degree'] is None
    assert study['best_degree'] == 1
    assert study['audit'].is_metric
# -----------------------------------------------------------------------------------------------------------
