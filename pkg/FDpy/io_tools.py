# FDpy: distance functions over finite point sets in R^3.
# License: GNU-GPL Style.
"""
Reading point sets and distance matrices, writing matrices, audit reports
and the other command line artifacts.

CSV numbers are written with 17 significant digits and a '.' separator;
JSON floats use ``repr`` and read back bit for bit. Non-finite matrix
entries (failed pairs) are written as ``nan`` in CSV and ``null`` in JSON.
"""

import csv
import json
import logging
import math

import numpy as np

from .distance import DistanceMatrix
from .errors import ConfigError, EmptyInput, ParseError
from .geodesic import path_to_dict
from .geometry_tools import Point3
from .tools import Col, check_display, fmt17

logger = logging.getLogger(__name__)
# -----------------------------------------------------------------------------------------------------------


def _is_header(cells):
    return [c.strip().lower() for c in cells[-3:]] == ['x', 'y', 'z']
# -----------------------------------------------------------------------------------------------------------


def _parse_float(cell, row):
    try:
        val = float(cell)
    except ValueError:
        raise ParseError('row %d: %r is not a number' % (row, cell.strip()), row=row)
    if not math.isfinite(val):
        raise ParseError('row %d: non-finite coordinate %r' % (row, cell.strip()), row=row)
    return val
# -----------------------------------------------------------------------------------------------------------


def load_points_csv(path):
    """
    Read points from a CSV file.

    Rows are ``x,y,z`` or ``label,x,y,z``; an optional header row ends in
    ``x,y,z``; blank lines are skipped.

    Parameters
    ----------
    path: str

    Returns
    -------
    points: list of Point3
        In file order.

    labels: list of str
        From the label column, else ``P1, P2, ...`` by row order.

    Raises
    ------
    ParseError
        With the 1-based file row of the first bad row.

    EmptyInput
        The file holds no data row.
    """
    points, labels = [], []
    first = True
    with open(path, newline='') as fh:
        for row, cells in enumerate(csv.reader(fh), start=1):
            if not cells or all(not c.strip() for c in cells):
                continue
            if first:
                first = False
                if _is_header(cells):
                    continue
            if len(cells) == 3:
                label = None
            elif len(cells) == 4:
                label = cells[0].strip()
                cells = cells[1:]
            else:
                raise ParseError('row %d: expected 3 or 4 fields, got %d' % (row, len(cells)),
                                 row=row)
            x, y, z = (_parse_float(c, row) for c in cells)
            points.append(Point3(x, y, z))
            labels.append(label if label else 'P%d' % len(points))
    if not points:
        raise EmptyInput('%s holds no points' % path)
    logger.debug('read %d points from %s', len(points), path)
    return points, labels
# -----------------------------------------------------------------------------------------------------------


def _finite_or_none(val):
    val = float(val)
    return val if math.isfinite(val) else None
# -----------------------------------------------------------------------------------------------------------


def matrix_to_dict(m):
    """JSON form ``{labels, degree, values, provenance, transform}``."""
    prov = []
    for (i, j), rec in sorted(m.provenance.items()):
        entry = {'i': int(i), 'j': int(j)}
        entry.update(rec)
        prov.append(entry)
    return {
        'labels': list(m.labels),
        'degree': m.degree,
        'values': [[_finite_or_none(v) for v in row] for row in m.values],
        'provenance': prov,
        'transform': m.transform,
    }
# -----------------------------------------------------------------------------------------------------------


def matrix_from_dict(data):
    try:
        values = np.array([[np.nan if v is None else float(v) for v in row]
                           for row in data['values']], dtype=float)
        labels = data['labels']
    except (KeyError, TypeError, ValueError) as err:
        raise ParseError('malformed matrix object: %s' % err)
    prov = {}
    for rec in data.get('provenance', []):
        rec = dict(rec)
        key = (int(rec.pop('i')), int(rec.pop('j')))
        prov[key] = rec
    try:
        return DistanceMatrix(labels, data.get('degree'), values, prov, data.get('transform'))
    except ConfigError as err:
        raise ParseError(err.message)
# -----------------------------------------------------------------------------------------------------------


def write_matrix_json(m, stream):
    dump_json(matrix_to_dict(m), stream)
# -----------------------------------------------------------------------------------------------------------


def read_matrix_json(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except ValueError as err:
            raise ParseError('%s: invalid JSON (%s)' % (path, err))
    return matrix_from_dict(data)
# -----------------------------------------------------------------------------------------------------------


def write_matrix_csv(m, stream):
    """Header row ``,label_1,...,label_n`` then one labelled row per point."""
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow([''] + list(m.labels))
    for label, row in zip(m.labels, m.values):
        writer.writerow([label] + [fmt17(v) for v in row])
# -----------------------------------------------------------------------------------------------------------


def read_matrix_csv(path):
    rows = []
    with open(path, newline='') as fh:
        for cells in csv.reader(fh):
            if cells and any(c.strip() for c in cells):
                rows.append(cells)
    if not rows:
        raise EmptyInput('%s holds no matrix' % path)
    labels = [c.strip() for c in rows[0][1:]]
    n = len(labels)
    if len(rows) - 1 != n:
        raise ParseError('%s: %d labels but %d rows' % (path, n, len(rows) - 1))
    values = np.zeros((n, n))
    for r, cells in enumerate(rows[1:], start=2):
        if len(cells) != n + 1:
            raise ParseError('row %d: expected %d fields, got %d' % (r, n + 1, len(cells)), row=r)
        for c, cell in enumerate(cells[1:]):
            try:
                values[r - 2, c] = float(cell)
            except ValueError:
                raise ParseError('row %d: %r is not a number' % (r, cell.strip()), row=r)
    return DistanceMatrix(labels, None, values)
# -----------------------------------------------------------------------------------------------------------


def read_matrix(path):
    """Read a matrix file, JSON when the name ends in ``.json``, else CSV."""
    if str(path).lower().endswith('.json'):
        return read_matrix_json(path)
    return read_matrix_csv(path)
# -----------------------------------------------------------------------------------------------------------


def audit_to_dict(report):
    labels = report.labels
    viol = []
    for v in report.triangle_violations:
        entry = dict(v)
        if labels:
            entry['labels'] = [labels[v['i']], labels[v['j']], labels[v['k']]]
        viol.append(entry)
    return {
        'identity_ok': report.identity_ok,
        'symmetry_ok': report.symmetry_ok,
        'nonneg_ok': report.nonneg_ok,
        'is_metric': report.is_metric,
        'tolerance': report.tolerance,
        'labels': list(labels),
        'triangle_violations': viol,
    }
# -----------------------------------------------------------------------------------------------------------


def format_audit_table(report, col=None):
    """
    Human readable audit: one check line per axiom, then the violating
    triples. Colors are used when ``col`` is an enabled ``Col``.
    """
    col = col if col is not None else Col(enabled=False)
    lines = [
        check_display(report.identity_ok, 1, 'd(i, i) = 0', col),
        check_display(report.symmetry_ok, 2, 'd(i, j) = d(j, i)', col),
        check_display(report.nonneg_ok, 3, 'd(i, j) >= 0', col),
        check_display(not report.triangle_violations, 4,
                      'd(i, k) <= d(i, j) + d(j, k)  (%d violations)'
                      % len(report.triangle_violations), col),
    ]
    if report.triangle_violations:
        labels = report.labels or [str(k) for k in range(max(
            max(v['i'], v['j'], v['k']) for v in report.triangle_violations) + 1)]
        lines.append('')
        lines.append('%-8s %-8s %-8s %18s %18s %14s' % ('i', 'j', 'k', 'd(i,k)',
                                                       'd(i,j)+d(j,k)', 'margin'))
        for v in report.triangle_violations:
            lines.append('%-8s %-8s %-8s %18.10g %18.10g %14.6g'
                         % (labels[v['i']], labels[v['j']], labels[v['k']],
                            v['lhs'], v['rhs'], v['margin']))
    return '\n'.join(lines)
# -----------------------------------------------------------------------------------------------------------


def tour_to_dict(tour, labels=None):
    out = {'order': list(tour.order), 'length': float(tour.length)}
    if labels:
        out['labels'] = [labels[k] for k in tour.order]
    return out
# -----------------------------------------------------------------------------------------------------------


def route_to_dict(route):
    labels = route['labels']
    return {'closure': route['closure'],
            'nn': tour_to_dict(route['nn'], labels),
            'two_opt': tour_to_dict(route['two_opt'], labels)}
# -----------------------------------------------------------------------------------------------------------


def study_to_dict(study):
    rows = []
    for row in study['rows']:
        entry = dict(row)
        entry['distances'] = {k: _finite_or_none(v) for k, v in row['distances'].items()}
        entry['relative_errors'] = {k: _finite_or_none(v)
                                    for k, v in row['relative_errors'].items()}
        entry['max_relative_error'] = _finite_or_none(row['max_relative_error'])
        rows.append(entry)
    audit = study['audit']
    return {'rows': rows, 'reproduction_degree': study['reproduction_degree'],
            'best_degree': study['best_degree'],
            'audit': audit_to_dict(audit) if audit is not None else None}
# -----------------------------------------------------------------------------------------------------------


def distance_to_dict(label_i, label_j, length, provenance, path=None):
    out = {'pair': [label_i, label_j], 'distance': _finite_or_none(length),
           'provenance': provenance}
    if path is not None:
        out['path'] = path_to_dict(path)
    return out
# -----------------------------------------------------------------------------------------------------------


def dump_json(obj, stream):
    """Deterministic JSON: sorted keys, two-space indent, trailing newline."""
    stream.write(json.dumps(obj, indent=2, sort_keys=True, allow_nan=False))
    stream.write('\n')
