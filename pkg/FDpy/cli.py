# FDpy: distance functions over finite point sets in R^3.
# License: GNU-GPL Style.
"""
Command line interface.

    fdpy fit      --input pts.csv [--pair I J]
    fdpy distance --input pts.csv --pair I J
    fdpy baseline --input pts.csv --pair I J
    fdpy matrix   --input pts.csv [--parallel on]
    fdpy audit    --input matrix.(csv|json) [--format json|table]
    fdpy route    --input pts.csv | --matrix matrix.(csv|json) [--start I] [--closure on]
    fdpy study    [--input table.csv]

Point indices are 0-based in file order. Results go to --output (stdout by
default); a failure writes a JSON error object to stderr and exits with the
code of the error: 2 parse, 3 singular system, 4 no convergence, 5 vertical
pair, 1 otherwise.
"""

import argparse
import contextlib
import csv
import logging
import os
import sys

from . import distance as dist
from . import routing
from .config import RunConfig
from .errors import ConfigError, FDError, ParseError, SingularSystem
from .geodesic import geodesic_distance
from .geometry_tools import without
from .io_tools import (audit_to_dict, distance_to_dict, dump_json, format_audit_table,
                       load_points_csv, read_matrix, route_to_dict, study_to_dict,
                       write_matrix_csv, write_matrix_json)
from .poly_surface import scaling_for
from .surface_fit import (build_constrained_system, build_unconstrained_system, fit_constrained,
                          fit_report, fit_unconstrained, minimum_norm_unconstrained_fit,
                          perturbation_resolve, rank_report)
from .tools import Col, fmt17

logger = logging.getLogger(__name__)

file_dir = os.path.dirname(os.path.realpath(__file__))
TEN_POINTS_PATH = os.path.join(file_dir, 'data', 'ten_points.csv')
# -----------------------------------------------------------------------------------------------------------


def _on_off(text):
    if text not in ('on', 'off'):
        raise argparse.ArgumentTypeError("expected 'on' or 'off', got %r" % text)
    return text
# -----------------------------------------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--degree', type=int, default=2, help='surface degree n (default 2)')
    common.add_argument('--input', help='input file')
    common.add_argument('--output', help='output file (default stdout)')
    common.add_argument('--seed', type=int, default=0, help='master seed')
    common.add_argument('--nodes', type=int, help='initial geodesic nodes (default 65)')
    common.add_argument('--max-nodes', dest='max_nodes', type=int,
                        help='maximum geodesic nodes (default 1025)')
    common.add_argument('--grad-tol', dest='grad_tol', type=float)
    common.add_argument('--refine-tol', dest='refine_tol', type=float)
    common.add_argument('--eps0', type=float, help='first perturbation magnitude')
    common.add_argument('--decay', type=float, help='perturbation decay factor')
    common.add_argument('--max-steps', dest='max_steps', type=int)
    common.add_argument('--scale', type=_on_off, default='off',
                        help='scale (x, y) to [-1, 1]^2 before fitting')
    common.add_argument('--parallel', type=_on_off, default='off')
    common.add_argument('-v', '--verbose', action='count', default=0)

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument('--format', choices=('csv', 'json'), default='json')

    pair = argparse.ArgumentParser(add_help=False)
    pair.add_argument('--pair', nargs=2, type=int, metavar=('I', 'J'))

    parser = argparse.ArgumentParser(prog='fdpy',
                                     description='Surface geodesic distances over finite point sets.')
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    p = sub.add_parser('fit', parents=[common, fmt, pair], help='fit a surface')
    p.add_argument('--min-norm', dest='min_norm', action='store_true',
                   help='resolve a singular unconstrained fit by its minimum-norm solution')
    p.set_defaults(func=cmd_fit)
    p = sub.add_parser('distance', parents=[common, fmt, pair], help='d_n of one pair')
    p.set_defaults(func=cmd_distance)
    p = sub.add_parser('baseline', parents=[common, fmt, pair],
                       help='geodesic between the vertical feet of one pair')
    p.set_defaults(func=cmd_baseline)
    p = sub.add_parser('matrix', parents=[common, fmt], help='all pair distances')
    p.set_defaults(func=cmd_matrix)
    p = sub.add_parser('audit', parents=[common], help='metric axioms of a matrix file')
    p.add_argument('--format', choices=('json', 'table'), default='json')
    p.set_defaults(func=cmd_audit)
    p = sub.add_parser('route', parents=[common, fmt], help='nearest neighbour + 2-opt tour')
    p.add_argument('--matrix', help='matrix file used instead of computing one from --input')
    p.add_argument('--start', type=int, default=0)
    p.add_argument('--closure', type=_on_off, default='off',
                   help='route over the shortest-path closure of the matrix')
    p.set_defaults(func=cmd_route)
    p = sub.add_parser('study', parents=[common, fmt],
                       help='worked-example distances for degrees 1-4')
    p.add_argument('--degrees', nargs='+', type=int, default=[1, 2, 3, 4])
    p.set_defaults(func=cmd_study)
    return parser
# -----------------------------------------------------------------------------------------------------------


@contextlib.contextmanager
def _output(args):
    if args.output:
        with open(args.output, 'w', newline='') as fh:
            yield fh
    else:
        yield sys.stdout
# -----------------------------------------------------------------------------------------------------------


def _points(args):
    if not args.input:
        raise ConfigError('--input is required')
    return load_points_csv(args.input)
# -----------------------------------------------------------------------------------------------------------


def _pair(args, points):
    if args.pair is None:
        raise ConfigError('--pair I J is required')
    i, j = args.pair
    for k in (i, j):
        if not 0 <= k < len(points):
            raise ConfigError('point index %d out of range 0..%d' % (k, len(points) - 1))
    return i, j
# -----------------------------------------------------------------------------------------------------------


def cmd_fit(args, cfg):
    points, labels = _points(args)
    scaling = scaling_for(points) if cfg.scaling else None
    if args.pair is None:
        system = build_unconstrained_system(points, cfg.degree, scaling)
        if system.singular and args.min_norm:
            surf, resolver = minimum_norm_unconstrained_fit(points, cfg.degree, scaling), 'min-norm'
        else:
            surf, resolver = fit_unconstrained(points, cfg.degree, scaling), 'direct'
        report = fit_report(system, surf, resolver)
        report['ranks'] = rank_report(points, range(1, cfg.degree + 1), scaling)
    else:
        i, j = _pair(args, points)
        p1, p2 = points[i], points[j]
        others = without(points, p1, p2)
        system = build_constrained_system(p1, p2, others, cfg.degree, scaling)
        pcfg = cfg.for_pair(i, j)
        try:
            surf = fit_constrained(p1, p2, others, cfg.degree, scaling)
        except SingularSystem:
            res = perturbation_resolve(p1, p2, others, cfg.degree, pcfg.perturbation,
                                       pcfg.geodesic, scaling)
            report = fit_report(system, res.surface, res.resolver, res.steps, res.lengths)
        else:
            length, _ = geodesic_distance(surf, p1, p2, pcfg.geodesic)
            report = fit_report(system, surf, 'direct', 1, [length])
        report['pair'] = [labels[i], labels[j]]
    with _output(args) as out:
        if cfg.output_format == 'json':
            dump_json(report, out)
        else:
            writer = csv.writer(out, lineterminator='\n')
            writer.writerow(['i', 'j', 'a'])
            for c in report['surface']['coefficients']:
                writer.writerow([c['i'], c['j'], fmt17(c['a'])])
    return 0
# -----------------------------------------------------------------------------------------------------------


def _write_distance(args, cfg, label_i, label_j, length, prov):
    with _output(args) as out:
        if cfg.output_format == 'json':
            dump_json(distance_to_dict(label_i, label_j, length, prov), out)
        else:
            writer = csv.writer(out, lineterminator='\n')
            writer.writerow(['i', 'j', 'distance'])
            writer.writerow([label_i, label_j, fmt17(length)])
# -----------------------------------------------------------------------------------------------------------


def cmd_distance(args, cfg):
    points, labels = _points(args)
    i, j = _pair(args, points)
    length, prov = dist.distance_dn(points, points[i], points[j], cfg.degree, cfg.for_pair(i, j))
    _write_distance(args, cfg, labels[i], labels[j], length, prov)
    return 0
# -----------------------------------------------------------------------------------------------------------


def cmd_baseline(args, cfg):
    points, labels = _points(args)
    i, j = _pair(args, points)
    length = dist.projected_baseline_distance(points, points[i], points[j], cfg.degree,
                                              cfg.for_pair(i, j))
    _write_distance(args, cfg, labels[i], labels[j], length, {'resolver': 'baseline'})
    return 0
# -----------------------------------------------------------------------------------------------------------


def _matrix(args, cfg):
    points, labels = _points(args)
    return dist.distance_matrix(points, cfg.degree, cfg, labels)
# -----------------------------------------------------------------------------------------------------------


def cmd_matrix(args, cfg):
    m = _matrix(args, cfg)
    with _output(args) as out:
        if cfg.output_format == 'json':
            write_matrix_json(m, out)
        else:
            write_matrix_csv(m, out)
    return 0 if m.complete else 1
# -----------------------------------------------------------------------------------------------------------


def cmd_audit(args, cfg):
    if not args.input:
        raise ConfigError('--input is required')
    report = dist.metric_audit(read_matrix(args.input))
    with _output(args) as out:
        if args.format == 'json':
            dump_json(audit_to_dict(report), out)
        else:
            out.write(format_audit_table(report, Col(stream=out)))
            out.write('\n')
    return 0
# -----------------------------------------------------------------------------------------------------------


def cmd_route(args, cfg):
    m = read_matrix(args.matrix) if args.matrix else _matrix(args, cfg)
    route = routing.plan_route(m, args.start, args.closure == 'on')
    with _output(args) as out:
        if cfg.output_format == 'json':
            dump_json(route_to_dict(route), out)
        else:
            writer = csv.writer(out, lineterminator='\n')
            writer.writerow(['tour', 'length', 'order'])
            for name in ('nn', 'two_opt'):
                t = route[name]
                writer.writerow([name, fmt17(t.length), ' '.join(m.labels[k] for k in t.order)])
    return 0
# -----------------------------------------------------------------------------------------------------------


def cmd_study(args, cfg):
    points, labels = load_points_csv(args.input or TEN_POINTS_PATH)
    study = dist.worked_example_study(points, labels, cfg, args.degrees)
    with _output(args) as out:
        if cfg.output_format == 'json':
            dump_json(study_to_dict(study), out)
        else:
            writer = csv.writer(out, lineterminator='\n')
            keys = list(dist.PRINTED_PAIR_VALUES)
            names = ['%s-%s' % k for k in keys]
            writer.writerow(['degree', 'rank', 'terms'] + names + ['max_relative_error', 'matches'])
            for row in study['rows']:
                writer.writerow([row['degree'], row['rank'], row['terms']]
                                + [fmt17(row['distances'][n]) for n in names]
                                + [fmt17(row['max_relative_error']), int(row['matches'])])
    return 0
# -----------------------------------------------------------------------------------------------------------


def _setup_logging(verbose):
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(asctime)s %(name)s %(levelname)s: %(message)s')
# -----------------------------------------------------------------------------------------------------------


def main(argv=None):
    """
    Run the command line; returns the process exit status.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    _setup_logging(args.verbose)
    try:
        if args.command == 'audit':
            cfg = None
        else:
            cfg = RunConfig.from_args(args)
        return args.func(args, cfg)
    except FDError as err:
        logger.debug('command failed', exc_info=True)
        dump_json(err.to_dict(), sys.stderr)
        return err.exit_code
    except OSError as err:
        dump_json(ParseError('%s: %s' % (getattr(err, 'filename', ''), err.strerror)).to_dict(),
                  sys.stderr)
        return ParseError.exit_code
# -----------------------------------------------------------------------------------------------------------


if __name__ == '__main__':
    sys.exit(main())
