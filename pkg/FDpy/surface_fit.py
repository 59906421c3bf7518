# FDpy: distance functions over finite point sets in R^3.
# License: GNU-GPL Style.
"""
Least-squares polynomial surfaces.

* ``fit_unconstrained``: minimize D = sum_k (f(x_k, y_k) - z_k)^2.
* ``fit_constrained``: minimize D over the other points subject to the
  surface passing exactly through a designated pair, solved through the
  multiplier (saddle) system [[A^T A, C^T], [C, 0]].
* ``minimum_norm_fit``: the minimum-norm member of the solution family when
  the saddle system is singular.
* ``perturbation_resolve``: displaces the other points by a vanishing
  schedule, fits each displaced set and stops when both the geodesic
  length and the coefficients have settled.
"""

from dataclasses import dataclass, field
import logging
import warnings

import numpy as np
from scipy import linalg

from . import geodesic as geo
from .errors import AllSingular, ConfigError, NoConvergence, SingularSystem, VerticalPair
from .geometry_tools import array_to_points, points_to_array, same_xy
from .poly_surface import PolynomialSurface, design_matrix, monomial_basis, surface_to_dict
from .tools import RANK_RTOL, equilibrate_columns, numerical_rank

logger = logging.getLogger(__name__)
# -----------------------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class FitSystem:
    """
    An assembled least-squares system with its rank diagnostics.

    Attributes
    ----------
    design: numpy array
        (m x nterms), entry phi_t(x_k, y_k) for the least-squares points.

    rhs: numpy array
        The heights z_k.

    constraints: numpy array or None
        (c x nterms) basis rows of the interpolation points.

    constraint_rhs: numpy array or None
        Heights the constraint rows must reproduce.

    degree: int

    rank: int
        Numerical rank of the square system (normal matrix, or saddle
        matrix when constraints are present).

    dim: int
        Dimension of the square system.

    singular: bool
        rank < dim.

    scaling: SurfaceScaling or None
        Coordinate scaling the monomials were evaluated with.
    """
    design: np.ndarray
    rhs: np.ndarray
    constraints: np.ndarray
    constraint_rhs: np.ndarray
    degree: int
    rank: int
    dim: int
    singular: bool
    scaling: object = None

    @property
    def nterms(self):
        return self.design.shape[1]
# -----------------------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class ResolvedDistance:
    """
    Outcome of ``perturbation_resolve``.

    ``lengths`` holds the geodesic length of every solved step,
    ``coefficient_tail`` the last few coefficient vectors. ``resolver`` is
    ``'perturbation'``, or ``'direct'`` when the input was not singular.
    """
    length: float
    surface: PolynomialSurface
    path: object
    steps: int
    lengths: list = field(default_factory=list)
    coefficient_tail: list = field(default_factory=list)
    resolver: str = 'perturbation'
    shifted_steps: int = 0
    skipped_steps: int = 0
    converged: bool = True
# -----------------------------------------------------------------------------------------------------------


def _xyz(points):
    arr = points_to_array(points)
    return arr[:, 0], arr[:, 1], arr[:, 2]
# -----------------------------------------------------------------------------------------------------------


def build_unconstrained_system(points, degree, scaling=None):
    """
    Design matrix and normal system of the plain least-squares fit.

    Parameters
    ----------
    points: list of Point3
        Non-empty sample.

    degree: int

    scaling: SurfaceScaling or None

    Returns
    -------
    FitSystem
        ``rank`` is the rank of A^T A, measured on the column-equilibrated
        design matrix (same rank in exact arithmetic, without squaring the
        condition number).
    """
    if len(points) == 0:
        raise ConfigError('at least one point is required for a fit')
    basis = monomial_basis(degree)
    x, y, z = _xyz(points)
    A = design_matrix(basis, x, y, scaling)
    rank, _ = numerical_rank(equilibrate_columns(A)[0])
    dim = len(basis)
    logger.debug('unconstrained system: degree %d, %d points, rank %d of %d',
                 degree, len(points), rank, dim)
    return FitSystem(A, z, None, None, int(degree), rank, dim, rank < dim, scaling)
# -----------------------------------------------------------------------------------------------------------


def build_constrained_system(p1, p2, others, degree, scaling=None):
    """
    Saddle system of the fit through ``p1`` and ``p2`` that is least-squares
    over ``others``.

    The saddle matrix is nonsingular iff the constraint rows are
    independent and [A; C] has full column rank, so its rank is assessed
    as rank(C) + rank([A; C]) on equilibrated columns.
    """
    if same_xy(p1, p2):
        if p1.z != p2.z:
            raise VerticalPair('points (%g, %g, %g) and (%g, %g, %g) share planar coordinates'
                               % (p1.x, p1.y, p1.z, p2.x, p2.y, p2.z))
        raise ConfigError('constraint points coincide')
    if degree < 1:
        raise ConfigError('constrained fits need degree >= 1')
    basis = monomial_basis(degree)
    nterms = len(basis)
    if len(others):
        x, y, z = _xyz(others)
        A = design_matrix(basis, x, y, scaling)
    else:
        A = np.zeros((0, nterms))
        z = np.zeros(0)
    C = design_matrix(basis, [p1.x, p2.x], [p1.y, p2.y], scaling)
    d = np.array([p1.z, p2.z])
    stacked, _ = equilibrate_columns(np.vstack((A, C)))
    rank_c, _ = numerical_rank(equilibrate_columns(C)[0])
    rank_ac, _ = numerical_rank(stacked)
    rank = rank_c + rank_ac
    dim = nterms + 2
    logger.debug('constrained system: degree %d, %d others, rank %d of %d',
                 degree, len(others), rank, dim)
    return FitSystem(A, z, C, d, int(degree), rank, dim, rank < dim, scaling)
# -----------------------------------------------------------------------------------------------------------


def _surface(system, coeffs):
    return PolynomialSurface(monomial_basis(system.degree), coeffs, system.scaling)
# -----------------------------------------------------------------------------------------------------------


def _solve_saddle(system):
    """
    Solve the nonsingular saddle system with a symmetric-indefinite
    factorization on equilibrated columns and rows, two rounds of
    iterative refinement and a final minimum-norm correction that puts the
    constraints at round-off.
    """
    A, C = system.design, system.constraints
    nterms = system.nterms
    _, scale = equilibrate_columns(np.vstack((A, C)))
    Ae = A*scale
    Ce = C*scale
    rnorm = np.sqrt(np.sum(Ce**2, axis=1))
    Ce = Ce/rnorm[:, None]
    de = system.constraint_rhs/rnorm
    nc = Ce.shape[0]
    K = np.block([[Ae.T.dot(Ae), Ce.T], [Ce, np.zeros((nc, nc))]])
    r = np.concatenate((Ae.T.dot(system.rhs), de))
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', linalg.LinAlgWarning)
        try:
            sol = linalg.solve(K, r, assume_a='sym')
            for _ in range(2):
                sol = sol + linalg.solve(K, r - K.dot(sol), assume_a='sym')
        except linalg.LinAlgError:
            raise SingularSystem('saddle system is exactly singular', system=system)
    y = sol[:nterms]
    y = y + linalg.lstsq(Ce, de - Ce.dot(y), lapack_driver='gelsd')[0]
    return y*scale
# -----------------------------------------------------------------------------------------------------------


def _null_space_solve(system, shift=0.0):
    """
    Minimum-norm constrained least squares, optionally with the term
    shift * ||a||^2 added to D.

    a = a0 + Z w with a0 the minimum-norm solution of C a = d and Z an
    orthonormal basis of null(C); since a0 is orthogonal to Z, the norm of
    a is minimized by the minimum-norm w of the reduced problem.
    """
    A, C, d = system.design, system.constraints, system.constraint_rhs
    nterms = system.nterms
    cond = RANK_RTOL*max(C.shape)
    a0 = linalg.lstsq(C, d, cond=cond, lapack_driver='gelsd')[0]
    Z = linalg.null_space(C, rcond=cond)
    if Z.shape[1] == 0:
        return a0
    AZ = A.dot(Z)
    r = system.rhs - A.dot(a0)
    if shift > 0:
        AZ = np.vstack((AZ, np.sqrt(shift)*np.eye(Z.shape[1])))
        r = np.concatenate((r, np.zeros(Z.shape[1])))
    if AZ.shape[0] == 0:
        return a0
    w = linalg.lstsq(AZ, r, cond=RANK_RTOL*max(AZ.shape), lapack_driver='gelsd')[0]
    return a0 + Z.dot(w)
# -----------------------------------------------------------------------------------------------------------


def fit_unconstrained(points, degree, scaling=None):
    """
    Least-squares surface of degree ``degree`` over ``points``.

    Raises
    ------
    SingularSystem
        The normal matrix is rank deficient: infinitely many surfaces fit
        equally well. The exception carries the ``FitSystem``.
    """
    system = build_unconstrained_system(points, degree, scaling)
    if system.singular:
        raise SingularSystem('normal system of degree %d has rank %d < %d'
                             % (degree, system.rank, system.dim), system=system)
    Ae, scale = equilibrate_columns(system.design)
    sol = linalg.lstsq(Ae, system.rhs, lapack_driver='gelsy')[0]
    return _surface(system, sol*scale)
# -----------------------------------------------------------------------------------------------------------


def minimum_norm_unconstrained_fit(points, degree, scaling=None):
    """
    Minimum-norm least-squares surface; equals ``fit_unconstrained`` when
    the normal system is nonsingular.
    """
    system = build_unconstrained_system(points, degree, scaling)
    A = system.design
    sol = linalg.lstsq(A, system.rhs, cond=RANK_RTOL*max(A.shape), lapack_driver='gelsd')[0]
    return _surface(system, sol)
# -----------------------------------------------------------------------------------------------------------


def fit_constrained(p1, p2, others, degree, scaling=None):
    """
    Surface through ``p1`` and ``p2`` that is least-squares over ``others``.

    Parameters
    ----------
    p1, p2: Point3
        The interpolated pair; their planar coordinates must differ.

    others: list of Point3
        Points entering D (the pair itself is not part of D).

    degree: int
        >= 1.

    scaling: SurfaceScaling or None

    Returns
    -------
    PolynomialSurface

    Raises
    ------
    VerticalPair
        ``p1`` and ``p2`` share (x, y) with different z.

    SingularSystem
        The saddle system is rank deficient.
    """
    system = build_constrained_system(p1, p2, others, degree, scaling)
    if system.singular:
        raise SingularSystem('saddle system of degree %d has rank %d < %d'
                             % (degree, system.rank, system.dim), system=system)
    return _surface(system, _solve_saddle(system))
# -----------------------------------------------------------------------------------------------------------


def minimum_norm_fit(p1, p2, others, degree, scaling=None):
    """
    Among the coefficient vectors through ``p1``, ``p2`` minimizing D over
    ``others``, the one of least Euclidean norm. Rank deficiency is allowed.
    """
    system = build_constrained_system(p1, p2, others, degree, scaling)
    return _surface(system, _null_space_solve(system))
# -----------------------------------------------------------------------------------------------------------


def residual_sum(surface, points):
    """D = sum_k (f(x_k, y_k) - z_k)^2 over ``points``."""
    if len(points) == 0:
        return 0.0
    x, y, z = _xyz(points)
    phi = design_matrix(surface.basis, x, y, surface.scaling)
    res = phi.dot(surface.coefficients) - z
    return float(res.dot(res))
# -----------------------------------------------------------------------------------------------------------


def _unit_directions(count, seed):
    rng = np.random.default_rng(seed)
    dirs = rng.normal(size=(count, 3))
    norms = np.linalg.norm(dirs, axis=1)
    dirs[norms == 0] = (1.0, 0.0, 0.0)
    norms[norms == 0] = 1.0
    return dirs/norms[:, None]
# -----------------------------------------------------------------------------------------------------------


def perturbation_resolve(p1, p2, others, degree, sched, geodesic_cfg, scaling=None):
    """
    Resolve a singular constrained fit by a vanishing displacement of the
    other points.

    Step i displaces every point of ``others`` by eps_i = epsilon0 * decay**i
    along a fixed unit direction drawn from ``sched.seed``, fits the
    constrained surface C_i and measures the geodesic g_i between ``p1`` and
    ``p2``. A step whose displaced system is still singular (too few
    points for the basis) is solved with the shift eps_i**2 * ||a||^2 when
    ``sched.shift`` is set, and skipped otherwise. The schedule stops at
    the first step where

        | ||g_i|| - ||g_i-1|| | <= length_tol * (1 + ||g_i||)
        max | a_i - a_i-1 |   <= coeff_tol

    Returns
    -------
    ResolvedDistance

    Raises
    ------
    NoConvergence
        ``max_steps`` exhausted before both tolerances were met.

    AllSingular
        No step of the schedule produced a solvable system.
    """
    base = build_constrained_system(p1, p2, others, degree, scaling)
    if not base.singular:
        logger.warning('perturbation_resolve on a nonsingular system; using the direct fit')
        surf = _surface(base, _solve_saddle(base))
        length, path = geo.geodesic_distance(surf, p1, p2, geodesic_cfg)
        return ResolvedDistance(length, surf, path, 1, [length], [surf.coefficients],
                                resolver='direct')

    arr = points_to_array(others)
    dirs = _unit_directions(arr.shape[0], sched.seed)
    lengths, tail = [], []
    path = None
    prev_len = prev_coeffs = None
    shifted = skipped = 0
    for step in range(sched.max_steps):
        eps = sched.epsilon(step)
        moved = array_to_points(arr + eps*dirs)
        system = build_constrained_system(p1, p2, moved, degree, scaling)
        if not system.singular:
            coeffs = _solve_saddle(system)
        elif sched.shift:
            coeffs = _null_space_solve(system, shift=eps**2)
            shifted += 1
        else:
            skipped += 1
            logger.debug('step %d: displaced system still singular (rank %d < %d)',
                         step, system.rank, system.dim)
            continue
        surf = _surface(system, coeffs)
        length, path = geo.geodesic_distance(surf, p1, p2, geodesic_cfg, initial=path)
        lengths.append(length)
        tail = (tail + [surf.coefficients])[-3:]
        logger.debug('step %d: eps %.3e length %.12g', step, eps, length)
        if prev_len is not None:
            dl = abs(length - prev_len)
            da = float(np.max(np.abs(surf.coefficients - prev_coeffs)))
            if dl <= sched.length_tol*(1 + length) and da <= sched.coeff_tol:
                return ResolvedDistance(length, surf, path, step + 1, lengths, tail,
                                        shifted_steps=shifted, skipped_steps=skipped)
        prev_len, prev_coeffs = length, surf.coefficients

    if not lengths:
        raise AllSingular('every displaced system of the schedule was singular',
                          system=base, steps=sched.max_steps)
    raise NoConvergence('perturbation schedule did not converge in %d steps' % sched.max_steps,
                        steps=sched.max_steps, lengths=lengths)
# -----------------------------------------------------------------------------------------------------------


def rank_report(points, degrees, scaling=None):
    """
    Rank of the unconstrained normal system for each degree.

    Returns
    -------
    list of dict
        ``{degree, terms, rank, singular}`` per degree.
    """
    out = []
    for deg in degrees:
        system = build_unconstrained_system(points, deg, scaling)
        out.append({'degree': int(deg), 'terms': system.dim,
                    'rank': system.rank, 'singular': bool(system.singular)})
    return out
# -----------------------------------------------------------------------------------------------------------


def fit_report(system, surface, resolver='direct', steps=0, lengths=()):
    """JSON-ready fit report."""
    return {
        'degree': system.degree,
        'singular': bool(system.singular),
        'rank': int(system.rank),
        'dim': int(system.dim),
        'resolver': resolver,
        'steps': int(steps),
        'lengths': [float(v) for v in lengths],
        'surface': surface_to_dict(surface),
    }
