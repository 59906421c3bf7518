# FDpy: distance functions over finite point sets in R^3.
# License: GNU-GPL Style.
"""
Polynomial Monge patches z = f(x, y) = sum a_ij x^i y^j, i + j <= n.

The coefficient vector of a surface is aligned with the graded
lexicographic basis returned by ``monomial_basis``: ascending total degree,
then ascending power of x. For degree 2 that is
(0,0), (0,1), (1,0), (0,2), (1,1), (2,0).
"""

from dataclasses import dataclass
import logging

import numpy as np

from .errors import ConfigError, NumericRangeError
from .geometry_tools import Point3, points_to_array

logger = logging.getLogger(__name__)
# -----------------------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class MonomialBasis:
    """
    Exponent pairs (i, j) of a complete bivariate polynomial of degree n.

    Attributes
    ----------
    degree: int
        The total degree n >= 0.

    terms: tuple of (int, int)
        Graded lexicographic exponent pairs; there are (n+1)(n+2)/2 of them.
    """
    degree: int
    terms: tuple

    def __len__(self):
        return len(self.terms)

    @property
    def exponents(self):
        """(nterms x 2) integer array of the exponent pairs."""
        return np.array(self.terms, dtype=int).reshape((-1, 2))
# -----------------------------------------------------------------------------------------------------------


def monomial_basis(degree):
    """
    The complete graded basis of total degree ``degree``.

    Parameters
    ----------
    degree: int
        Non-negative total degree.

    Returns
    -------
    MonomialBasis
    """
    if isinstance(degree, bool) or int(degree) != degree or degree < 0:
        raise ConfigError('degree must be a non-negative integer, got %r' % (degree,))
    degree = int(degree)
    terms = tuple((i, d - i) for d in range(degree + 1) for i in range(d + 1))
    return MonomialBasis(degree, terms)
# -----------------------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceScaling:
    """
    Affine change of planar coordinates u' = (u - cx)/sx, v' = (v - cy)/sy
    applied before the monomials are evaluated.
    """
    cx: float
    cy: float
    sx: float
    sy: float

    def __post_init__(self):
        for name in ('cx', 'cy', 'sx', 'sy'):
            val = float(getattr(self, name))
            if not np.isfinite(val):
                raise ConfigError('scaling %s must be finite' % name)
            object.__setattr__(self, name, val)
        if self.sx <= 0 or self.sy <= 0:
            raise ConfigError('scaling factors must be positive')

    def apply(self, u, v):
        return (u - self.cx)/self.sx, (v - self.cy)/self.sy

    def to_dict(self):
        return {'cx': self.cx, 'cy': self.cy, 'sx': self.sx, 'sy': self.sy}
# -----------------------------------------------------------------------------------------------------------


def scaling_for(points):
    """
    The scaling that maps the planar bounding box of ``points`` onto
    [-1, 1]^2. A degenerate extent (single x or y value) keeps unit scale.
    """
    arr = points_to_array(points)
    if arr.shape[0] == 0:
        return SurfaceScaling(0.0, 0.0, 1.0, 1.0)
    lo = arr[:, :2].min(axis=0)
    hi = arr[:, :2].max(axis=0)
    center = 0.5*(lo + hi)
    half = 0.5*(hi - lo)
    half = np.where(half > 0, half, 1.0)
    return SurfaceScaling(center[0], center[1], half[0], half[1])
# -----------------------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class PolynomialSurface:
    """
    The surface z = sum_k a_k phi_k(x, y) over a monomial basis.

    Attributes
    ----------
    basis: MonomialBasis

    coefficients: numpy array
        Read-only vector aligned with ``basis.terms``.

    scaling: SurfaceScaling or None
        When set, monomials are evaluated on the scaled coordinates; the
        surface is still a function of the original (x, y).
    """
    basis: MonomialBasis
    coefficients: np.ndarray
    scaling: SurfaceScaling = None

    def __post_init__(self):
        coeffs = np.array(self.coefficients, dtype=float).reshape(-1)
        if coeffs.shape[0] != len(self.basis):
            raise ConfigError('expected %d coefficients for degree %d, got %d'
                              % (len(self.basis), self.basis.degree, coeffs.shape[0]))
        if not np.all(np.isfinite(coeffs)):
            raise NumericRangeError('surface coefficients must be finite')
        coeffs.flags.writeable = False
        object.__setattr__(self, 'coefficients', coeffs)

    @property
    def degree(self):
        return self.basis.degree

    def __eq__(self, other):
        if not isinstance(other, PolynomialSurface):
            return NotImplemented
        return (self.basis == other.basis and self.scaling == other.scaling
                and np.array_equal(self.coefficients, other.coefficients))

    def __hash__(self):
        return hash((self.basis, self.scaling, self.coefficients.tobytes()))
# -----------------------------------------------------------------------------------------------------------


def _power_tables(u, v, degree):
    pw = np.arange(degree + 1)
    with np.errstate(over='ignore', invalid='ignore'):
        pu = u[:, None]**pw
        pv = v[:, None]**pw
    return pu, pv
# -----------------------------------------------------------------------------------------------------------


def _prepare(u, v, scaling):
    u = np.atleast_1d(np.asarray(u, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    u, v = np.broadcast_arrays(u, v)
    shape = u.shape
    u = u.reshape(-1)
    v = v.reshape(-1)
    if scaling is not None:
        u, v = scaling.apply(u, v)
    return u, v, shape
# -----------------------------------------------------------------------------------------------------------


def design_matrix(basis, u, v, scaling=None):
    """
    Monomials evaluated at planar points.

    Parameters
    ----------
    basis: MonomialBasis

    u, v: array_like
        Planar coordinates (flattened).

    scaling: SurfaceScaling or None

    Returns
    -------
    phi: numpy array
        (npts x nterms), phi[k, t] = u_k^i v_k^j for terms[t] = (i, j).
    """
    u, v, _ = _prepare(u, v, scaling)
    exps = basis.exponents
    pu, pv = _power_tables(u, v, basis.degree)
    with np.errstate(over='ignore', invalid='ignore'):
        phi = pu[:, exps[:, 0]]*pv[:, exps[:, 1]]
    return phi
# -----------------------------------------------------------------------------------------------------------


def design_matrix_grad(basis, u, v, scaling=None):
    """
    Partial derivatives of the monomials with respect to the original x
    and y, as two (npts x nterms) arrays.
    """
    u, v, _ = _prepare(u, v, scaling)
    exps = basis.exponents
    pu, pv = _power_tables(u, v, basis.degree)
    # d/du u^i = i u^(i-1); the shifted table carries a leading zero column
    zero = np.zeros((u.shape[0], 1))
    dpu = np.hstack((zero, pu[:, :-1]))*np.arange(basis.degree + 1)
    dpv = np.hstack((zero, pv[:, :-1]))*np.arange(basis.degree + 1)
    sx = scaling.sx if scaling is not None else 1.0
    sy = scaling.sy if scaling is not None else 1.0
    with np.errstate(over='ignore', invalid='ignore'):
        du = dpu[:, exps[:, 0]]*pv[:, exps[:, 1]]/sx
        dv = pu[:, exps[:, 0]]*dpv[:, exps[:, 1]]/sy
    return du, dv
# -----------------------------------------------------------------------------------------------------------


def design_matrix_hess(basis, u, v, scaling=None):
    """
    Second partial derivatives of the monomials with respect to the
    original x and y, as three (npts x nterms) arrays (xx, xy, yy).
    """
    u, v, _ = _prepare(u, v, scaling)
    exps = basis.exponents
    pu, pv = _power_tables(u, v, basis.degree)
    k = np.arange(basis.degree + 1)
    zero = np.zeros((u.shape[0], 1))
    dpu = np.hstack((zero, pu[:, :-1]))*k
    dpv = np.hstack((zero, pv[:, :-1]))*k
    d2pu = np.zeros_like(pu)
    d2pv = np.zeros_like(pv)
    d2pu[:, 2:] = pu[:, :-2]*(k*(k - 1))[2:]
    d2pv[:, 2:] = pv[:, :-2]*(k*(k - 1))[2:]
    sx = scaling.sx if scaling is not None else 1.0
    sy = scaling.sy if scaling is not None else 1.0
    with np.errstate(over='ignore', invalid='ignore'):
        duu = d2pu[:, exps[:, 0]]*pv[:, exps[:, 1]]/(sx*sx)
        duv = dpu[:, exps[:, 0]]*dpv[:, exps[:, 1]]/(sx*sy)
        dvv = pu[:, exps[:, 0]]*d2pv[:, exps[:, 1]]/(sy*sy)
    return duu, duv, dvv
# -----------------------------------------------------------------------------------------------------------


def _finite_or_raise(vals, what):
    if not np.all(np.isfinite(vals)):
        raise NumericRangeError('%s overflowed to a non-finite value' % what)
    return vals
# -----------------------------------------------------------------------------------------------------------


def _shaped(vals, shape, scalar):
    if scalar:
        return float(vals[0])
    return vals.reshape(shape)
# -----------------------------------------------------------------------------------------------------------


def eval_surface(s, u, v):
    """
    Height of the surface at (u, v).

    Scalars give a float; arrays are broadcast and give an array.
    Raises NumericRangeError when the value overflows.
    """
    scalar = np.ndim(u) == 0 and np.ndim(v) == 0
    uu, vv, shape = _prepare(u, v, None)
    phi = design_matrix(s.basis, uu, vv, s.scaling)
    with np.errstate(over='ignore', invalid='ignore'):
        vals = phi.dot(s.coefficients)
    _finite_or_raise(vals, 'surface evaluation')
    return _shaped(vals, shape, scalar)
# -----------------------------------------------------------------------------------------------------------


def surface_gradient(s, u, v):
    """
    (df/dx, df/dy) at (u, v) from the differentiated monomials.
    """
    scalar = np.ndim(u) == 0 and np.ndim(v) == 0
    uu, vv, shape = _prepare(u, v, None)
    du, dv = design_matrix_grad(s.basis, uu, vv, s.scaling)
    with np.errstate(over='ignore', invalid='ignore'):
        fx = du.dot(s.coefficients)
        fy = dv.dot(s.coefficients)
    _finite_or_raise(fx, 'surface gradient')
    _finite_or_raise(fy, 'surface gradient')
    return _shaped(fx, shape, scalar), _shaped(fy, shape, scalar)
# -----------------------------------------------------------------------------------------------------------


def surface_hessian(s, u, v):
    """
    (fxx, fxy, fyy) at (u, v).
    """
    scalar = np.ndim(u) == 0 and np.ndim(v) == 0
    uu, vv, shape = _prepare(u, v, None)
    duu, duv, dvv = design_matrix_hess(s.basis, uu, vv, s.scaling)
    out = []
    for mat in (duu, duv, dvv):
        with np.errstate(over='ignore', invalid='ignore'):
            vals = mat.dot(s.coefficients)
        _finite_or_raise(vals, 'surface hessian')
        out.append(_shaped(vals, shape, scalar))
    return tuple(out)
# -----------------------------------------------------------------------------------------------------------


def first_fundamental_form(s, u, v):
    """
    Metric coefficients of the Monge patch (u, v, f(u, v)).

    Returns
    -------
    E, F, G: float or numpy array
        E = 1 + fx^2, F = fx*fy, G = 1 + fy^2; EG - F^2 = 1 + fx^2 + fy^2.
    """
    fx, fy = surface_gradient(s, u, v)
    return 1.0 + fx*fx, fx*fy, 1.0 + fy*fy
# -----------------------------------------------------------------------------------------------------------


def lift(s, u, v):
    """The surface point above (u, v)."""
    return Point3(u, v, eval_surface(s, float(u), float(v)))
# -----------------------------------------------------------------------------------------------------------


def lift_array(s, uv):
    """Lift an (n x 2) array of planar nodes to an (n x 3) array."""
    uv = np.asarray(uv, dtype=float).reshape((-1, 2))
    z = eval_surface(s, uv[:, 0], uv[:, 1])
    return np.column_stack((uv, np.atleast_1d(z)))
# -----------------------------------------------------------------------------------------------------------


def surface_to_dict(s):
    """
    JSON form ``{degree, scaling, coefficients: [{i, j, a}, ...]}`` in basis
    order. Floats are written with ``repr`` (17 significant digits at most),
    which reads back bit for bit.
    """
    return {
        'degree': s.degree,
        'scaling': s.scaling.to_dict() if s.scaling is not None else None,
        'coefficients': [{'i': int(i), 'j': int(j), 'a': float(a)}
                         for (i, j), a in zip(s.basis.terms, s.coefficients)],
    }
# -----------------------------------------------------------------------------------------------------------


def surface_from_dict(data):
    basis = monomial_basis(int(data['degree']))
    lookup = {(int(c['i']), int(c['j'])): float(c['a']) for c in data['coefficients']}
    missing = [t for t in basis.terms if t not in lookup]
    if missing or len(lookup) != len(basis):
        raise ConfigError('coefficient terms do not match the degree %d basis' % basis.degree)
    scaling = data.get('scaling')
    scaling = SurfaceScaling(**scaling) if scaling else None
    return PolynomialSurface(basis, [lookup[t] for t in basis.terms], scaling)
