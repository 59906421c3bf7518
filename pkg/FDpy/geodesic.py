# FDpy: distance functions over finite point sets in R^3.
# License: GNU-GPL Style.
"""
Shortest geodesics on polynomial Monge patches.

A path is a polyline of planar nodes (u_i, v_i) with fixed endpoints; its
length is the length of the lifted polyline (u_i, v_i, f(u_i, v_i)). The
interior nodes are moved to the equally spaced polyline of least
discrete energy by damped Newton steps, the node count is doubled until
the length settles, and the shortest of several seeded starts is kept.
"""

from dataclasses import dataclass, replace
import logging

import numpy as np
from scipy import linalg, sparse
from scipy.sparse import csgraph

from .errors import ConfigError, NumericRangeError, OffSurface
from .geometry_tools import euclidean_distance
from .poly_surface import (eval_surface, first_fundamental_form, lift_array, surface_gradient,
                           surface_hessian)

logger = logging.getLogger(__name__)

ON_SURFACE_TOL = 1e-6
# -----------------------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class GeodesicPath:
    """
    Discretized geodesic candidate.

    Attributes
    ----------
    nodes: numpy array
        (n x 2) planar nodes, n >= 2, endpoints fixed.

    length: float
        Length of the lifted polyline.

    converged: bool
        Gradient norm reached grad_tol * (1 + length).

    gradient_norm: float

    refinement_levels: int
        Node doublings performed after the coarse solve.

    message: str
        Termination reason of the last minimization.
    """
    nodes: np.ndarray
    length: float = 0.0
    converged: bool = False
    gradient_norm: float = np.inf
    refinement_levels: int = 0
    message: str = ''

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float).reshape((-1, 2))
        if nodes.shape[0] < 2:
            raise ConfigError('a path needs at least 2 nodes')
        nodes.flags.writeable = False
        object.__setattr__(self, 'nodes', nodes)

    @property
    def n_nodes(self):
        return self.nodes.shape[0]

    def reversed(self):
        return replace(self, nodes=self.nodes[::-1].copy())
# -----------------------------------------------------------------------------------------------------------


def initial_path(p1, p2, nodes):
    """
    Uniform straight segment from (p1.x, p1.y) to (p2.x, p2.y).

    The recorded length is the chord |p2 - p1|, the lower bound of every
    lifted path between the two points.
    """
    if nodes < 2:
        raise ConfigError('nodes must be >= 2')
    t = np.linspace(0.0, 1.0, int(nodes))[:, None]
    a = np.array([p1.x, p1.y])
    b = np.array([p2.x, p2.y])
    pts = (1.0 - t)*a + t*b
    pts[0] = a
    pts[-1] = b
    return GeodesicPath(pts, length=euclidean_distance(p1, p2))
# -----------------------------------------------------------------------------------------------------------


def _nodes_length(s, nodes):
    lifted = lift_array(s, nodes)
    return float(np.sum(np.linalg.norm(np.diff(lifted, axis=0), axis=1)))
# -----------------------------------------------------------------------------------------------------------


def path_length(s, path):
    """Length of the lifted polyline of ``path`` on ``s``."""
    return _nodes_length(s, path.nodes)
# -----------------------------------------------------------------------------------------------------------


def _length_and_grad(s, nodes):
    lifted = lift_array(s, nodes)
    seg = np.diff(lifted, axis=0)
    seglen = np.linalg.norm(seg, axis=1)
    unit = np.zeros_like(seg)
    nz = seglen > 0
    unit[nz] = seg[nz]/seglen[nz, None]
    # dL/dP_k = t_(k-1) - t_k for interior nodes
    dP = unit[:-1] - unit[1:]
    fx, fy = surface_gradient(s, nodes[1:-1, 0], nodes[1:-1, 1])
    grad = np.column_stack((dP[:, 0] + dP[:, 2]*fx, dP[:, 1] + dP[:, 2]*fy))
    return float(np.sum(seglen)), grad
# -----------------------------------------------------------------------------------------------------------


def path_length_gradient(s, path):
    """
    Gradient of the lifted length with respect to the interior nodes,
    as an (n-2 x 2) array.
    """
    return _length_and_grad(s, path.nodes)[1]
# -----------------------------------------------------------------------------------------------------------


def _energy_state(s, nodes):
    """
    Lifted nodes, discrete energy sum |P_(k+1) - P_k|^2 and lifted length.
    """
    lifted = lift_array(s, nodes)
    seg = np.diff(lifted, axis=0)
    energy = float(np.sum(seg*seg))
    length = float(np.sum(np.linalg.norm(seg, axis=1)))
    return lifted, energy, length
# -----------------------------------------------------------------------------------------------------------


def _energy_grad(s, nodes, lifted):
    """
    Energy gradient with respect to the interior nodes, 2 J_k^T r_k with
    r_k = 2 P_k - P_(k-1) - P_(k+1), together with r and the surface slopes.
    """
    r = 2*lifted[1:-1] - lifted[:-2] - lifted[2:]
    fx, fy = surface_gradient(s, nodes[1:-1, 0], nodes[1:-1, 1])
    fx, fy = np.atleast_1d(fx), np.atleast_1d(fy)
    grad = 2*np.column_stack((r[:, 0] + r[:, 2]*fx, r[:, 1] + r[:, 2]*fy))
    return grad, r, fx, fy
# -----------------------------------------------------------------------------------------------------------


def _energy_hessian_banded(s, nodes, r, fx, fy):
    """
    Energy Hessian in upper banded storage (``linalg.solveh_banded``) over
    the interleaved unknowns u_1, v_1, u_2, v_2, ...
    """
    fxx, fxy, fyy = (np.atleast_1d(h) for h in surface_hessian(s, nodes[1:-1, 0], nodes[1:-1, 1]))
    m = fx.shape[0]
    ab = np.zeros((4, 2*m))
    # node blocks 2 (2 I + 2 g_k g_k^T + r_k,z H_k)
    ab[3, 0::2] = 4*(1 + fx*fx) + 2*r[:, 2]*fxx
    ab[3, 1::2] = 4*(1 + fy*fy) + 2*r[:, 2]*fyy
    ab[2, 1::2] = 4*fx*fy + 2*r[:, 2]*fxy
    # node k against node k+1: -2 (I + g_k g_(k+1)^T)
    ab[2, 2::2] = -2*fy[:-1]*fx[1:]
    ab[1, 2::2] = -2*(1 + fx[:-1]*fx[1:])
    ab[1, 3::2] = -2*(1 + fy[:-1]*fy[1:])
    ab[0, 3::2] = -2*fx[:-1]*fy[1:]
    return ab
# -----------------------------------------------------------------------------------------------------------


def _newton_direction(ab, grad):
    """
    Solve H p = -g; an indefinite H is shifted along its diagonal until the
    Cholesky factorization succeeds.
    """
    g = grad.ravel()
    scale = max(float(np.max(np.abs(ab[3]))), 1.0)
    shift = 0.0
    for _ in range(12):
        trial = ab.copy()
        trial[3] += shift
        try:
            return -linalg.solveh_banded(trial, g)
        except linalg.LinAlgError:
            shift = 1e-8*scale if shift == 0.0 else 100.0*shift
    return -g/scale
# -----------------------------------------------------------------------------------------------------------


def _spacing_gradient_norm(grad, n, energy):
    """
    Norm of the gradient of sqrt((n-1) E), the length of an equally spaced
    polyline with energy E. At equal spacing it is the length gradient.
    """
    spaced = np.sqrt((n - 1)*energy)
    if spaced == 0.0:
        return 0.0
    return float((n - 1)*np.linalg.norm(grad)/(2.0*spaced))
# -----------------------------------------------------------------------------------------------------------


def minimize_path(s, path, cfg):
    """
    Move the interior nodes of ``path`` to the discrete geodesic between
    its fixed endpoints.

    Parameters
    ----------
    s: PolynomialSurface

    path: GeodesicPath
        Starting polyline; its endpoints stay fixed.

    cfg: GeodesicConfig

    Returns
    -------
    GeodesicPath
        ``converged`` is True when the gradient norm is at most
        grad_tol * (1 + length); a line search that cannot decrease the
        energy any further ends the run with ``message`` set to
        ``'line-search-stall'``.

    Notes
    -----
    The objective is the discrete energy sum |P_(k+1) - P_k|^2 of the lifted
    nodes. Its minimizers are the shortest polylines with equally spaced
    nodes, which keeps the problem well posed: the lifted length alone is
    flat when nodes slide along the path. Each iteration takes a Newton
    step from the banded Hessian and backtracks until the energy shows
    sufficient decrease. ``gradient_norm`` is the norm of the gradient of
    sqrt((n-1) E), which coincides with the length gradient at equal
    spacing.
    """
    nodes = np.array(path.nodes)
    n = nodes.shape[0]
    if n <= 2:
        length = _nodes_length(s, nodes)
        return replace(path, length=length, converged=True, gradient_norm=0.0,
                       message='no interior nodes')

    lifted, energy, length = _energy_state(s, nodes)
    iterations = 0
    while True:
        grad, r, fx, fy = _energy_grad(s, nodes, lifted)
        gnorm = _spacing_gradient_norm(grad, n, energy)
        if gnorm <= cfg.grad_tol*(1.0 + length):
            message = 'converged'
            break
        if iterations >= cfg.max_iter:
            message = 'iteration limit'
            break
        step = _newton_direction(_energy_hessian_banded(s, nodes, r, fx, fy), grad)
        slope = float(grad.ravel().dot(step))
        step = step.reshape((-1, 2))
        alpha = 1.0
        accepted = None
        for _ in range(60):
            trial = nodes.copy()
            trial[1:-1] += alpha*step
            try:
                state = _energy_state(s, trial)
            except NumericRangeError:
                state = None
            if state is not None and state[1] <= energy + 1e-4*alpha*slope:
                accepted = trial
                break
            alpha *= 0.5
        if accepted is None:
            message = 'line-search-stall'
            break
        nodes = accepted
        lifted, energy, length = state
        iterations += 1

    converged = message == 'converged'
    logger.debug('minimize_path: %d nodes, %d iterations, length %.15g, |g| %.3e (%s)',
                 n, iterations, length, gnorm, message)
    return replace(path, nodes=nodes, length=length, converged=converged,
                   gradient_norm=gnorm, message=message)
# -----------------------------------------------------------------------------------------------------------


def _restart_path(p1, p2, cfg, rng):
    base = initial_path(p1, p2, cfg.initial_nodes)
    t = np.linspace(0.0, 1.0, cfg.initial_nodes)
    delta = np.array([p2.x - p1.x, p2.y - p1.y])
    sep = np.linalg.norm(delta)
    normal = np.array([-delta[1], delta[0]])/sep
    coef = rng.uniform(-1.0, 1.0, size=3)
    bump = sum(c*np.sin((k + 1)*np.pi*t)/(k + 1) for k, c in enumerate(coef))
    nodes = base.nodes + cfg.restart_amplitude*sep*bump[:, None]*normal
    # sin(k pi) is not exactly zero in floating point
    nodes[0] = base.nodes[0]
    nodes[-1] = base.nodes[-1]
    return GeodesicPath(nodes, length=base.length)
# -----------------------------------------------------------------------------------------------------------


def _refine(path):
    old = path.nodes
    new = np.empty((2*old.shape[0] - 1, 2))
    new[::2] = old
    new[1::2] = 0.5*(old[:-1] + old[1:])
    return replace(path, nodes=new)
# -----------------------------------------------------------------------------------------------------------


def _check_on_surface(s, p):
    height = eval_surface(s, p.x, p.y)
    if abs(height - p.z) > ON_SURFACE_TOL*max(1.0, abs(p.z)):
        raise OffSurface('point (%g, %g, %g) is off the surface (f = %.12g)'
                         % (p.x, p.y, p.z, height))
# -----------------------------------------------------------------------------------------------------------


def geodesic_distance(s, p1, p2, cfg, initial=None):
    """
    Length of the shortest geodesic found between two surface points.

    Parameters
    ----------
    s: PolynomialSurface

    p1, p2: Point3
        Endpoints; both must lie on ``s``.

    cfg: GeodesicConfig

    initial: GeodesicPath, optional
        Warm start (oriented p1 -> p2). When given, the seeded restarts
        are skipped and refinement continues from its node count.

    Returns
    -------
    length: float

    path: GeodesicPath
        Oriented from p1 to p2. ``converged`` False flags a best-effort
        result.

    Notes
    -----
    The computation always runs from the lexicographically smaller planar
    endpoint, so swapping p1 and p2 gives the same length bit for bit.
    """
    _check_on_surface(s, p1)
    _check_on_surface(s, p2)
    if p1.x == p2.x and p1.y == p2.y:
        path = initial_path(p1, p2, 2)
        return 0.0, replace(path, length=0.0, converged=True, gradient_norm=0.0,
                            message='coincident endpoints')

    flip = (p2.x, p2.y) < (p1.x, p1.y)
    a, b = (p2, p1) if flip else (p1, p2)

    if initial is not None:
        warm = initial.reversed() if flip else initial
        candidates = [minimize_path(s, warm, cfg)]
    else:
        candidates = [minimize_path(s, initial_path(a, b, cfg.initial_nodes), cfg)]
        rng = np.random.default_rng(cfg.seed)
        for _ in range(cfg.restarts):
            candidates.append(minimize_path(s, _restart_path(a, b, cfg, rng), cfg))
    best = min(candidates, key=lambda c: c.length)

    levels = 0
    while 2*best.n_nodes - 1 <= cfg.max_nodes:
        fine = minimize_path(s, _refine(best), cfg)
        levels += 1
        change = abs(fine.length - best.length)/max(fine.length, np.finfo(float).tiny)
        best = fine
        if change <= cfg.refine_tol:
            break
    best = replace(best, refinement_levels=levels)
    if not best.converged:
        logger.warning('geodesic between (%g, %g) and (%g, %g) not converged: |g| = %.3e (%s)',
                       a.x, a.y, b.x, b.y, best.gradient_norm, best.message)
    if flip:
        best = best.reversed()
    return best.length, best
# -----------------------------------------------------------------------------------------------------------


def _christoffel(s, u, v):
    """
    Christoffel symbols of the first fundamental form, with the metric
    derivatives taken by central differences.
    """
    hu = 1e-5*(1.0 + np.abs(u))
    hv = 1e-5*(1.0 + np.abs(v))
    E, F, G = first_fundamental_form(s, u, v)
    Ep, Fp, Gp = first_fundamental_form(s, u + hu, v)
    Em, Fm, Gm = first_fundamental_form(s, u - hu, v)
    Eu, Fu, Gu = (Ep - Em)/(2*hu), (Fp - Fm)/(2*hu), (Gp - Gm)/(2*hu)
    Ep, Fp, Gp = first_fundamental_form(s, u, v + hv)
    Em, Fm, Gm = first_fundamental_form(s, u, v - hv)
    Ev, Fv, Gv = (Ep - Em)/(2*hv), (Fp - Fm)/(2*hv), (Gp - Gm)/(2*hv)
    den = 2.0*(E*G - F*F)
    g111 = (G*Eu - 2*F*Fu + F*Ev)/den
    g211 = (2*E*Fu - E*Ev - F*Eu)/den
    g112 = (G*Ev - F*Gu)/den
    g212 = (E*Gu - F*Ev)/den
    g122 = (2*G*Fv - G*Gu - F*Gv)/den
    g222 = (E*Gv - 2*F*Fv + F*Gu)/den
    return (E, F, G), (g111, g112, g122), (g211, g212, g222)
# -----------------------------------------------------------------------------------------------------------


def geodesic_residual(s, path):
    """
    Largest discrete geodesic-equation residual over the interior nodes.

    With t in [0, 1] the uniform node parameter, the residual at a node is
    the normal (in the surface metric) part of x'' + Gamma(x', x'),
    divided by |x'|^2: a geodesic-curvature estimate in inverse length
    units, zero for an exact geodesic.
    """
    nodes = path.nodes
    if nodes.shape[0] < 3:
        raise ConfigError('the residual needs at least 3 nodes')
    h = 1.0/(nodes.shape[0] - 1)
    d1 = (nodes[2:] - nodes[:-2])/(2*h)
    d2 = (nodes[2:] - 2*nodes[1:-1] + nodes[:-2])/(h*h)
    u, v = nodes[1:-1, 0], nodes[1:-1, 1]
    (E, F, G), g1, g2 = _christoffel(s, u, v)
    du, dv = d1[:, 0], d1[:, 1]
    acc_u = d2[:, 0] + g1[0]*du*du + 2*g1[1]*du*dv + g1[2]*dv*dv
    acc_v = d2[:, 1] + g2[0]*du*du + 2*g2[1]*du*dv + g2[2]*dv*dv

    def inner(a1, a2, b1, b2):
        return E*a1*b1 + F*(a1*b2 + a2*b1) + G*a2*b2

    vv = inner(du, dv, du, dv)
    safe = np.where(vv > 0, vv, 1.0)
    along = inner(acc_u, acc_v, du, dv)/safe
    nu = acc_u - along*du
    nv = acc_v - along*dv
    normal = np.sqrt(np.maximum(inner(nu, nv, nu, nv), 0.0))
    res = np.where(vv > 0, normal/safe, 0.0)
    return float(np.max(res))
# -----------------------------------------------------------------------------------------------------------


def mesh_geodesic_length(s, p1, p2, bounds=(-1.5, 1.5, -1.5, 1.5), n=400):
    """
    Shortest-path length between p1 and p2 over an 8-connected n x n grid
    lifted onto ``s``; edge weights are the lifted chord lengths.

    The endpoints are snapped to the nearest grid nodes, so choose ``n``
    with the endpoints on the grid for an upper bound of the geodesic.

    Returns
    -------
    length: float
    """
    xmin, xmax, ymin, ymax = bounds
    xs = np.linspace(xmin, xmax, n)
    ys = np.linspace(ymin, ymax, n)
    X, Y = np.meshgrid(xs, ys, indexing='ij')
    Z = eval_surface(s, X, Y)
    P = np.stack((X, Y, Z), axis=-1)
    idx = np.arange(n*n).reshape((n, n))
    rows, cols, wts = [], [], []
    for di, dj in ((1, 0), (0, 1), (1, 1), (1, -1)):
        i0 = slice(0, n - di)
        i1 = slice(di, n)
        j0 = slice(max(0, -dj), n - max(0, dj))
        j1 = slice(max(0, dj), n - max(0, -dj))
        w = np.linalg.norm(P[i1, j1] - P[i0, j0], axis=-1)
        rows.append(idx[i0, j0].ravel())
        cols.append(idx[i1, j1].ravel())
        wts.append(w.ravel())
    graph = sparse.csr_matrix((np.concatenate(wts), (np.concatenate(rows), np.concatenate(cols))),
                              shape=(n*n, n*n))

    def nearest(p):
        return idx[int(np.argmin(np.abs(xs - p.x))), int(np.argmin(np.abs(ys - p.y)))]

    src, dst = nearest(p1), nearest(p2)
    dist = csgraph.dijkstra(graph, directed=False, indices=src)
    return float(dist[dst])
# -----------------------------------------------------------------------------------------------------------


def path_to_dict(path):
    return {
        'nodes': path.nodes.tolist(),
        'length': float(path.length),
        'converged': bool(path.converged),
        'gradient_norm': float(path.gradient_norm),
        'refinement_levels': int(path.refinement_levels),
    }
