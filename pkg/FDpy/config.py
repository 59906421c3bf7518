# FDpy: distance functions over finite point sets in R^3.
# License: GNU-GPL Style.
"""
Run configuration.

``GeodesicConfig`` and ``PerturbationSchedule`` parameterize the geodesic
solver and the singular-system resolver; ``RunConfig`` bundles them with
the fit degree and the command-line switches.
"""

from dataclasses import dataclass, field, replace

from .errors import ConfigError
from .tools import pair_seed
# -----------------------------------------------------------------------------------------------------------


def _require(cond, message):
    if not cond:
        raise ConfigError(message)
# -----------------------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class GeodesicConfig:
    """
    Parameters of the discrete geodesic solver.

    Attributes
    ----------
    initial_nodes: int
        Nodes of the coarsest path (>= 3).

    max_nodes: int
        Refinement stops once the node count would exceed this.

    grad_tol: float
        Converged when ||grad L|| <= grad_tol * (1 + L).

    refine_tol: float
        Refinement stops when the relative length change of one doubling
        is at or below this.

    restarts: int
        Perturbed initial paths tried besides the straight one.

    restart_amplitude: float
        Bump amplitude as a fraction of the planar endpoint separation.

    seed: int
        Seed of the restart bump generator.

    max_iter: int
        Iteration cap of one path minimization.
    """
    initial_nodes: int = 65
    max_nodes: int = 1025
    grad_tol: float = 1e-8
    refine_tol: float = 1e-7
    restarts: int = 3
    restart_amplitude: float = 0.1
    seed: int = 0
    max_iter: int = 20000

    def __post_init__(self):
        _require(self.initial_nodes >= 3, 'initial_nodes must be >= 3')
        _require(self.max_nodes >= self.initial_nodes, 'max_nodes must be >= initial_nodes')
        _require(self.grad_tol > 0 and self.refine_tol > 0, 'tolerances must be positive')
        _require(self.restarts >= 0, 'restarts must be >= 0')
        _require(self.restart_amplitude >= 0, 'restart_amplitude must be >= 0')
        _require(self.max_iter >= 1, 'max_iter must be >= 1')
# -----------------------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class PerturbationSchedule:
    """
    Displacement schedule eps_i = epsilon0 * decay**i for singular systems.

    ``shift`` enables the vanishing eps_i**2 coefficient shift on steps
    whose displaced system is still singular; without it such steps are
    skipped.
    """
    epsilon0: float = 1e-2
    decay: float = 0.5
    max_steps: int = 40
    seed: int = 0
    length_tol: float = 1e-6
    coeff_tol: float = 1e-6
    shift: bool = True

    def __post_init__(self):
        _require(self.epsilon0 > 0, 'epsilon0 must be positive')
        _require(0 < self.decay < 1, 'decay must lie in (0, 1)')
        _require(self.max_steps >= 2, 'max_steps must be >= 2')
        _require(self.length_tol > 0 and self.coeff_tol > 0, 'tolerances must be positive')

    def epsilon(self, step):
        return self.epsilon0*self.decay**step
# -----------------------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    """
    Everything a distance computation needs besides the points.

    ``output_format`` is ``'csv'`` or ``'json'``.
    """
    degree: int = 2
    geodesic: GeodesicConfig = field(default_factory=GeodesicConfig)
    perturbation: PerturbationSchedule = field(default_factory=PerturbationSchedule)
    scaling: bool = False
    master_seed: int = 0
    parallel: bool = False
    output_format: str = 'json'

    def __post_init__(self):
        _require(not isinstance(self.degree, bool) and int(self.degree) == self.degree
                 and self.degree >= 1, 'degree must be an integer >= 1')
        _require(isinstance(self.geodesic, GeodesicConfig), 'geodesic must be a GeodesicConfig')
        _require(isinstance(self.perturbation, PerturbationSchedule),
                 'perturbation must be a PerturbationSchedule')
        _require(self.output_format in ('csv', 'json'), 'output_format must be csv or json')

    def for_pair(self, i, j):
        """Copy with nested seeds derived from (master_seed, i, j)."""
        seed = pair_seed(self.master_seed, i, j)
        return replace(self,
                       geodesic=replace(self.geodesic, seed=seed),
                       perturbation=replace(self.perturbation, seed=seed))

    @classmethod
    def from_args(cls, args):
        """
        Build from an ``argparse.Namespace`` produced by ``FDpy.cli``.
        Missing attributes keep their defaults.
        """
        gdef = GeodesicConfig()
        pdef = PerturbationSchedule()

        def get(name, default):
            val = getattr(args, name, None)
            return default if val is None else val

        seed = int(get('seed', 0))
        geo = GeodesicConfig(
            initial_nodes=int(get('nodes', gdef.initial_nodes)),
            max_nodes=int(get('max_nodes', gdef.max_nodes)),
            grad_tol=float(get('grad_tol', gdef.grad_tol)),
            refine_tol=float(get('refine_tol', gdef.refine_tol)),
            restarts=gdef.restarts,
            restart_amplitude=gdef.restart_amplitude,
            seed=seed,
            max_iter=gdef.max_iter)
        pert = PerturbationSchedule(
            epsilon0=float(get('eps0', pdef.epsilon0)),
            decay=float(get('decay', pdef.decay)),
            max_steps=int(get('max_steps', pdef.max_steps)),
            seed=seed)
        return cls(degree=int(get('degree', cls.degree)),
                   geodesic=geo,
                   perturbation=pert,
                   scaling=get('scale', 'off') == 'on',
                   master_seed=seed,
                   parallel=get('parallel', 'off') == 'on',
                   output_format=get('format', cls.output_format))
