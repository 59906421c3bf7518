# FDpy: distance functions over finite point sets in R^3.
# License: GNU-GPL Style.
"""
Exceptions raised by FDpy.

Every exception carries an ``exit_code`` which the command line maps to the
process exit status, and ``to_dict`` which gives the machine readable error
object written by the command line on failure.
"""


class FDError(Exception):
    """Base class of all FDpy errors."""
    exit_code = 1
    kind = 'error'

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self):
        out = {'error': self.kind, 'message': self.message}
        for key, val in self.details.items():
            if isinstance(val, (str, int, float, bool, list, tuple)) or val is None:
                out[key] = val
        return out
# -----------------------------------------------------------------------------------------------------------


class ConfigError(FDError, ValueError):
    kind = 'config'
# -----------------------------------------------------------------------------------------------------------


class NumericRangeError(FDError, ArithmeticError):
    """Evaluation produced a non-finite value."""
    kind = 'numeric-range'
# -----------------------------------------------------------------------------------------------------------


class SingularSystem(FDError):
    """
    The assembled least-squares system is rank deficient.

    Attributes
    ----------
    system: FitSystem
        The system whose numerical rank is below its dimension.
    """
    exit_code = 3
    kind = 'singular'

    def __init__(self, message, system=None, **details):
        if system is not None:
            details.setdefault('rank', int(system.rank))
            details.setdefault('dim', int(system.dim))
            details.setdefault('degree', int(system.degree))
        super().__init__(message, **details)
        self.system = system
# -----------------------------------------------------------------------------------------------------------


class AllSingular(SingularSystem):
    kind = 'all-singular'
# -----------------------------------------------------------------------------------------------------------


class NoConvergence(FDError):
    """
    The perturbation schedule ran out of steps.

    ``steps`` and ``lengths`` hold the diagnostics of the attempted schedule.
    """
    exit_code = 4
    kind = 'no-convergence'

    def __init__(self, message, steps=0, lengths=(), **details):
        super().__init__(message, steps=int(steps), lengths=[float(v) for v in lengths], **details)
        self.steps = int(steps)
        self.lengths = list(lengths)
# -----------------------------------------------------------------------------------------------------------


class VerticalPair(FDError):
    """Two points share planar coordinates but not heights: no graph z = f(x, y) holds both."""
    exit_code = 5
    kind = 'vertical-pair'
# -----------------------------------------------------------------------------------------------------------


class OffSurface(FDError):
    kind = 'off-surface'
# -----------------------------------------------------------------------------------------------------------


class IncompleteMatrix(FDError):
    kind = 'incomplete-matrix'
# -----------------------------------------------------------------------------------------------------------


class ParseError(FDError):
    exit_code = 2
    kind = 'parse'

    def __init__(self, message, row=None, **details):
        super().__init__(message, row=row, **details)
        self.row = row
# -----------------------------------------------------------------------------------------------------------


class EmptyInput(ParseError):
    kind = 'empty-input'
