# FDpy: distance functions over finite point sets in R^3.
# License: GNU-GPL Style.

from dataclasses import dataclass
import numbers

import numpy as np

from .errors import ConfigError
# -----------------------------------------------------------------------------------------------------------


def isnumeric(obj):
    """
    True for real scalars (python or numpy), False for anything else,
    booleans included.
    """
    if isinstance(obj, (bool, np.bool_)):
        return False
    return isinstance(obj, numbers.Real)
# -----------------------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class Point3:
    """
    A sample or query point in R^3.

    Attributes
    ----------
    x, y, z: float
        Coordinates, all finite, in shared (arbitrary) length units.

    Notes
    -----
    Equality and hashing are by coordinates, so a list of points can be
    treated as a set when adjoining query points to a sample.
    """
    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ('x', 'y', 'z'):
            val = getattr(self, name)
            if not isnumeric(val):
                raise ConfigError('Point3.%s must be a real number, got %r' % (name, val))
            val = float(val)
            if not np.isfinite(val):
                raise ConfigError('Point3.%s must be finite, got %r' % (name, val))
            object.__setattr__(self, name, val)

    @property
    def xy(self):
        return (self.x, self.y)

    def as_array(self):
        return np.array([self.x, self.y, self.z])

    def __iter__(self):
        return iter((self.x, self.y, self.z))
# -----------------------------------------------------------------------------------------------------------


def points_to_array(points):
    """
    Stack points into an (n x 3) array. An empty input gives a (0 x 3) array.
    """
    if len(points) == 0:
        return np.zeros((0, 3))
    return np.array([[p.x, p.y, p.z] for p in points], dtype=float)
# -----------------------------------------------------------------------------------------------------------


def array_to_points(arr):
    arr = np.asarray(arr, dtype=float).reshape((-1, 3))
    return [Point3(*row) for row in arr]
# -----------------------------------------------------------------------------------------------------------


def euclidean_distance(p1, p2):
    """3D Euclidean distance between two points."""
    return float(np.linalg.norm(p1.as_array() - p2.as_array()))
# -----------------------------------------------------------------------------------------------------------


def same_xy(p1, p2):
    return p1.x == p2.x and p1.y == p2.y
# -----------------------------------------------------------------------------------------------------------


def without(points, *excluded):
    """
    The points not equal to any of ``excluded``, in their original order.
    Every copy of an excluded point is dropped.
    """
    excl = set(excluded)
    return [p for p in points if p not in excl]
# -----------------------------------------------------------------------------------------------------------


def union(points, *extra):
    """
    Set union preserving order: ``points`` followed by the members of
    ``extra`` not already present.
    """
    out = list(points)
    seen = set(out)
    for p in extra:
        if p not in seen:
            out.append(p)
            seen.add(p)
    return out
