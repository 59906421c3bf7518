# FDpy: distance functions over finite point sets in R^3.
# License: GNU-GPL Style.
# For each pair of points FDpy fits a polynomial surface through the pair that
# is least-squares over the remaining points, and measures the geodesic
# between the pair on that surface.

__version__ = '0.1.0'

from . import errors
from . import tools
from . import geometry_tools
from . import poly_surface
from . import config
from . import geodesic
from . import surface_fit
from . import distance
from . import routing
from . import io_tools
