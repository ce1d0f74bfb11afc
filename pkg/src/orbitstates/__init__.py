"""Localized states on Lie groups: positive-definite functions, finite GNS
representations, induced actions, coadjoint-orbit sup checks, and spectral
measure estimation for four families (Heisenberg, its one-dimensional
central extension, the Euclidean motion group, SU(2)/torus)."""

from . import gns, groups, induced, orbits, spectral, states, tolerances
from .tolerances import DEFAULT

__version__ = "0.1.0"
__all__ = ["gns", "groups", "induced", "orbits", "spectral", "states",
           "tolerances", "DEFAULT", "__version__"]
