"""
Joint selection of the routing metric and CSMA/CA parameters.

An exhaustive search over the MAC parameter space and the routing metrics finds, for
every pair of reliability and delay constraints, the configuration with the least
maximum node power.
"""

from .problem import *
from .selector import *

# Public classes and functions. Order is reflected in documentation.
__all__ = [
    "SelectionProblem",
    "SelectionResult",
    "select",
    "feasibility_map",
    "INFEASIBLE",
    "MIN_Q_RMIN",
    "TIE_RTOL",
]

# Set correct module paths. Corrects links and module paths in documentation.
SelectionProblem.__module__ = "macaware.selector"
SelectionResult.__module__ = "macaware.selector"
