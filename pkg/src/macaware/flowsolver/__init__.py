"""
Flow-balance fixed point of the MAC/routing loop.

Traffic :math:`Q`, busy channel probabilities :math:`\\alpha`, link reliabilities
:math:`R` and the parent selection :math:`M` depend on each other. The solver iterates
them to a fixed point and extracts end-to-end reliability, delay and node power.
"""

from .flowbalance import *
from .flowsolver import *
from .networksolution import *
from .networksolver import *

# Public classes and functions. Order is reflected in documentation.
__all__ = [
    "solve_network",
    "evaluate_configuration",
    "check_constraints",
    "Constraints",
    "Evaluation",
    "NetworkSolution",
    "SOLUTION_COLUMNS",
    "FlowBalanceSolver",
    "traffic_fixed_point",
    "alpha_from_traffic",
]

# Set correct module paths. Corrects links and module paths in documentation.
NetworkSolution.__module__ = "macaware.flowsolver"
FlowBalanceSolver.__module__ = "macaware.flowsolver"
