"""
Command line experiment runner.

Subcommands ``solve``, ``simulate``, ``select``, ``compare`` and ``gen-topology``
write CSV (and JSON-lines traces) for a topology file or a packaged fixture. Exit
codes are 0 on success, 1 on invalid input and 2 on numeric non-convergence.
"""

from .commands import *
from .config import *
from .main import *

# Public classes and functions. Order is reflected in documentation.
__all__ = [
    "main",
    "build_parser",
    "ExperimentConfig",
    "cmd_solve",
    "cmd_simulate",
    "cmd_compare",
    "cmd_select",
    "cmd_gen_topology",
    "COMMANDS",
    "EXIT_OK",
    "EXIT_INPUT_ERROR",
    "EXIT_NOT_CONVERGED",
    "parse_assignments",
    "parse_grid",
    "parse_space",
    "parse_sweep",
    "parse_metrics",
]

# Set correct module paths. Corrects links and module paths in documentation.
ExperimentConfig.__module__ = "macaware.cli"
