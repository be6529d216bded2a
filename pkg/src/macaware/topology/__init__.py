"""
Network topologies and RPL-style DODAG construction.

A :class:`Topology` lists nodes with their generated traffic and directed links
towards the root with their bad channel probabilities. :func:`build_dodag` assigns
hop-count ranks and candidate parent sets.
"""

from .dodag import *
from .fixtures import *
from .generate import *
from .topology import *

# Public classes and functions. Order is reflected in documentation.
__all__ = [
    "NodeSpec",
    "LinkSpec",
    "Topology",
    "load_topology",
    "save_topology",
    "node_sort_key",
    "Dodag",
    "build_dodag",
    "generate_random_topology",
    "FIXTURES",
    "load_fixture",
]

# Set correct module paths. Corrects links and module paths in documentation.
Topology.__module__ = "macaware.topology"
Dodag.__module__ = "macaware.topology"
