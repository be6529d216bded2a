"""
macaware
========
MAC-aware routing analysis for IEEE 802.15.4 networks.
  1. Closed-form CSMA/CA link reliability, delay and power
  2. Reliability- and load-aware parent selection for RPL-style DODAGs
  3. Flow-balance fixed point of the MAC/routing loop
  4. Discrete-event simulation with online metric estimation
  5. Constrained MAC parameter selection
and a command line experiment runner.


Available subpackages and modules
---------------------------------
mac
    Unslotted CSMA/CA link model.
topology
    Network description, DODAG construction and fixtures.
metrics
    Parent selection rules and the selection matrix.
flowsolver
    Flow-balance fixed point and end-to-end performance.
simulation
    Discrete-event simulator and online estimators.
selector
    Exhaustive search over MAC parameters and routing metrics.
cli
    Command line interface.
"""
from importlib.metadata import PackageNotFoundError, version

from . import cli, flowsolver, mac, metrics, selector, simulation, topology, utils
from .flowsolver import NetworkSolution, evaluate_configuration, solve_network
from .mac import MacParams, PowerProfile, Timing
from .topology import Topology, build_dodag, load_topology

try:
    __version__ = version(__name__)
except PackageNotFoundError:
    __version__ = "unknown"
finally:
    del version, PackageNotFoundError
