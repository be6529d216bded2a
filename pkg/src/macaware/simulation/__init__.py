"""
Discrete-event simulation of unslotted CSMA/CA with online parent selection.

The simulator validates the analytical model: nodes run the CSMA/CA state machine on
a shared channel, estimate their busy channel probability and link quality online,
and periodically re-select their parent with the configured routing metric.
"""

from .channel import *
from .estimators import *
from .mote import *
from .simconfig import *
from .simulation import *
from .trace import *

# Public classes and functions. Order is reflected in documentation.
__all__ = [
    "SimConfig",
    "ARRIVAL_PROCESSES",
    "run_simulation",
    "replicate",
    "ReplicationSummary",
    "periodic_reselection",
    "Simulation",
    "Mote",
    "ControlFrame",
    "RADIO_PRECEDENCE",
    "Channel",
    "Transmission",
    "NodeEstimators",
    "CcaEvent",
    "AckEvent",
    "EstimateSnapshot",
    "online_estimators_step",
    "convergence_index",
    "steady_state_variance",
    "SimTrace",
    "SimReport",
    "PacketRecord",
    "HopRecord",
    "NodeCounters",
    "SwitchEvent",
    "EstimateRecord",
    "DROP_CAUSES",
    "STATES",
    "REPORT_COLUMNS",
]

# Set correct module paths. Corrects links and module paths in documentation.
SimConfig.__module__ = "macaware.simulation"
Simulation.__module__ = "macaware.simulation"
NodeEstimators.__module__ = "macaware.simulation"
SimTrace.__module__ = "macaware.simulation"
SimReport.__module__ = "macaware.simulation"
