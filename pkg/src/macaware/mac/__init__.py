"""
Closed-form per-link performance of the unslotted IEEE 802.15.4 CSMA/CA.

Loss, reliability, service and queueing delay and power of a sender as functions of
its busy channel probability, the link's bad channel probability and the CSMA/CA
parameters.
"""

from ._params import *
from .estimation import *
from .linkreliability import *
from .montecarlo import *
from .servicetime import *

# Public classes and functions. Order is reflected in documentation.
__all__ = [
    "MacParams",
    "Timing",
    "PowerProfile",
    "collision_probability",
    "attempt_loss",
    "access_failure_probability",
    "retry_exhaustion_probability",
    "link_reliability",
    "LinkState",
    "link_state",
    "expected_service_delay",
    "service_time_moments",
    "expected_queueing_delay",
    "node_power",
    "update_alpha_estimate",
    "LinkOutcomeCounts",
    "sample_link_outcomes",
]

# Set correct module paths. Corrects links and module paths in documentation.
MacParams.__module__ = "macaware.mac"
Timing.__module__ = "macaware.mac"
PowerProfile.__module__ = "macaware.mac"
LinkState.__module__ = "macaware.mac"
