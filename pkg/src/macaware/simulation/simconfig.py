"""Configuration of a simulation run."""

import dataclasses
from typing import Iterable, Mapping, Optional

from macaware import utils
from macaware.mac import MacParams, PowerProfile, Timing
from macaware.metrics import MetricKind
from macaware.type import NodeIdType

__all__ = ["SimConfig", "ARRIVAL_PROCESSES"]

ARRIVAL_PROCESSES = ("periodic-jitter", "poisson")


@dataclasses.dataclass(frozen=True)
class SimConfig:
    """
    Configuration of one simulation run.

    Parameters
    ----------
    duration :
        Simulated time in seconds.
    seed :
        Seed of the random streams.
    mac :
        CSMA/CA parameters.
    timing :
        Radio timing constants.
    profile :
        Radio power profile.
    metric :
        Routing metric.
    traffic :
        Per-node generation rates overriding those of the topology.
    arrival :
        ``"periodic-jitter"`` (period :math:`1/\\lambda` with uniform relative jitter
        ``jitter``) or ``"poisson"``.
    jitter :
        Relative jitter of periodic arrivals.
    reselect_period :
        Seconds between two parent re-selections of a node. Nodes re-select at
        independent random phases. Back-pressure selects per packet instead.
    alpha_smoothing :
        Smoothing factor :math:`r` of the busy channel estimate.
    alpha_window :
        Number of CCAs per busy channel estimation window.
    etx_window :
        Number of acknowledgements of the windowed ETX estimate.
    queue_capacity :
        Capacity of the drop-tail transmit queue.
    warmup :
        Initial seconds excluded from packet statistics and power.
    interference :
        Interference sets overriding :meth:`Topology.interference_sets`.
    scripted_alpha :
        Per-node busy probability of a scripted interferer. Each CCA of the node is
        additionally busy with this probability, and each transmission additionally
        collides with probability ``alpha / t_tx``.
    record_estimates :
        Whether to record estimator values after every packet.
    """

    duration: float = 100.0
    seed: int = 0
    mac: MacParams = MacParams()
    timing: Timing = Timing()
    profile: PowerProfile = PowerProfile()
    metric: MetricKind = MetricKind("R_METRIC")
    traffic: Optional[Mapping[NodeIdType, float]] = None
    arrival: str = "periodic-jitter"
    jitter: float = 0.1
    reselect_period: float = 10.0
    alpha_smoothing: float = 0.9
    alpha_window: int = 10
    etx_window: int = 10
    queue_capacity: int = 8
    warmup: float = 0.0
    interference: Optional[Mapping[NodeIdType, Iterable[NodeIdType]]] = None
    scripted_alpha: Optional[Mapping[NodeIdType, float]] = None
    record_estimates: bool = False

    def __post_init__(self):
        if not self.duration > 0.0:
            raise ValueError(f"duration must be positive, got {self.duration}.")
        if not self.reselect_period > 0.0:
            raise ValueError(
                f"reselect_period must be positive, got {self.reselect_period}."
            )
        if not 0.0 < self.alpha_smoothing < 1.0:
            raise ValueError(
                f"alpha_smoothing must lie in (0, 1), got {self.alpha_smoothing}."
            )
        if self.arrival not in ARRIVAL_PROCESSES:
            raise ValueError(
                f"arrival must be one of {ARRIVAL_PROCESSES}, got {self.arrival!r}."
            )
        if not 0.0 <= self.jitter < 1.0:
            raise ValueError(f"jitter must lie in [0, 1), got {self.jitter}.")
        if not 0.0 <= self.warmup < self.duration:
            raise ValueError("warmup must lie in [0, duration).")
        utils.as_count(self.queue_capacity, "queue_capacity", lower=1)
        utils.as_count(self.alpha_window, "alpha_window", lower=1)
        utils.as_count(self.etx_window, "etx_window", lower=1)
        utils.as_count(self.seed, "seed")
        for node_id, alpha in (self.scripted_alpha or {}).items():
            utils.as_probability(alpha, f"scripted_alpha of node {node_id}")

    def replace(self, **changes) -> "SimConfig":
        return dataclasses.replace(self, **changes)
