"""Records of a simulation run and the report derived from them."""

import dataclasses
import json
import os
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from macaware.flowsolver import SOLUTION_COLUMNS
from macaware.mac import PowerProfile
from macaware.type import NodeIdType

__all__ = [
    "DROP_CAUSES",
    "STATES",
    "HopRecord",
    "PacketRecord",
    "NodeCounters",
    "SwitchEvent",
    "EstimateRecord",
    "SimTrace",
    "SimReport",
    "REPORT_COLUMNS",
]

DROP_CAUSES = ("access-failure", "retry-limit", "queue-overflow")
STATES = ("tx", "rx", "ack", "cca", "backoff", "idle")
REPORT_COLUMNS = SOLUTION_COLUMNS + ("switches",)


@dataclasses.dataclass
class HopRecord:
    node: NodeIdType
    parent: Optional[NodeIdType]
    attempts: int
    outcome: str


@dataclasses.dataclass
class PacketRecord:
    """
    Life of one generated packet.

    ``outcome`` is ``"delivered"``, one of :data:`DROP_CAUSES`, or ``"in-flight"`` for
    packets still queued when the run ends.
    """

    uid: int
    source: NodeIdType
    birth: float
    hops: List[HopRecord] = dataclasses.field(default_factory=list)
    outcome: str = "in-flight"
    delivery_time: Optional[float] = None
    drop_node: Optional[NodeIdType] = None

    @property
    def delay(self) -> float:
        if self.delivery_time is None:
            return np.nan
        return self.delivery_time - self.birth


@dataclasses.dataclass
class NodeCounters:
    """Radio counters of one node; state times in seconds."""

    node: NodeIdType
    tx_attempts: int = 0
    acked: int = 0
    collisions: int = 0
    cca_busy: int = 0
    cca_idle: int = 0
    handed_to_mac: int = 0
    control_frames: int = 0
    state_time: Dict[str, float] = dataclasses.field(
        default_factory=lambda: {state: 0.0 for state in STATES}
    )

    @property
    def busy_fraction(self) -> float:
        sensed = self.cca_busy + self.cca_idle
        return self.cca_busy / sensed if sensed else 0.0

    def power(self, profile: PowerProfile) -> float:
        """Average power over the accumulated time."""
        total = sum(self.state_time.values())
        if total <= 0.0:
            return np.nan
        energy = (
            profile.p_tx * self.state_time["tx"]
            + profile.p_rx * (self.state_time["rx"] + self.state_time["ack"])
            + profile.p_cca * self.state_time["cca"]
            + profile.p_backoff * self.state_time["backoff"]
            + profile.p_idle * self.state_time["idle"]
        )
        return energy / total


@dataclasses.dataclass(frozen=True)
class SwitchEvent:
    time: float
    node: NodeIdType
    old_parent: NodeIdType
    new_parent: NodeIdType


@dataclasses.dataclass(frozen=True)
class EstimateRecord:
    """Estimates of a node after it finished serving a packet."""

    time: float
    node: NodeIdType
    parent: NodeIdType
    alpha_hat: float
    alpha_reliability: float
    etx_reliability: float


def _jsonable(value):
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


@dataclasses.dataclass
class SimTrace:
    """
    Everything recorded during one run.

    Parameters
    ----------
    nodes :
        Node ids in topology order.
    root_id :
        Id of the sink.
    duration :
        Length of the statistics horizon in seconds, the run length minus the warmup.
    packets :
        Packets generated after the warmup.
    counters :
        Radio counters of every non-root node.
    switches :
        Parent switch events in time order.
    estimates :
        Estimator records, empty unless requested.
    final_parents :
        Parent of every non-root node at the end of the run.
    """

    nodes: Tuple[NodeIdType, ...]
    root_id: NodeIdType
    duration: float
    packets: List[PacketRecord]
    counters: Dict[NodeIdType, NodeCounters]
    switches: List[SwitchEvent]
    estimates: List[EstimateRecord]
    final_parents: Dict[NodeIdType, NodeIdType]

    def outcome_counts(self, source: NodeIdType) -> Dict[str, int]:
        """Generated packets of ``source`` broken down by outcome."""
        counts = {"generated": 0, "delivered": 0, "in-flight": 0}
        counts.update({cause: 0 for cause in DROP_CAUSES})
        for packet in self.packets:
            if packet.source == source:
                counts["generated"] += 1
                counts[packet.outcome] += 1
        return counts

    def switch_counts(self) -> Dict[NodeIdType, int]:
        counts = {node_id: 0 for node_id in self.nodes if node_id != self.root_id}
        for event in self.switches:
            counts[event.node] += 1
        return counts

    def estimate_series(self, node_id: NodeIdType) -> pd.DataFrame:
        """Estimator records of one node as a frame indexed by packet."""
        rows = [
            dataclasses.asdict(record)
            for record in self.estimates
            if record.node == node_id
        ]
        columns = [field.name for field in dataclasses.fields(EstimateRecord)]
        return pd.DataFrame(rows, columns=columns)

    def to_jsonl(self, path: Optional[os.PathLike] = None) -> str:
        """
        Dump packet, switch and estimate records as JSON lines.

        Every line carries a ``"record"`` field naming its kind. Non-finite numbers
        are written as ``null``.
        """
        lines = []
        for packet in self.packets:
            entry = {"record": "packet", **dataclasses.asdict(packet)}
            lines.append(entry)
        for event in self.switches:
            lines.append({"record": "switch", **dataclasses.asdict(event)})
        for estimate in self.estimates:
            entry = {
                key: _jsonable(value)
                for key, value in dataclasses.asdict(estimate).items()
            }
            lines.append({"record": "estimate", **entry})
        text = "".join(json.dumps(line, sort_keys=True) + "\n" for line in lines)
        if path is not None:
            with open(os.fspath(path), "w", encoding="utf-8") as file:
                file.write(text)
        return text


@dataclasses.dataclass(frozen=True)
class SimReport:
    """
    Per-node and network statistics of one run.

    Reliability is delivered over generated packets of a source. The delay averages
    delivered packets only. The frame has the columns of :data:`REPORT_COLUMNS`; the
    root row carries NaN statistics.
    """

    frame: pd.DataFrame
    root_id: NodeIdType

    @classmethod
    def from_trace(cls, trace: SimTrace, profile: PowerProfile) -> "SimReport":
        rows = []
        switches = trace.switch_counts()
        for node_id in trace.nodes:
            if node_id == trace.root_id:
                rows.append(
                    {
                        "node": node_id,
                        "q_pps": np.nan,
                        "alpha": np.nan,
                        "e2e_reliability": np.nan,
                        "e2e_delay_s": np.nan,
                        "power_w": np.nan,
                        "parent": "",
                        "switches": 0,
                    }
                )
                continue
            counts = trace.outcome_counts(node_id)
            delays = [
                packet.delay
                for packet in trace.packets
                if packet.source == node_id and packet.outcome == "delivered"
            ]
            counters = trace.counters[node_id]
            rows.append(
                {
                    "node": node_id,
                    "q_pps": counters.handed_to_mac / trace.duration,
                    "alpha": counters.busy_fraction,
                    "e2e_reliability": (
                        counts["delivered"] / counts["generated"]
                        if counts["generated"]
                        else np.nan
                    ),
                    "e2e_delay_s": float(np.mean(delays)) if delays else np.nan,
                    "power_w": counters.power(profile),
                    "parent": trace.final_parents[node_id],
                    "switches": switches[node_id],
                }
            )
        frame = pd.DataFrame(rows, columns=list(REPORT_COLUMNS))
        return cls(frame=frame, root_id=trace.root_id)

    @property
    def nodes(self) -> Tuple[NodeIdType, ...]:
        return tuple(self.frame["node"])

    def _non_root(self) -> pd.DataFrame:
        return self.frame[self.frame["node"] != self.root_id]

    @property
    def total_switches(self) -> int:
        return int(self.frame["switches"].sum())

    def summary(self) -> Dict[str, float]:
        """Network aggregates over non-root nodes with generated traffic."""
        rows = self._non_root()
        reliability = rows["e2e_reliability"].dropna()
        delay = rows["e2e_delay_s"].dropna()
        return {
            "avg_reliability": float(reliability.mean()),
            "min_reliability": float(reliability.min()),
            "avg_delay_s": float(delay.mean()),
            "max_delay_s": float(delay.max()),
            "max_power_w": float(rows["power_w"].max()),
            "switches": float(self.total_switches),
        }

    def to_csv(self, path: Optional[os.PathLike] = None) -> str:
        text = self.frame.to_csv(index=False)
        if path is not None:
            with open(os.fspath(path), "w", encoding="utf-8", newline="") as file:
                file.write(text)
        return text
