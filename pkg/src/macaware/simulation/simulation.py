"""
Discrete-event simulation of a CSMA/CA network with online parent selection.

Nodes estimate their busy channel probability and link quality from their own radio
events and periodically re-select their parent with the configured metric. The
values a node advertises (end-to-end reliability, path ETX, forwarded traffic) are
computed from the current parent pointers and the estimates of all nodes, standing
in for the DIO messages of RPL.
"""

import dataclasses
import itertools
import logging
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd
import scipy.stats
import simpy

from macaware import utils
from macaware.mac import link_reliability
from macaware.metrics import (
    BACKPRESSURE,
    ETX,
    Q_METRIC,
    R_METRIC,
    select_parent_backpressure,
    select_parent_etx,
    select_parent_q_metric,
    select_parent_r_metric,
)
from macaware.simulation.channel import Channel
from macaware.simulation.mote import ControlFrame, Mote
from macaware.simulation.simconfig import SimConfig
from macaware.simulation.trace import (
    REPORT_COLUMNS,
    EstimateRecord,
    PacketRecord,
    SimReport,
    SimTrace,
    SwitchEvent,
)
from macaware.topology import Dodag, Topology
from macaware.type import IntArgType, NodeIdType

__all__ = [
    "Simulation",
    "run_simulation",
    "periodic_reselection",
    "replicate",
    "ReplicationSummary",
]

logger = logging.getLogger(__name__)


class Simulation:
    """
    One simulation run.

    Parameters
    ----------
    topo :
        Network topology.
    dodag :
        DODAG of ``topo`` providing the candidate parents.
    config :
        Simulation configuration.
    run_index :
        Index of the replication; selects independent random streams.
    """

    def __init__(
        self,
        topo: Topology,
        dodag: Dodag,
        config: SimConfig,
        run_index: IntArgType = 0,
    ):
        if dodag.node_ids != topo.node_ids:
            raise ValueError("DODAG and topology describe different node sets.")
        if config.traffic:
            topo = topo.with_traffic(config.traffic)
        unknown = set(config.scripted_alpha or {}) - set(topo.node_ids)
        if unknown:
            raise ValueError(f"scripted_alpha references unknown nodes {unknown}.")
        self.topo = topo
        self.dodag = dodag
        self.config = config
        self.run_index = utils.as_count(run_index, "run_index")
        self.env = simpy.Environment()

        interference = config.interference
        if interference is None:
            interference = topo.interference_sets()
        self.channel = Channel(interference)

        streams = utils.spawn_streams(config.seed, topo.n_nodes + 1, self.run_index)
        routing_rng = streams[-1]
        self.motes: Dict[NodeIdType, Mote] = {}
        for node_id, rng in zip(topo.node_ids, streams):
            if node_id == topo.root_id:
                continue
            candidates = dodag.candidates(node_id)
            parent = candidates[int(routing_rng.integers(0, len(candidates)))]
            self.motes[node_id] = Mote(
                self.env,
                node_id,
                self,
                rng,
                topo.node(node_id).lambda_pps,
                parent,
            )
        self._routing_rng = routing_rng
        self._packet_uid = itertools.count()
        self.packets: List[PacketRecord] = []
        self.switches: List[SwitchEvent] = []
        self.estimates: List[EstimateRecord] = []

    # Packet bookkeeping

    def new_packet(self, source: NodeIdType) -> PacketRecord:
        packet = PacketRecord(next(self._packet_uid), source, self.env.now)
        if self.env.now >= self.config.warmup:
            self.packets.append(packet)
        return packet

    def finish(self, packet: PacketRecord, outcome: str, node: NodeIdType):
        packet.outcome = outcome
        packet.drop_node = node

    def receive(self, packet: PacketRecord, receiver: NodeIdType):
        if receiver in self.motes:
            self.motes[receiver].enqueue(packet)
        else:
            packet.outcome = "delivered"
            packet.delivery_time = self.env.now

    def record_estimates(self, mote: Mote, parent: NodeIdType):
        if not self.config.record_estimates:
            return
        p_bad = self.topo.p_bad(mote.id, parent)
        self.estimates.append(
            EstimateRecord(
                time=self.env.now,
                node=mote.id,
                parent=parent,
                alpha_hat=mote.estimators.alpha,
                alpha_reliability=mote.estimators.alpha_reliability(
                    p_bad, self.config.mac, self.config.timing
                ),
                etx_reliability=mote.estimators.etx_reliability(parent),
            )
        )

    # Advertised routing information

    def parents(self) -> Dict[NodeIdType, NodeIdType]:
        return {node_id: mote.parent for node_id, mote in self.motes.items()}

    def estimated_reliability(self, node_id: NodeIdType, parent: NodeIdType) -> float:
        """Reliability of a link from the busy channel estimate of its sender."""
        return link_reliability(
            self.motes[node_id].estimators.alpha,
            self.topo.p_bad(node_id, parent),
            self.config.mac,
            self.config.timing,
        )

    def link_etx(self, node_id: NodeIdType, parent: NodeIdType) -> float:
        return self.motes[node_id].estimators.etx(
            parent, p_bad=self.topo.p_bad(node_id, parent)
        )

    def advertised_reliability(
        self, parents: Dict[NodeIdType, NodeIdType]
    ) -> Dict[NodeIdType, float]:
        path = {self.dodag.root_id: 1.0}
        for node_id in self.dodag.by_rank():
            if node_id in parents:
                parent = parents[node_id]
                link = self.estimated_reliability(node_id, parent)
                path[node_id] = link * path[parent]
        return path

    def advertised_etx(
        self, parents: Dict[NodeIdType, NodeIdType]
    ) -> Dict[NodeIdType, float]:
        path = {self.dodag.root_id: 0.0}
        for node_id in self.dodag.by_rank():
            if node_id in parents:
                parent = parents[node_id]
                path[node_id] = self.link_etx(node_id, parent) + path[parent]
        return path

    def advertised_traffic(
        self, parents: Dict[NodeIdType, NodeIdType]
    ) -> Dict[NodeIdType, float]:
        """Traffic every node hands to its MAC under the given parent pointers."""
        q = {
            node_id: self.topo.node(node_id).lambda_pps
            for node_id in self.topo.node_ids
        }
        for node_id in self.dodag.by_rank(descending=True):
            if node_id in parents:
                parent = parents[node_id]
                q[parent] += self.estimated_reliability(node_id, parent) * q[node_id]
        return q

    def choose_parent(self, mote: Mote) -> NodeIdType:
        """Parent ``mote`` selects with the current estimates."""
        node_id = mote.id
        candidates = self.dodag.candidates(node_id)
        tag = self.config.metric.tag
        parents = self.parents()
        if tag == BACKPRESSURE:
            lengths = {self.dodag.root_id: 0.0}
            lengths.update({i: float(m.backlog) for i, m in self.motes.items()})
            etx = {j: self.link_etx(node_id, j) for j in candidates}
            return select_parent_backpressure(
                node_id, candidates, lengths, etx, self.config.metric.bp_weight
            )
        if tag == ETX:
            link_etx = {j: self.link_etx(node_id, j) for j in candidates}
            downstream = self.advertised_etx(parents)
            return select_parent_etx(node_id, candidates, link_etx, downstream)

        link_R = {j: self.estimated_reliability(node_id, j) for j in candidates}
        downstream_R = self.advertised_reliability(parents)
        r_choice = select_parent_r_metric(node_id, candidates, link_R, downstream_R)
        if tag == R_METRIC:
            return r_choice
        if tag == Q_METRIC:
            profile = self.config.profile
            traffic = {}
            for j in candidates:
                trial = dict(parents)
                trial[node_id] = j
                q = self.advertised_traffic(trial)
                traffic[j] = (q[j], self.topo.node(j).lambda_pps)
            choice = select_parent_q_metric(
                node_id,
                candidates,
                traffic,
                {j: (profile.p_tx, profile.p_rx) for j in candidates},
                link_R,
                downstream_R,
                self.config.metric.rmin,
            )
            return r_choice if choice is None else choice
        raise ValueError(f"Unsupported metric {tag!r}.")

    def switch_parent(
        self, mote: Mote, new_parent: NodeIdType
    ) -> Optional[SwitchEvent]:
        if new_parent == mote.parent:
            return None
        event = SwitchEvent(self.env.now, mote.id, mote.parent, new_parent)
        logger.debug(
            "t=%.3f s: %s switches parent %s -> %s",
            event.time,
            mote.id,
            mote.parent,
            new_parent,
        )
        mote.parent = new_parent
        self.switches.append(event)
        if self.config.metric.tag == BACKPRESSURE:
            mote.enqueue(ControlFrame(mote.id))
        return event

    def parent_for_packet(self, mote: Mote) -> NodeIdType:
        if self.config.metric.tag == BACKPRESSURE:
            self.switch_parent(mote, self.choose_parent(mote))
        return mote.parent

    def _reselection(self, mote: Mote, phase: float):
        yield self.env.timeout(phase)
        while True:
            periodic_reselection(self.env.now, [mote], self)
            yield self.env.timeout(self.config.reselect_period)

    # Execution

    def run(self) -> Tuple[SimTrace, SimReport]:
        for mote in self.motes.values():
            mote.start()
        if self.config.metric.tag != BACKPRESSURE:
            for node_id in sorted(self.motes, key=self.topo.index):
                phase = self._routing_rng.uniform(0.0, self.config.reselect_period)
                self.env.process(self._reselection(self.motes[node_id], phase))
        self.env.run(until=self.config.duration)

        horizon = self.config.duration - self.config.warmup
        counters = {}
        for node_id, mote in self.motes.items():
            mote.close()
            counters[node_id] = mote.counters

        trace = SimTrace(
            nodes=self.topo.node_ids,
            root_id=self.topo.root_id,
            duration=horizon,
            packets=self.packets,
            counters=counters,
            switches=self.switches,
            estimates=self.estimates,
            final_parents=self.parents(),
        )
        report = SimReport.from_trace(trace, self.config.profile)
        summary = report.summary()
        logger.info(
            "run %d (%s, %.0f s): %d packets, avg reliability %.4f, %d switches",
            self.run_index,
            self.config.metric.tag,
            self.config.duration,
            len(self.packets),
            summary["avg_reliability"],
            report.total_switches,
        )
        return trace, report


def periodic_reselection(
    time: float, nodes: Iterable[Mote], sim: Simulation
) -> List[SwitchEvent]:
    """
    Let ``nodes`` re-select their parent with the current estimates.

    Parameters
    ----------
    time :
        Simulation time of the re-selection.
    nodes :
        Nodes due for re-selection, processed in order.
    sim :
        Running simulation providing the advertised routing information.

    Returns
    -------
    switches :
        Parent switches caused by the re-selection.
    """
    if time != sim.env.now:
        raise ValueError(f"Re-selection at {time} outside of simulation time.")
    events = []
    for mote in nodes:
        event = sim.switch_parent(mote, sim.choose_parent(mote))
        if event is not None:
            events.append(event)
    return events


def run_simulation(
    topo: Topology,
    dodag: Dodag,
    config: SimConfig,
    run_index: IntArgType = 0,
) -> Tuple[SimTrace, SimReport]:
    """
    Simulate a network.

    Parameters
    ----------
    topo :
        Network topology with traffic rates.
    dodag :
        DODAG of ``topo``.
    config :
        Simulation configuration.
    run_index :
        Replication index; runs with equal seed and index are identical.

    Returns
    -------
    trace :
        Packet, switch and estimate records.
    report :
        Per-node and network statistics.

    Examples
    --------
    >>> from macaware.simulation import SimConfig, run_simulation
    >>> from macaware.topology import build_dodag, load_fixture
    >>> topo = load_fixture("chain3")
    >>> trace, report = run_simulation(topo, build_dodag(topo), SimConfig(duration=5.0))
    >>> counts = trace.outcome_counts("V3")
    >>> counts["generated"] == sum(v for k, v in counts.items() if k != "generated")
    True
    """
    return Simulation(topo, dodag, config, run_index).run()


@dataclasses.dataclass(frozen=True)
class ReplicationSummary:
    """
    Statistics over independent replications.

    ``frame`` holds per node the mean of every report column and the half width of
    its 95% Student-t confidence interval (suffix ``_ci``). ``runs`` holds the
    network summary of every replication.
    """

    reports: Tuple[SimReport, ...]
    frame: pd.DataFrame
    runs: pd.DataFrame

    def summary(self) -> Dict[str, float]:
        """Mean network aggregates over the replications."""
        return {key: float(value) for key, value in self.runs.mean().items()}


def _t_halfwidth(values: pd.Series) -> float:
    values = values.dropna()
    if values.shape[0] < 2:
        return np.nan
    scale = scipy.stats.sem(values.to_numpy())
    return float(scipy.stats.t.ppf(0.975, values.shape[0] - 1) * scale)


def replicate(
    topo: Topology,
    dodag: Dodag,
    config: SimConfig,
    replications: IntArgType = 10,
) -> ReplicationSummary:
    """
    Independent replications of a simulation.

    Replication :math:`k` uses the random streams derived from ``(config.seed, k)``.

    Returns
    -------
    summary :
        Per-node means with 95% confidence half widths and per-run aggregates.
    """
    replications = utils.as_count(replications, "replications", lower=1)
    reports = tuple(
        run_simulation(topo, dodag, config, run_index=k)[1]
        for k in range(replications)
    )
    stacked = pd.concat([report.frame for report in reports], ignore_index=True)
    stats = [c for c in REPORT_COLUMNS if c not in ("node", "parent")]
    rows = []
    for node_id in topo.node_ids:
        group = stacked[stacked["node"] == node_id]
        row = {"node": node_id}
        for column in stats:
            values = group[column].astype(float)
            row[column] = float(values.mean()) if values.notna().any() else np.nan
            row[f"{column}_ci"] = _t_halfwidth(values)
        rows.append(row)
    frame = pd.DataFrame(rows)
    runs = pd.DataFrame([report.summary() for report in reports])
    return ReplicationSummary(reports=reports, frame=frame, runs=runs)
