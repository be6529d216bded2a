"""A sensor node: traffic source, transmit queue and unslotted CSMA/CA."""

import collections
import dataclasses
from typing import TYPE_CHECKING, Counter, Deque, Optional, Union

import simpy

from macaware.simulation.estimators import NodeEstimators
from macaware.simulation.trace import HopRecord, NodeCounters, PacketRecord
from macaware.type import NodeIdType, RandomStateType

if TYPE_CHECKING:
    from macaware.simulation.simulation import Simulation

__all__ = ["Mote", "ControlFrame", "RADIO_PRECEDENCE"]

RADIO_PRECEDENCE = ("tx", "ack", "rx", "cca", "backoff")


@dataclasses.dataclass(frozen=True)
class ControlFrame:
    """Broadcast routing advertisement sent after a parent switch."""

    sender: NodeIdType


class Mote:
    """
    Non-root node of a simulation.

    The node runs two simpy processes: a traffic source and the MAC, which serves
    the FIFO queue one frame at a time. Every attempt starts with a random backoff of
    :math:`[0, 2^{BE} - 1]` slots, followed by a CCA that samples the channel at its
    start. A busy CCA raises :math:`BE` up to ``mb``; after ``m + 1`` busy CCAs the
    packet is dropped. An idle CCA is followed by the transmission and the
    acknowledgement wait. Lost frames are retransmitted up to ``n`` times.

    The radio is booked in exactly one state at a time. A frame addressed to the node
    keeps it in receive state for its airtime, whether it arrives or not, and for the
    acknowledgement when it is delivered. Own transmit, acknowledgement-wait, CCA and
    backoff periods take precedence as listed in :data:`RADIO_PRECEDENCE`; all
    remaining time is idle.

    Parameters
    ----------
    env :
        Simulation environment.
    node_id :
        Id of the node.
    sim :
        Simulation the node belongs to.
    rng :
        Random stream of the node.
    lambda_pps :
        Packet generation rate.
    parent :
        Initial parent.
    """

    def __init__(
        self,
        env: simpy.Environment,
        node_id: NodeIdType,
        sim: "Simulation",
        rng: RandomStateType,
        lambda_pps: float,
        parent: NodeIdType,
    ):
        config = sim.config
        self.env = env
        self.id = node_id
        self.sim = sim
        self.rng = rng
        self.lambda_pps = float(lambda_pps)
        self.parent = parent
        self.queue: Deque[Union[PacketRecord, ControlFrame]] = collections.deque()
        self.in_service = False
        self.counters = NodeCounters(node_id)
        self.estimators = NodeEstimators(
            r=config.alpha_smoothing,
            alpha_window=config.alpha_window,
            etx_window=config.etx_window,
        )
        self.scripted_alpha = float((config.scripted_alpha or {}).get(node_id, 0.0))
        self._wakeup: Optional[simpy.Event] = None
        self._claims: Counter[str] = collections.Counter()
        self._since = 0.0

    @property
    def backlog(self) -> int:
        """Data packets waiting or in service."""
        waiting = sum(1 for item in self.queue if isinstance(item, PacketRecord))
        return waiting + int(self.in_service)

    def start(self):
        if self.lambda_pps > 0.0:
            self.env.process(self.source())
        self.env.process(self.mac())

    @property
    def radio_state(self) -> str:
        """
        Current radio state.

        Of overlapping claims the first in :data:`RADIO_PRECEDENCE` wins.
        """
        for state in RADIO_PRECEDENCE:
            if self._claims[state]:
                return state
        return "idle"

    def enter(self, state: str):
        self._book()
        self._claims[state] += 1

    def leave(self, state: str):
        self._book()
        self._claims[state] -= 1

    def close(self):
        """Book the time up to now; state times then add up to the measured span."""
        self._book()

    def _book(self):
        now = self.env.now
        begin = max(self._since, self.sim.config.warmup)
        if now > begin:
            self.counters.state_time[self.radio_state] += now - begin
        self._since = now

    @property
    def _measuring(self) -> bool:
        return self.env.now >= self.sim.config.warmup

    def _interarrival(self) -> float:
        period = 1.0 / self.lambda_pps
        config = self.sim.config
        if config.arrival == "poisson":
            return self.rng.exponential(period)
        return period * (1.0 + self.rng.uniform(-config.jitter, config.jitter))

    def source(self):
        yield self.env.timeout(self.rng.uniform(0.0, 1.0 / self.lambda_pps))
        while True:
            packet = self.sim.new_packet(self.id)
            self.enqueue(packet)
            yield self.env.timeout(self._interarrival())

    def enqueue(self, item: Union[PacketRecord, ControlFrame]):
        if isinstance(item, ControlFrame):
            self.queue.appendleft(item)
        else:
            waiting = self.backlog - int(self.in_service)
            if waiting >= self.sim.config.queue_capacity:
                item.hops.append(HopRecord(self.id, None, 0, "queue-overflow"))
                self.sim.finish(item, "queue-overflow", self.id)
                return
            self.queue.append(item)
            if self._measuring:
                self.counters.handed_to_mac += 1
        if self._wakeup is not None and not self._wakeup.triggered:
            self._wakeup.succeed()

    def mac(self):
        while True:
            if not self.queue:
                self._wakeup = self.env.event()
                yield self._wakeup
                continue
            item = self.queue.popleft()
            if isinstance(item, ControlFrame):
                yield from self._broadcast()
            else:
                self.in_service = True
                yield from self._serve(item)
                self.in_service = False

    def _channel_access(self):
        """CSMA/CA access; the generator's value is whether an idle CCA was found."""
        params = self.sim.config.mac
        slot = self.sim.config.timing.slot
        exponent = params.m0
        for _ in range(params.m + 1):
            self.enter("backoff")
            yield self.env.timeout(int(self.rng.integers(0, 2**exponent)) * slot)
            self.leave("backoff")

            busy = self.sim.channel.is_busy(self.id)
            if self.scripted_alpha > 0.0 and self.rng.random() < self.scripted_alpha:
                busy = True
            if self._measuring:
                if busy:
                    self.counters.cca_busy += 1
                else:
                    self.counters.cca_idle += 1
            self.estimators.on_cca(busy)
            self.enter("cca")
            yield self.env.timeout(self.sim.config.timing.t_cca * slot)
            self.leave("cca")
            if not busy:
                return True
            exponent = min(exponent + 1, params.mb)
        return False

    def _broadcast(self):
        idle = yield from self._channel_access()
        if not idle:
            return
        timing = self.sim.config.timing
        self.enter("tx")
        tx = self.sim.channel.start(self.id, None, self.env.now, timing.airtime)
        yield self.env.timeout(timing.airtime)
        self.sim.channel.end(tx)
        self.leave("tx")
        if self._measuring:
            self.counters.control_frames += 1

    def _serve(self, packet: PacketRecord):
        timing = self.sim.config.timing
        parent = self.sim.parent_for_packet(self)
        p_bad = self.sim.topo.p_bad(self.id, parent)
        attempts = 0
        for _ in range(self.sim.config.mac.n + 1):
            idle = yield from self._channel_access()
            if not idle:
                self._complete(packet, parent, attempts, "access-failure")
                return
            attempts += 1
            if self._measuring:
                self.counters.tx_attempts += 1

            receiver = self.sim.motes.get(parent)
            self.enter("tx")
            if receiver is not None:
                receiver.enter("rx")
            tx = self.sim.channel.start(self.id, parent, self.env.now, timing.airtime)
            yield self.env.timeout(timing.airtime)
            self.sim.channel.end(tx)
            self.leave("tx")
            if receiver is not None:
                receiver.leave("rx")

            collided = tx.collided
            if self.scripted_alpha > 0.0:
                p_coll = min(1.0, self.scripted_alpha / timing.t_tx)
                collided = collided or self.rng.random() < p_coll
            delivered = not collided and self.rng.random() >= p_bad
            if collided and self._measuring:
                self.counters.collisions += 1

            # the parent answers delivered frames during the acknowledgement wait
            acking = receiver if delivered else None
            self.enter("ack")
            if acking is not None:
                acking.enter("rx")
            yield self.env.timeout(timing.t_ack * timing.slot)
            self.leave("ack")
            if acking is not None:
                acking.leave("rx")
            self.estimators.on_attempt(parent, delivered)
            if delivered:
                if self._measuring:
                    self.counters.acked += 1
                self._complete(packet, parent, attempts, "forwarded")
                self.sim.receive(packet, parent)
                return
        self._complete(packet, parent, attempts, "retry-limit")

    def _complete(
        self, packet: PacketRecord, parent: NodeIdType, attempts: int, outcome: str
    ):
        packet.hops.append(HopRecord(self.id, parent, attempts, outcome))
        if outcome != "forwarded":
            self.sim.finish(packet, outcome, self.id)
        self.sim.record_estimates(self, parent)
