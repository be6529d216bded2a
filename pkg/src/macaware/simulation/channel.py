"""Shared radio channel with binary audibility."""

import dataclasses
import itertools
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional

from macaware.type import NodeIdType

__all__ = ["Transmission", "Channel"]


@dataclasses.dataclass
class Transmission:
    """
    Frame on the air.

    ``receiver`` is ``None`` for broadcast control frames. ``collided`` is set as soon
    as another audible transmission overlaps the frame at its receiver.
    """

    uid: int
    sender: NodeIdType
    receiver: Optional[NodeIdType]
    start: float
    end: float
    collided: bool = False


class Channel:
    """
    Single shared channel.

    A node senses the channel busy while some node of its interference set transmits.
    A frame addressed to :math:`j` collides if it overlaps in time with a transmission
    of a node in :math:`I(j) \\cup \\{j\\}`. Collisions are marked symmetrically when
    the later of two overlapping frames starts, so every overlap is detected.

    Parameters
    ----------
    interference :
        Interference set :math:`I(i)` of every node.
    """

    def __init__(self, interference: Mapping[NodeIdType, Iterable[NodeIdType]]):
        self._audible: Dict[NodeIdType, FrozenSet[NodeIdType]] = {
            node_id: frozenset(members) for node_id, members in interference.items()
        }
        self._active: Dict[int, Transmission] = {}
        self._uid = itertools.count()
        self.n_transmissions = 0
        self.n_collided = 0

    def audible_at(self, node_id: NodeIdType) -> FrozenSet[NodeIdType]:
        return self._audible.get(node_id, frozenset())

    @property
    def active(self) -> List[Transmission]:
        return list(self._active.values())

    def is_busy(self, node_id: NodeIdType) -> bool:
        """Whether a CCA of ``node_id`` finds the channel occupied."""
        audible = self.audible_at(node_id)
        return any(tx.sender in audible for tx in self._active.values())

    def _interferes(self, tx: Transmission, other: Transmission) -> bool:
        if tx.receiver is None:
            return False
        return other.sender == tx.receiver or other.sender in self.audible_at(
            tx.receiver
        )

    def start(
        self,
        sender: NodeIdType,
        receiver: Optional[NodeIdType],
        now: float,
        airtime: float,
    ) -> Transmission:
        """Put a frame on the air and mark collisions with overlapping frames."""
        tx = Transmission(next(self._uid), sender, receiver, now, now + airtime)
        for other in self._active.values():
            if self._interferes(tx, other):
                tx.collided = True
            if self._interferes(other, tx):
                other.collided = True
        self._active[tx.uid] = tx
        self.n_transmissions += 1
        return tx

    def end(self, tx: Transmission):
        """Take a frame off the air."""
        del self._active[tx.uid]
        if tx.collided:
            self.n_collided += 1
