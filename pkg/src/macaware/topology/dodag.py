"""Destination-oriented DAG: ranks and candidate parent sets."""

import dataclasses
from typing import Dict, Iterator, List, Mapping, Tuple

import networkx as nx

from macaware.topology.topology import Topology, node_sort_key
from macaware.type import NodeIdType

__all__ = ["Dodag", "build_dodag"]


@dataclasses.dataclass(frozen=True)
class Dodag:
    """
    Ranks and candidate parent sets of a DODAG.

    Parameters
    ----------
    root_id :
        Id of the root.
    rank :
        Hop distance of every node to the root.
    parent_set :
        Candidate parents of every non-root node, in ascending id order. Every
        candidate has strictly smaller rank than the node itself.
    """

    root_id: NodeIdType
    rank: Mapping[NodeIdType, int]
    parent_set: Mapping[NodeIdType, Tuple[NodeIdType, ...]]

    def __post_init__(self):
        if self.rank.get(self.root_id) != 0:
            raise ValueError("The root must have rank 0.")
        for node_id, candidates in self.parent_set.items():
            if node_id == self.root_id:
                continue
            if not candidates:
                raise ValueError(f"Node {node_id} has no candidate parent.")
            for parent in candidates:
                if self.rank[parent] >= self.rank[node_id]:
                    raise ValueError(
                        f"Candidate parent {parent} of {node_id} does not have a "
                        f"smaller rank."
                    )

    @property
    def node_ids(self) -> Tuple[NodeIdType, ...]:
        return tuple(sorted(self.rank, key=node_sort_key))

    def candidates(self, node_id: NodeIdType) -> Tuple[NodeIdType, ...]:
        return tuple(self.parent_set.get(node_id, ()))

    def non_root(self) -> Iterator[NodeIdType]:
        """Non-root nodes in ascending id order."""
        return (i for i in self.node_ids if i != self.root_id)

    def by_rank(self, descending: bool = False) -> List[NodeIdType]:
        """Node ids ordered by rank, ties in id order."""
        return sorted(
            self.node_ids,
            key=lambda i: ((-1 if descending else 1) * self.rank[i], node_sort_key(i)),
        )


def build_dodag(topo: Topology) -> Dodag:
    """
    Build the hop-count DODAG of a topology.

    The rank of a node is its hop distance to the root along the directed links,
    and its candidate parents are all link destinations with strictly smaller rank.

    Parameters
    ----------
    topo :
        Validated topology.

    Returns
    -------
    dodag :
        Ranks and candidate parent sets.

    Raises
    ------
    ValueError
        If some node has no candidate parent, i.e. it is disconnected from the root.

    Examples
    --------
    >>> from macaware.topology import build_dodag, load_fixture
    >>> dodag = build_dodag(load_fixture("fig1a"))
    >>> dodag.rank["V5"], dodag.candidates("V5")
    (2, ('V1', 'V2', 'V3'))
    """
    graph = topo.graph()
    towards_root = graph.reverse(copy=False)
    hops = nx.single_source_shortest_path_length(towards_root, topo.root_id)
    missing = [i for i in topo.node_ids if i not in hops]
    if missing:
        raise ValueError(f"Nodes {missing} are disconnected from the root.")

    rank: Dict[NodeIdType, int] = {i: int(hops[i]) for i in topo.node_ids}
    parent_set = {}
    for node_id in topo.node_ids:
        if node_id == topo.root_id:
            continue
        candidates = [j for j in graph.successors(node_id) if rank[j] < rank[node_id]]
        if not candidates:
            raise ValueError(f"Node {node_id} has no candidate parent.")
        parent_set[node_id] = tuple(sorted(candidates, key=node_sort_key))
    return Dodag(root_id=topo.root_id, rank=rank, parent_set=parent_set)
