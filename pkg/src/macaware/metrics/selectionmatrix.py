"""Deterministic parent selection matrix and path utilities."""

from typing import Dict, List, Mapping, Optional, Sequence, Union

import numpy as np

from macaware.topology import Dodag
from macaware.type import NodeIdType

__all__ = [
    "SelectionMatrix",
    "build_selection_matrix",
    "path_to_root",
    "end_to_end_reliability",
]


class SelectionMatrix:
    """
    Parent selection matrix :math:`M`.

    Entry :math:`M_{i,j}` is one if node :math:`i` forwards its traffic to node
    :math:`j` and zero otherwise. Rows of non-root nodes sum to one, the row of the
    root is zero.

    Parameters
    ----------
    nodes :
        Node ids, defining the row and column order.
    root_id :
        Id of the root.
    entries :
        *shape=(n, n)* -- Selection matrix.
    """

    def __init__(
        self, nodes: Sequence[NodeIdType], root_id: NodeIdType, entries: np.ndarray
    ):
        self.nodes = tuple(nodes)
        self.root_id = root_id
        self._entries = np.asarray(entries, dtype=float)
        if self._entries.shape != (len(self.nodes), len(self.nodes)):
            raise ValueError("Selection matrix shape does not match the node list.")
        self._index = {node_id: idx for idx, node_id in enumerate(self.nodes)}

    def __repr__(self) -> str:
        return f"SelectionMatrix({self.parents()})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, SelectionMatrix):
            return NotImplemented
        return self.nodes == other.nodes and np.array_equal(
            self._entries, other._entries
        )

    def __hash__(self):
        return hash((self.nodes, tuple(sorted(self.parents().items()))))

    def as_array(self) -> np.ndarray:
        return self._entries.copy()

    def index(self, node_id: NodeIdType) -> int:
        return self._index[node_id]

    def parent_of(self, node_id: NodeIdType) -> Optional[NodeIdType]:
        """Selected parent of a node, ``None`` for the root."""
        row = self._entries[self._index[node_id]]
        if not row.any():
            return None
        return self.nodes[int(np.argmax(row))]

    def parents(self) -> Dict[NodeIdType, NodeIdType]:
        return {
            node_id: self.parent_of(node_id)
            for node_id in self.nodes
            if node_id != self.root_id
        }


def build_selection_matrix(
    dodag: Dodag, choices: Mapping[NodeIdType, NodeIdType]
) -> SelectionMatrix:
    """
    Selection matrix of per-node parent choices.

    Parameters
    ----------
    dodag :
        DODAG defining the nodes and candidate parent sets.
    choices :
        Selected parent of every non-root node.

    Raises
    ------
    ValueError
        If a non-root node has no choice or its choice is not a candidate parent.

    Examples
    --------
    >>> from macaware.metrics import build_selection_matrix
    >>> from macaware.topology import build_dodag, load_fixture
    >>> dodag = build_dodag(load_fixture("chain3"))
    >>> sel = build_selection_matrix(dodag, {"V1": "V0", "V2": "V1", "V3": "V2"})
    >>> sel.as_array().sum(axis=1)
    array([0., 1., 1., 1.])
    """
    nodes = dodag.node_ids
    index = {node_id: idx for idx, node_id in enumerate(nodes)}
    entries = np.zeros((len(nodes), len(nodes)))
    for node_id in dodag.non_root():
        if node_id not in choices:
            raise ValueError(f"Node {node_id} has no parent choice.")
        parent = choices[node_id]
        if parent not in dodag.candidates(node_id):
            raise ValueError(
                f"Parent {parent} of node {node_id} is not one of its candidates "
                f"{dodag.candidates(node_id)}."
            )
        entries[index[node_id], index[parent]] = 1.0
    return SelectionMatrix(nodes=nodes, root_id=dodag.root_id, entries=entries)


def path_to_root(node: NodeIdType, selection: SelectionMatrix) -> List[NodeIdType]:
    """
    Nodes visited from ``node`` to the root, both included.

    Raises
    ------
    ValueError
        If the path runs into a cycle or a node without parent.
    """
    path = [node]
    while path[-1] != selection.root_id:
        parent = selection.parent_of(path[-1])
        if parent is None:
            raise ValueError(f"Path from {node} ends at {path[-1]} before the root.")
        if parent in path:
            raise ValueError(f"Path from {node} runs into a cycle at {parent}.")
        path.append(parent)
    return path


def end_to_end_reliability(
    node: NodeIdType,
    selection: SelectionMatrix,
    link_reliabilities: Union[np.ndarray, Mapping],
) -> float:
    """
    Product of the link reliabilities along the selected path of ``node``.

    Parameters
    ----------
    node :
        Source node.
    selection :
        Parent selection inducing a unique path.
    link_reliabilities :
        Link reliabilities as matrix in the node order of ``selection``, or as a
        mapping from ``(src, dst)`` pairs.

    Returns
    -------
    reliability :
        End-to-end reliability, one for the root.

    Raises
    ------
    ValueError
        If the path does not reach the root.
    """
    path = path_to_root(node, selection)
    reliability = 1.0
    for src, dst in zip(path[:-1], path[1:]):
        if isinstance(link_reliabilities, np.ndarray):
            link = link_reliabilities[selection.index(src), selection.index(dst)]
        else:
            link = link_reliabilities[(src, dst)]
        reliability *= float(link)
    return reliability
