"""Network description: nodes with traffic rates and directed links with loss rates."""

import dataclasses
import json
import os
import re
from typing import Any, Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

import networkx as nx
import numpy as np

from macaware import utils
from macaware.type import DocumentArgType, NodeIdType

__all__ = [
    "NodeSpec",
    "LinkSpec",
    "Topology",
    "load_topology",
    "save_topology",
    "node_sort_key",
]

_DIGITS = re.compile(r"(\d+)")


def node_sort_key(node_id: NodeIdType) -> Tuple:
    """
    Natural ordering key of node ids, so that ``"V2"`` sorts before ``"V10"``.

    All tie-breaking rules of the library ("smallest id") use this order.

    Examples
    --------
    >>> from macaware.topology import node_sort_key
    >>> sorted(["V10", "V2", "V1"], key=node_sort_key)
    ['V1', 'V2', 'V10']
    """
    return tuple(
        (0, int(part), "") if part.isdigit() else (1, 0, part)
        for part in _DIGITS.split(str(node_id))
        if part
    )


@dataclasses.dataclass(frozen=True)
class NodeSpec:
    """A node with its generated traffic rate in packets per second."""

    id: NodeIdType
    lambda_pps: float = 0.0
    position: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValueError(f"Node id must be a non-empty string, got {self.id!r}.")
        rate = utils.as_nonnegative(self.lambda_pps, f"lambda_pps of node {self.id}")
        object.__setattr__(self, "lambda_pps", rate)
        if self.position is not None:
            position = tuple(float(coord) for coord in self.position)
            if len(position) != 2:
                raise ValueError(
                    f"Position of node {self.id} must have two coordinates."
                )
            object.__setattr__(self, "position", position)


@dataclasses.dataclass(frozen=True)
class LinkSpec:
    """
    A directed link ``src -> dst``: ``src`` may use ``dst`` as its parent.

    ``p_bad`` is the probability that a packet on the link is corrupted by the
    channel alone.
    """

    src: NodeIdType
    dst: NodeIdType
    p_bad: float = 0.0

    def __post_init__(self):
        name = f"p_bad of link {self.src}->{self.dst}"
        p_bad = utils.as_probability(self.p_bad, name)
        object.__setattr__(self, "p_bad", p_bad)
        if self.src == self.dst:
            raise ValueError(f"Link {self.src}->{self.dst} is a self-loop.")


@dataclasses.dataclass(frozen=True)
class Topology:
    """
    Nodes, links and the root (data sink) of a network.

    Nodes are stored in natural id order. The topology is validated on construction.

    Parameters
    ----------
    nodes :
        Node specifications, including the root.
    links :
        Directed links towards the root.
    root_id :
        Id of the root.

    Raises
    ------
    ValueError
        If ids are not unique, the root is unknown or generates traffic, a link
        references an unknown node or is duplicated, or a node cannot reach the root.
    """

    nodes: Tuple[NodeSpec, ...]
    links: Tuple[LinkSpec, ...]
    root_id: NodeIdType

    def __post_init__(self):
        nodes = tuple(sorted(self.nodes, key=lambda node: node_sort_key(node.id)))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "links", tuple(self.links))

        ids = [node.id for node in nodes]
        duplicates = sorted({i for i in ids if ids.count(i) > 1}, key=node_sort_key)
        if duplicates:
            raise ValueError(f"Node ids must be unique, duplicated: {duplicates}.")
        if self.root_id not in ids:
            raise ValueError(f"Root {self.root_id!r} is not a node of the topology.")
        if self.node(self.root_id).lambda_pps != 0.0:
            raise ValueError(f"Root {self.root_id!r} must not generate traffic.")

        seen = set()
        for link in self.links:
            for end in (link.src, link.dst):
                if end not in ids:
                    raise ValueError(
                        f"Link {link.src}->{link.dst} references unknown node {end!r}."
                    )
            if (link.src, link.dst) in seen:
                raise ValueError(f"Link {link.src}->{link.dst} is declared twice.")
            seen.add((link.src, link.dst))
        object.__setattr__(
            self, "_p_bad", {(link.src, link.dst): link.p_bad for link in self.links}
        )

        reaching = nx.ancestors(self.graph(), self.root_id) | {self.root_id}
        stranded = [i for i in ids if i not in reaching]
        if stranded:
            raise ValueError(f"Nodes {stranded} are not connected towards the root.")

    @property
    def node_ids(self) -> Tuple[NodeIdType, ...]:
        return tuple(node.id for node in self.nodes)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def index(self, node_id: NodeIdType) -> int:
        """Position of a node in :attr:`node_ids`, used as matrix index."""
        return self.node_ids.index(node_id)

    def node(self, node_id: NodeIdType) -> NodeSpec:
        for node in self.nodes:
            if node.id == node_id:
                return node
        raise KeyError(node_id)

    @property
    def lambdas(self) -> np.ndarray:
        """Generated traffic of all nodes in :attr:`node_ids` order."""
        return np.array([node.lambda_pps for node in self.nodes])

    def p_bad(self, src: NodeIdType, dst: NodeIdType) -> float:
        """Bad channel probability of the link ``src -> dst``."""
        return self._p_bad[(src, dst)]

    def graph(self) -> nx.DiGraph:
        """Directed graph of the links with ``p_bad`` as edge attribute."""
        graph = nx.DiGraph()
        graph.add_nodes_from(node.id for node in self.nodes)
        graph.add_edges_from(
            (link.src, link.dst, {"p_bad": link.p_bad}) for link in self.links
        )
        return graph

    def neighbors(self, node_id: NodeIdType) -> FrozenSet[NodeIdType]:
        """Nodes linked to ``node_id`` in either direction."""
        return frozenset(
            {link.dst for link in self.links if link.src == node_id}
            | {link.src for link in self.links if link.dst == node_id}
        )

    def interference_sets(self) -> Dict[NodeIdType, FrozenSet[NodeIdType]]:
        """
        Nodes whose transmissions are audible at each node.

        Two nodes interfere if either is linked to the other or if they share a
        candidate receiver. The root never transmits and is excluded from all sets.
        """
        receivers = {
            node_id: {link.dst for link in self.links if link.src == node_id}
            for node_id in self.node_ids
        }
        sets = {}
        for node_id in self.node_ids:
            hidden = {
                other
                for other in self.node_ids
                if other != node_id and receivers[other] & receivers[node_id]
            }
            members = (self.neighbors(node_id) | hidden) - {node_id, self.root_id}
            sets[node_id] = frozenset(members)
        return sets

    def with_traffic(
        self,
        overrides: Optional[Mapping[NodeIdType, float]] = None,
        default: Optional[float] = None,
    ) -> "Topology":
        """
        Copy of the topology with new traffic rates.

        Parameters
        ----------
        overrides :
            Rates for individual nodes, e.g. ``{"V2": 20.0}`` for a dominant node.
        default :
            Rate applied to every non-root node before ``overrides``.

        Raises
        ------
        ValueError
            If an override references an unknown node or the root.
        """
        overrides = dict(overrides or {})
        unknown = sorted(set(overrides) - set(self.node_ids), key=node_sort_key)
        if unknown:
            raise ValueError(f"Traffic overrides reference unknown nodes {unknown}.")
        if overrides.get(self.root_id, 0.0):
            raise ValueError(f"Root {self.root_id!r} must not generate traffic.")
        nodes = []
        for node in self.nodes:
            rate = node.lambda_pps
            if default is not None and node.id != self.root_id:
                rate = default
            rate = overrides.get(node.id, rate)
            nodes.append(dataclasses.replace(node, lambda_pps=rate))
        return dataclasses.replace(self, nodes=tuple(nodes))

    def to_dict(self) -> Dict[str, Any]:
        nodes = []
        for node in self.nodes:
            entry = {"id": node.id, "lambda_pps": node.lambda_pps}
            if node.position is not None:
                entry["position"] = list(node.position)
            nodes.append(entry)
        links = [
            {"src": link.src, "dst": link.dst, "p_bad": link.p_bad}
            for link in self.links
        ]
        return {"root": self.root_id, "nodes": nodes, "links": links}


def _read_document(document: DocumentArgType) -> Mapping[str, Any]:
    if isinstance(document, Mapping):
        return document
    if isinstance(document, bytes):
        document = document.decode("utf-8")
    if isinstance(document, str) and document.lstrip().startswith("{"):
        return json.loads(document)
    with open(os.fspath(document), "r", encoding="utf-8") as file:
        return json.load(file)


def _require(entry: Mapping[str, Any], keys: Iterable[str], where: str):
    if not isinstance(entry, Mapping):
        raise ValueError(f"{where} must be a JSON object.")
    missing = [key for key in keys if key not in entry]
    if missing:
        raise ValueError(f"{where} is missing the field(s) {missing}.")


def load_topology(document: DocumentArgType) -> Topology:
    """
    Read and validate a topology document.

    The document has the form ::

        {
          "root": "V0",
          "nodes": [{"id": "V1", "lambda_pps": 5.0, "position": [0.0, 1.0]}],
          "links": [{"src": "V1", "dst": "V0", "p_bad": 0.05}]
        }

    where ``position`` is optional.

    Parameters
    ----------
    document :
        Path to a JSON file, JSON text or an already parsed mapping.

    Returns
    -------
    topo :
        Validated topology.

    Raises
    ------
    FileNotFoundError
        If ``document`` is a path to a missing file.
    json.JSONDecodeError
        If the document is not valid JSON.
    ValueError
        If the document violates the schema or a topology invariant.

    Examples
    --------
    >>> from macaware.topology import load_topology
    >>> topo = load_topology(
    ...     '{"root": "V0", "nodes": [{"id": "V0", "lambda_pps": 0.0},'
    ...     ' {"id": "V1", "lambda_pps": 1.0}],'
    ...     ' "links": [{"src": "V1", "dst": "V0", "p_bad": 0.1}]}'
    ... )
    >>> topo.node_ids
    ('V0', 'V1')
    """
    data = _read_document(document)
    _require(data, ("root", "nodes", "links"), "Topology document")
    nodes = []
    for position, entry in enumerate(data["nodes"]):
        _require(entry, ("id", "lambda_pps"), f"nodes[{position}]")
        nodes.append(
            NodeSpec(
                id=entry["id"],
                lambda_pps=entry["lambda_pps"],
                position=entry.get("position"),
            )
        )
    links = []
    for position, entry in enumerate(data["links"]):
        _require(entry, ("src", "dst", "p_bad"), f"links[{position}]")
        links.append(LinkSpec(src=entry["src"], dst=entry["dst"], p_bad=entry["p_bad"]))
    return Topology(nodes=tuple(nodes), links=tuple(links), root_id=data["root"])


def save_topology(topo: Topology, path: Optional[os.PathLike] = None) -> str:
    """
    Serialize a topology to JSON text, optionally writing it to ``path``.

    The output is stable: the same topology always produces the same bytes.
    """
    text = json.dumps(topo.to_dict(), indent=2) + "\n"
    if path is not None:
        with open(os.fspath(path), "w", encoding="utf-8") as file:
            file.write(text)
    return text
