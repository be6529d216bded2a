"""Topologies shipped with the package."""

import importlib.resources
from typing import Tuple

from macaware.topology.topology import Topology, load_topology

__all__ = ["FIXTURES", "load_fixture"]

FIXTURES: Tuple[str, ...] = ("fig1a", "fig1b", "chain3", "star5")
"""Names of the packaged topologies.

``fig1a``
    Eight nodes in two ranks. V5 has candidate parents V1, V2 and V3, V7 has V2 and
    V3, and V4 reaches the root through V1 only.
``fig1b``
    Nineteen nodes in three ranks, hand-laid so that five rank-2 nodes see V1 as
    their best link.
``chain3``
    A line of three nodes towards the root.
``star5``
    Five leaves around the root.
"""


def load_fixture(name: str) -> Topology:
    """
    Load one of the packaged topologies by name.

    Raises
    ------
    ValueError
        If ``name`` is not one of :data:`FIXTURES`.

    Examples
    --------
    >>> from macaware.topology import load_fixture
    >>> load_fixture("fig1a").n_nodes
    8
    """
    if name not in FIXTURES:
        raise ValueError(f"Unknown fixture {name!r}, expected one of {FIXTURES}.")
    fixtures = importlib.resources.files("macaware.topology") / "fixtures"
    resource = fixtures / f"{name}.json"
    return load_topology(resource.read_text(encoding="utf-8"))
