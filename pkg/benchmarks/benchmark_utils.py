"""Reocurring networks and settings for benchmarking functions."""

from macaware import topology

TOPOLOGIES = {
    "fig1a": lambda: topology.load_fixture("fig1a"),
    "fig1b": lambda: topology.load_fixture("fig1b"),
    "random50": lambda: topology.generate_random_topology(50, seed=42, density=2.5),
}


def load_network(name):
    """Topology and DODAG of a named benchmark network."""
    topo = TOPOLOGIES[name]()
    return topo, topology.build_dodag(topo)
