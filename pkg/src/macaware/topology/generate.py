"""Random layered topologies for benchmarks and tests."""

import numpy as np

from macaware import utils
from macaware.topology.topology import LinkSpec, NodeSpec, Topology
from macaware.type import FloatArgType, IntArgType

__all__ = ["generate_random_topology"]


def generate_random_topology(
    n_nodes: IntArgType,
    seed: IntArgType,
    density: FloatArgType = 2.0,
    lambda_pps: FloatArgType = 1.0,
) -> Topology:
    """
    Random layered topology with ``n_nodes`` nodes including the root ``V0``.

    Non-root nodes are placed in consecutive layers of random width. Nodes of the
    first layer link to the root, every other node links to a random subset of the
    previous layer with on average ``density`` candidates (at least one, at most the
    previous layer's width). Bad channel probabilities are uniform in
    :math:`[0.01, 0.15]`. The construction is connected by design and reproducible for
    a fixed seed.

    Parameters
    ----------
    n_nodes :
        Total number of nodes, at least 2.
    seed :
        Seed of the PCG64 stream.
    density :
        Average number of candidate parents per node, at least 1.
    lambda_pps :
        Traffic rate of every non-root node.

    Raises
    ------
    ValueError
        If ``n_nodes < 2`` or ``density < 1``.

    Examples
    --------
    >>> from macaware.topology import generate_random_topology
    >>> topo = generate_random_topology(2, seed=5)
    >>> [(link.src, link.dst) for link in topo.links]
    [('V1', 'V0')]
    """
    n_nodes = utils.as_count(n_nodes, "n_nodes", lower=2)
    density = float(density)
    if density < 1.0:
        raise ValueError(f"density must be at least 1, got {density}.")
    rng = utils.stream_for_run(seed)

    n_members = n_nodes - 1
    max_width = max(2, int(np.ceil(np.sqrt(n_members))) + 1)
    layers = []
    next_id = 1
    while next_id <= n_members:
        width = min(int(rng.integers(1, max_width + 1)), n_members - next_id + 1)
        layers.append([f"V{i}" for i in range(next_id, next_id + width)])
        next_id += width

    nodes = [NodeSpec(id="V0", lambda_pps=0.0, position=(0.0, 0.0))]
    links = []
    previous = ["V0"]
    for depth, layer in enumerate(layers, start=1):
        for slot, node_id in enumerate(layer):
            nodes.append(
                NodeSpec(
                    id=node_id,
                    lambda_pps=float(lambda_pps),
                    position=(float(slot) - (len(layer) - 1) / 2.0, float(depth)),
                )
            )
            n_candidates = min(len(previous), 1 + int(rng.poisson(density - 1.0)))
            chosen = rng.choice(len(previous), size=n_candidates, replace=False)
            for idx in sorted(int(c) for c in chosen):
                p_bad = round(float(rng.uniform(0.01, 0.15)), 3)
                links.append(LinkSpec(src=node_id, dst=previous[idx], p_bad=p_bad))
        previous = layer
    return Topology(nodes=tuple(nodes), links=tuple(links), root_id="V0")
