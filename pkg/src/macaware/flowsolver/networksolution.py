"""Converged state of the MAC/routing loop."""

import dataclasses
import os
from typing import Dict, Optional, Tuple

import numpy as np
import pandas as pd

from macaware.metrics import MetricKind, SelectionMatrix
from macaware.type import NodeIdType

__all__ = ["NetworkSolution", "SOLUTION_COLUMNS"]

SOLUTION_COLUMNS = (
    "node",
    "q_pps",
    "alpha",
    "e2e_reliability",
    "e2e_delay_s",
    "power_w",
    "parent",
)


@dataclasses.dataclass(frozen=True)
class NetworkSolution:
    """
    Output of the flow-balance fixed point.

    All per-node arrays are in the order of :attr:`nodes`. The root is the data sink:
    its power is not modelled and reported as NaN.

    Parameters
    ----------
    nodes :
        Node ids.
    root_id :
        Id of the root.
    metric :
        Routing metric that produced the selection.
    lambda_ :
        Generated traffic in packets per second.
    q :
        Traffic handed to the MAC layer, :math:`Q_i \\geq \\lambda_i`.
    alpha :
        Busy channel probabilities.
    selection :
        Parent selection matrix :math:`M`.
    link_reliability :
        *shape=(n, n)* -- Reliability :math:`R_{i,j}` of every candidate link, zero
        elsewhere.
    e2e_reliability :
        Product of the link reliabilities along the selected path.
    e2e_delay :
        Sum of the per-hop queueing and service delays along the path, in seconds.
    service_delay :
        Service delay of every node towards its parent, in seconds.
    queue_delay :
        Mean queueing delay of every node, in seconds.
    node_power :
        Average power of every node in watts; ``inf`` for saturated nodes.
    converged :
        Whether the fixed-point iteration met its tolerance.
    iterations :
        Number of iterations performed.
    flagged :
        Nodes whose Q-metric choice had no feasible candidate and fell back to the
        R-metric choice.
    """

    nodes: Tuple[NodeIdType, ...]
    root_id: NodeIdType
    metric: MetricKind
    lambda_: np.ndarray
    q: np.ndarray
    alpha: np.ndarray
    selection: SelectionMatrix
    link_reliability: np.ndarray
    e2e_reliability: np.ndarray
    e2e_delay: np.ndarray
    service_delay: np.ndarray
    queue_delay: np.ndarray
    node_power: np.ndarray
    converged: bool
    iterations: int
    flagged: Tuple[NodeIdType, ...] = ()

    def index(self, node_id: NodeIdType) -> int:
        return self.nodes.index(node_id)

    def parent_of(self, node_id: NodeIdType) -> Optional[NodeIdType]:
        return self.selection.parent_of(node_id)

    @property
    def non_root_mask(self) -> np.ndarray:
        return np.array([node_id != self.root_id for node_id in self.nodes])

    @property
    def max_power(self) -> float:
        """Largest power over non-root nodes, the lifetime proxy; 0 without any."""
        power = self.node_power[self.non_root_mask]
        return float(np.max(power)) if power.size else 0.0

    def summary(self) -> Dict[str, float]:
        """Network aggregates over the non-root nodes."""
        mask = self.non_root_mask
        if not mask.any():
            return {
                "avg_reliability": 1.0,
                "min_reliability": 1.0,
                "avg_delay_s": 0.0,
                "max_delay_s": 0.0,
                "max_power_w": 0.0,
            }
        return {
            "avg_reliability": float(np.mean(self.e2e_reliability[mask])),
            "min_reliability": float(np.min(self.e2e_reliability[mask])),
            "avg_delay_s": float(np.mean(self.e2e_delay[mask])),
            "max_delay_s": float(np.max(self.e2e_delay[mask])),
            "max_power_w": self.max_power,
        }

    def to_frame(self) -> pd.DataFrame:
        """One row per node with the columns of :data:`SOLUTION_COLUMNS`."""
        return pd.DataFrame(
            {
                "node": list(self.nodes),
                "q_pps": self.q,
                "alpha": self.alpha,
                "e2e_reliability": self.e2e_reliability,
                "e2e_delay_s": self.e2e_delay,
                "power_w": self.node_power,
                "parent": [self.parent_of(i) or "" for i in self.nodes],
            },
            columns=list(SOLUTION_COLUMNS),
        )

    def to_csv(self, path: Optional[os.PathLike] = None) -> str:
        """Write :meth:`to_frame` as CSV to ``path`` and return the text."""
        text = self.to_frame().to_csv(index=False)
        if path is not None:
            with open(os.fspath(path), "w", encoding="utf-8", newline="") as file:
                file.write(text)
        return text
