"""
Flow balance of the network.

Every node hands its generated traffic plus the traffic it successfully receives from
its children to the MAC layer. With :math:`T = M \\circ R` this is the linear system
:math:`Q_i = \\lambda_i + \\sum_j T_{j,i} Q_j`, i.e. :math:`Q = \\lambda (I - T)^{-1}`
for row vectors.
"""

from typing import Mapping, Union

import numpy as np
import scipy.linalg

from macaware.mac import Timing
from macaware.metrics import SelectionMatrix
from macaware.topology import Topology

__all__ = ["traffic_fixed_point", "alpha_from_traffic"]


def _as_matrix(
    link_reliability: Union[np.ndarray, Mapping], selection: SelectionMatrix
) -> np.ndarray:
    if isinstance(link_reliability, np.ndarray):
        return np.asarray(link_reliability, dtype=float)
    mat = np.zeros((len(selection.nodes), len(selection.nodes)))
    for (src, dst), value in link_reliability.items():
        mat[selection.index(src), selection.index(dst)] = value
    return mat


def traffic_fixed_point(
    lambda_: np.ndarray,
    selection: SelectionMatrix,
    link_reliability: Union[np.ndarray, Mapping],
) -> np.ndarray:
    """
    Traffic handed to the MAC layer by every node.

    Parameters
    ----------
    lambda_ :
        *shape=(n,)* -- Generated traffic in the node order of ``selection``.
    selection :
        Parent selection matrix :math:`M`.
    link_reliability :
        *shape=(n, n)* -- Link reliabilities :math:`R_{i,j}`, or a mapping from
        ``(src, dst)`` pairs.

    Returns
    -------
    q :
        *shape=(n,)* -- Traffic :math:`Q` in packets per second. The entry of the root
        is the traffic it receives.

    Raises
    ------
    LinAlgError
        If :math:`I - T` is singular, which cannot happen for acyclic selections.

    Examples
    --------
    >>> import numpy as np
    >>> from macaware.flowsolver import traffic_fixed_point
    >>> from macaware.metrics import build_selection_matrix
    >>> from macaware.topology import build_dodag, load_fixture
    >>> dodag = build_dodag(load_fixture("chain3"))
    >>> sel = build_selection_matrix(dodag, {"V1": "V0", "V2": "V1", "V3": "V2"})
    >>> traffic_fixed_point(np.array([0.0, 1.0, 1.0, 1.0]), sel, np.ones((4, 4)))
    array([3., 3., 2., 1.])
    """
    lambda_ = np.asarray(lambda_, dtype=float)
    transfer = selection.as_array() * _as_matrix(link_reliability, selection)
    system = np.eye(lambda_.shape[0]) - transfer.T
    return scipy.linalg.solve(system, lambda_)


def alpha_from_traffic(q: np.ndarray, topo: Topology, timing: Timing) -> np.ndarray:
    """
    Busy channel probability implied by the traffic of interfering nodes.

    :math:`\\alpha_i = \\min(1, \\sum_{k \\in I(i)} Q_k t_{tx})`, the fraction of time
    the channel around node :math:`i` carries a transmission of an interfering node.
    The root never transmits.

    Parameters
    ----------
    q :
        *shape=(n,)* -- Traffic in the node order of ``topo``.
    topo :
        Topology defining the interference sets.
    timing :
        Radio timing constants.

    Examples
    --------
    >>> import numpy as np
    >>> from macaware.flowsolver import alpha_from_traffic
    >>> from macaware.mac import Timing
    >>> from macaware.topology import load_fixture
    >>> alpha_from_traffic(np.zeros(6), load_fixture("star5"), Timing())
    array([0., 0., 0., 0., 0., 0.])
    """
    q = np.asarray(q, dtype=float)
    senders = q.copy()
    senders[topo.index(topo.root_id)] = 0.0
    occupancy = np.zeros_like(q)
    for node_id, interferers in topo.interference_sets().items():
        idx = [topo.index(k) for k in interferers]
        occupancy[topo.index(node_id)] = senders[idx].sum() * timing.airtime
    return np.minimum(1.0, occupancy)
