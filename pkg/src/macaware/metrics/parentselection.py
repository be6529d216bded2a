"""
Parent selection rules.

Each rule picks one parent out of the candidate set of a node. Ties are broken in
favour of the smallest node id; scores that agree up to a relative tolerance of
``1e-12`` count as tied.
"""

import math
from typing import Callable, Iterable, Mapping, Optional, Tuple

from macaware import utils
from macaware.topology import node_sort_key
from macaware.type import FloatArgType, NodeIdType, ProbabilityArgType

__all__ = [
    "etx_link",
    "select_parent_etx",
    "select_parent_r_metric",
    "select_parent_q_metric",
    "select_parent_backpressure",
]

_TIE_RTOL = 1e-12


def _improves(new: float, old: float, maximize: bool) -> bool:
    if math.isinf(new) or math.isinf(old):
        return new > old if maximize else new < old
    diff = new - old if maximize else old - new
    return diff > _TIE_RTOL * max(abs(new), abs(old))


def _pick(
    candidates: Iterable[NodeIdType],
    score: Callable[[NodeIdType], Optional[float]],
    maximize: bool,
) -> Optional[NodeIdType]:
    best, best_score = None, None
    for j in sorted(candidates, key=node_sort_key):
        value = score(j)
        if value is None:
            continue
        if best is None or _improves(value, best_score, maximize):
            best, best_score = j, value
    return best


def _nonempty(node: NodeIdType, candidates: Iterable[NodeIdType]) -> Tuple:
    candidates = tuple(candidates)
    if not candidates:
        raise ValueError(f"Node {node} has an empty candidate parent set.")
    return candidates


def etx_link(delivery_probability: ProbabilityArgType) -> float:
    """
    Expected number of transmissions over a link.

    Raises
    ------
    ValueError
        If ``delivery_probability`` is zero or not a probability.

    Examples
    --------
    >>> from macaware.metrics import etx_link
    >>> etx_link(0.5)
    2.0
    """
    p = utils.as_probability(delivery_probability, "delivery_probability")
    if p == 0.0:
        raise ValueError("ETX is undefined for a link that never delivers.")
    return 1.0 / p


def select_parent_etx(
    node: NodeIdType,
    candidates: Iterable[NodeIdType],
    link_etx: Mapping[NodeIdType, float],
    downstream_etx: Mapping[NodeIdType, float],
) -> NodeIdType:
    """Candidate minimizing the additive path ETX :math:`ETX_{i,j} + ETX(j)`."""
    candidates = _nonempty(node, candidates)
    return _pick(
        candidates, lambda j: link_etx[j] + downstream_etx[j], maximize=False
    )


def select_parent_r_metric(
    node: NodeIdType,
    candidates: Iterable[NodeIdType],
    link_reliabilities: Mapping[NodeIdType, float],
    downstream_R: Mapping[NodeIdType, float],
) -> NodeIdType:
    """
    Candidate maximizing the end-to-end reliability :math:`R_{i,j} R(j)`.

    Parameters
    ----------
    node :
        Selecting node.
    candidates :
        Candidate parent set :math:`\\Gamma_i`.
    link_reliabilities :
        Reliability :math:`R_{i,j}` of the link to each candidate.
    downstream_R :
        End-to-end reliability :math:`R(j)` advertised by each candidate.

    Examples
    --------
    >>> from macaware.metrics import select_parent_r_metric
    >>> select_parent_r_metric(
    ...     "V5", ["V1", "V2"], {"V1": 0.9, "V2": 1.0}, {"V1": 0.9, "V2": 0.9}
    ... )
    'V2'
    """
    candidates = _nonempty(node, candidates)
    return _pick(
        candidates, lambda j: link_reliabilities[j] * downstream_R[j], maximize=True
    )


def select_parent_q_metric(
    node: NodeIdType,
    candidates: Iterable[NodeIdType],
    traffic: Mapping[NodeIdType, Tuple[float, float]],
    power: Mapping[NodeIdType, Tuple[float, float]],
    reliabilities: Mapping[NodeIdType, float],
    downstream_R: Mapping[NodeIdType, float],
    rmin: ProbabilityArgType,
) -> Optional[NodeIdType]:
    """
    Candidate with the least forwarding load subject to a reliability floor.

    Minimizes :math:`P_{t,j} Q_j + P_{r,j} (Q_j - \\lambda_j)` over candidates with
    :math:`R_{i,j} R(j) \\geq R_{min}`.

    Parameters
    ----------
    node :
        Selecting node.
    candidates :
        Candidate parent set :math:`\\Gamma_i`.
    traffic :
        Pair :math:`(Q_j, \\lambda_j)` of forwarded and generated traffic of each
        candidate.
    power :
        Pair :math:`(P_{t,j}, P_{r,j})` of transmit and receive power of each candidate.
    reliabilities :
        Reliability :math:`R_{i,j}` of the link to each candidate.
    downstream_R :
        End-to-end reliability :math:`R(j)` of each candidate.
    rmin :
        Reliability floor :math:`R_{min}`.

    Returns
    -------
    parent :
        Selected candidate, or ``None`` if no candidate meets the reliability floor.

    Raises
    ------
    ValueError
        If some candidate reports :math:`Q_j < \\lambda_j`.
    """
    candidates = _nonempty(node, candidates)
    rmin = utils.as_probability(rmin, "rmin")
    for j in candidates:
        q_j, lambda_j = traffic[j]
        if q_j < lambda_j - 1e-9 * max(1.0, abs(lambda_j)):
            raise ValueError(f"Candidate {j} reports Q={q_j} below lambda={lambda_j}.")

    def score(j: NodeIdType) -> Optional[float]:
        if reliabilities[j] * downstream_R[j] < rmin:
            return None
        q_j, lambda_j = traffic[j]
        p_t, p_r = power[j]
        return p_t * q_j + p_r * (q_j - lambda_j)

    return _pick(candidates, score, maximize=False)


def select_parent_backpressure(
    node: NodeIdType,
    candidates: Iterable[NodeIdType],
    queue_lengths: Mapping[NodeIdType, float],
    etx: Mapping[NodeIdType, float],
    V: FloatArgType = 1.0,
) -> NodeIdType:
    """
    Candidate maximizing the back-pressure weight
    :math:`(q_i - q_j) - V \\cdot ETX_{i,j}`.

    Parameters
    ----------
    node :
        Selecting node, whose own queue length must be in ``queue_lengths``.
    candidates :
        Candidate parent set :math:`\\Gamma_i`.
    queue_lengths :
        Queue length of the node and of each candidate, in packets.
    etx :
        ETX of the link to each candidate.
    V :
        Weight of the link cost.
    """
    candidates = _nonempty(node, candidates)
    V = utils.as_nonnegative(V, "V")
    q_i = queue_lengths[node]
    return _pick(
        candidates,
        lambda j: (q_i - queue_lengths[j]) - V * etx[j],
        maximize=True,
    )
