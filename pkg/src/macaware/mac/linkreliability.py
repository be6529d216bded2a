"""
Loss and reliability of a single link under unslotted CSMA/CA.

A packet is discarded either because ``m + 1`` consecutive clear channel assessments
find the channel busy (channel access failure) or because all ``n + 1`` transmission
attempts are lost (retry limit). Consecutive channel accesses are assumed independent.
"""

import dataclasses

from macaware import utils
from macaware.mac._params import MacParams, Timing
from macaware.mac.servicetime import expected_service_delay
from macaware.type import ProbabilityArgType

__all__ = [
    "collision_probability",
    "attempt_loss",
    "access_failure_probability",
    "retry_exhaustion_probability",
    "link_reliability",
    "LinkState",
    "link_state",
]


def collision_probability(alpha: ProbabilityArgType, timing: Timing) -> float:
    """
    Probability that a transmission collides with another node's.

    A collision happens when another node performs its clear channel assessment
    within the vulnerable window of a transmission, so
    :math:`p_{coll} = \\min(1, \\alpha / T_s)` with :math:`T_s` the packet airtime in
    slots.

    Parameters
    ----------
    alpha :
        Busy channel probability seen by the transmitting node.
    timing :
        Radio timing constants.

    Returns
    -------
    p_coll :
        Collision probability.

    Raises
    ------
    ValueError
        If ``alpha`` is not in :math:`[0, 1]`.

    Examples
    --------
    >>> from macaware.mac import Timing, collision_probability
    >>> round(collision_probability(0.28, Timing()), 12)
    0.02
    """
    alpha = utils.as_probability(alpha, "alpha")
    return min(1.0, alpha / timing.t_tx)


def attempt_loss(p_coll: ProbabilityArgType, p_bad: ProbabilityArgType) -> float:
    """
    Loss probability of one transmission attempt after an idle CCA.

    Examples
    --------
    >>> from macaware.mac import attempt_loss
    >>> round(attempt_loss(0.2, 0.1), 12)
    0.28
    """
    p_coll = utils.as_probability(p_coll, "p_coll")
    p_bad = utils.as_probability(p_bad, "p_bad")
    return p_coll + (1.0 - p_coll) * p_bad


def _lost_after_access(alpha: float, gamma: float, params: MacParams) -> float:
    # probability that one transmission stage gains the channel and is then lost
    return gamma * (1.0 - alpha ** (params.m + 1))


def access_failure_probability(
    alpha: ProbabilityArgType, gamma: ProbabilityArgType, params: MacParams
) -> float:
    """
    Probability that a packet is discarded due to channel access failure.

    .. math:: p_{cf} = \\alpha^{m+1} \\sum_{k=0}^{n} (\\gamma (1 - \\alpha^{m+1}))^k

    Examples
    --------
    >>> from macaware.mac import MacParams, access_failure_probability
    >>> access_failure_probability(0.5, 0.0, MacParams(m=0, n=3))
    0.5
    """
    alpha = utils.as_probability(alpha, "alpha")
    gamma = utils.as_probability(gamma, "gamma")
    x = _lost_after_access(alpha, gamma, params)
    # Python defines 0.0 ** 0 == 1.0, which is the convention needed here
    return alpha ** (params.m + 1) * sum(x ** k for k in range(params.n + 1))


def retry_exhaustion_probability(
    alpha: ProbabilityArgType, gamma: ProbabilityArgType, params: MacParams
) -> float:
    """
    Probability that a packet is discarded after ``n + 1`` lost attempts.

    .. math:: p_{cr} = (\\gamma (1 - \\alpha^{m+1}))^{n+1}

    Examples
    --------
    >>> from macaware.mac import MacParams, retry_exhaustion_probability
    >>> retry_exhaustion_probability(0.0, 0.5, MacParams(m=4, n=1))
    0.25
    """
    alpha = utils.as_probability(alpha, "alpha")
    gamma = utils.as_probability(gamma, "gamma")
    return _lost_after_access(alpha, gamma, params) ** (params.n + 1)


def link_reliability(
    alpha: ProbabilityArgType,
    p_bad: ProbabilityArgType,
    params: MacParams,
    timing: Timing,
) -> float:
    """
    Probability that a packet sent over the link is acknowledged.

    Composes the collision probability, the per-attempt loss and both discard
    probabilities, :math:`R = 1 - p_{cf} - p_{cr}`.

    Parameters
    ----------
    alpha :
        Busy channel probability at the sender.
    p_bad :
        Bad channel probability of the link.
    params :
        CSMA/CA parameters.
    timing :
        Radio timing constants.

    Returns
    -------
    reliability :
        Link reliability in :math:`[0, 1]`.

    See Also
    --------
    link_state : All intermediate quantities of the same computation.

    Examples
    --------
    >>> from macaware.mac import MacParams, Timing, link_reliability
    >>> link_reliability(0.0, 0.0, MacParams(), Timing())
    1.0
    >>> link_reliability(1.0, 0.0, MacParams(m=0, n=0), Timing())
    0.0
    """
    alpha = utils.as_probability(alpha, "alpha")
    gamma = attempt_loss(collision_probability(alpha, timing), p_bad)
    p_cf = access_failure_probability(alpha, gamma, params)
    p_cr = retry_exhaustion_probability(alpha, gamma, params)
    return min(1.0, max(0.0, 1.0 - p_cf - p_cr))


@dataclasses.dataclass(frozen=True)
class LinkState:
    """
    Performance of one link at a given busy channel probability.

    Parameters
    ----------
    alpha :
        Busy channel probability at the sender.
    p_bad :
        Bad channel probability of the link.
    p_coll :
        Collision probability.
    gamma :
        Per-attempt loss probability.
    p_cf :
        Channel access failure probability.
    p_cr :
        Retry limit probability.
    reliability :
        Link reliability :math:`1 - p_{cf} - p_{cr}`.
    delay :
        Expected service delay of acknowledged packets in seconds.
    """

    alpha: float
    p_bad: float
    p_coll: float
    gamma: float
    p_cf: float
    p_cr: float
    reliability: float
    delay: float

    def __post_init__(self):
        probabilities = ("alpha", "p_bad", "p_coll", "gamma", "p_cf", "p_cr")
        for name in probabilities + ("reliability",):
            utils.as_probability(getattr(self, name), f"LinkState.{name}")
        if self.delay < 0.0:
            raise ValueError(f"LinkState.delay must be non-negative, got {self.delay}.")
        if self.gamma < self.p_bad - 1e-12:
            raise ValueError("LinkState.gamma must not be smaller than p_bad.")

    @property
    def etx(self) -> float:
        """Expected number of attempts per successful attempt, :math:`1/(1-\\gamma)`."""
        return float("inf") if self.gamma >= 1.0 else 1.0 / (1.0 - self.gamma)


def link_state(
    alpha: ProbabilityArgType,
    p_bad: ProbabilityArgType,
    params: MacParams,
    timing: Timing,
) -> LinkState:
    """
    Evaluate loss, reliability and service delay of a link.

    Examples
    --------
    >>> from macaware.mac import MacParams, Timing, link_state
    >>> state = link_state(0.0, 0.1, MacParams(), Timing())
    >>> round(state.p_cr, 12)
    0.0001
    """
    alpha = utils.as_probability(alpha, "alpha")
    p_bad = utils.as_probability(p_bad, "p_bad")
    p_coll = collision_probability(alpha, timing)
    gamma = attempt_loss(p_coll, p_bad)
    p_cf = access_failure_probability(alpha, gamma, params)
    p_cr = retry_exhaustion_probability(alpha, gamma, params)
    reliability = min(1.0, max(0.0, 1.0 - p_cf - p_cr))
    return LinkState(
        alpha=alpha,
        p_bad=p_bad,
        p_coll=p_coll,
        gamma=gamma,
        p_cf=p_cf,
        p_cr=p_cr,
        reliability=reliability,
        delay=expected_service_delay(alpha, gamma, params, timing),
    )
