"""Direct stochastic simulation of the backoff/retry chain of a single link."""

import dataclasses

from macaware import utils
from macaware.mac._params import MacParams
from macaware.type import IntArgType, ProbabilityArgType, RandomStateArgType

__all__ = ["LinkOutcomeCounts", "sample_link_outcomes"]


@dataclasses.dataclass(frozen=True)
class LinkOutcomeCounts:
    """Number of packets per final outcome out of ``trials`` simulated packets."""

    trials: int
    delivered: int
    access_failure: int
    retry_limit: int

    @property
    def reliability(self) -> float:
        return self.delivered / self.trials

    @property
    def p_cf(self) -> float:
        return self.access_failure / self.trials

    @property
    def p_cr(self) -> float:
        return self.retry_limit / self.trials


def sample_link_outcomes(
    alpha: ProbabilityArgType,
    gamma: ProbabilityArgType,
    params: MacParams,
    size: IntArgType,
    random_state: RandomStateArgType = None,
) -> LinkOutcomeCounts:
    """
    Simulate ``size`` packets through the CSMA/CA backoff and retry chain.

    Every clear channel assessment is busy with probability ``alpha``, independently
    of all others; every transmission is lost with probability ``gamma``. A
    transmission stage fails with a channel access failure when all ``m + 1``
    assessments are busy, and a packet is dropped at the retry limit when ``n + 1``
    transmissions are lost.

    Parameters
    ----------
    alpha :
        Busy channel probability.
    gamma :
        Per-attempt loss probability.
    params :
        CSMA/CA parameters.
    size :
        Number of packets.
    random_state :
        Seed or generator.

    Returns
    -------
    counts :
        Outcome counts.

    Examples
    --------
    >>> from macaware.mac import MacParams, sample_link_outcomes
    >>> counts = sample_link_outcomes(0.0, 0.0, MacParams(), 1000, random_state=1)
    >>> counts.delivered
    1000
    """
    alpha = utils.as_probability(alpha, "alpha")
    gamma = utils.as_probability(gamma, "gamma")
    size = utils.as_count(size, "size", lower=1)
    rng = utils.as_random_state(random_state)

    remaining = size
    delivered = access_failure = 0
    for _ in range(params.n + 1):
        if remaining == 0:
            break
        busy = rng.random((remaining, params.m + 1)) < alpha
        gained = ~busy.all(axis=1)
        lost = rng.random(remaining) < gamma
        access_failure += int((~gained).sum())
        delivered += int((gained & ~lost).sum())
        remaining = int((gained & lost).sum())

    return LinkOutcomeCounts(
        trials=size,
        delivered=delivered,
        access_failure=access_failure,
        retry_limit=remaining,
    )
