"""
Service delay, queueing delay and power of a CSMA/CA sender.

All quantities follow from the same backoff/retry chain as the loss probabilities:
a transmission stage runs through at most ``m + 1`` backoff stages, each a uniform
draw from the current backoff window followed by a clear channel assessment, and a
packet runs through at most ``n + 1`` transmission stages.
"""

from typing import Tuple

import numpy as np

from macaware import utils
from macaware.mac._params import MacParams, PowerProfile, Timing
from macaware.type import FloatArgType, ProbabilityArgType

__all__ = [
    "expected_service_delay",
    "service_time_moments",
    "expected_queueing_delay",
    "node_power",
]


def _access_stage_weights(alpha: float, params: MacParams) -> np.ndarray:
    """Distribution of the backoff stage at which the channel is found idle."""
    stages = np.arange(params.m + 1)
    norm = 1.0 - alpha ** (params.m + 1)
    if norm <= 0.0:
        return np.full(params.m + 1, 1.0 / (params.m + 1))
    return alpha ** stages * (1.0 - alpha) / norm


def _retry_stage_weights(alpha: float, gamma: float, params: MacParams) -> np.ndarray:
    """Distribution of the transmission stage at which a packet is acknowledged."""
    x = gamma * (1.0 - alpha ** (params.m + 1))
    weights = np.power(x, np.arange(params.n + 1))
    return weights / weights.sum()


def _attempt_moments(
    alpha: float, params: MacParams, timing: Timing
) -> Tuple[float, float]:
    """Mean and variance in slots of one attempt that gained the channel."""
    weights = _access_stage_weights(alpha, params)
    stage_means = np.cumsum(params.backoff_means() + timing.t_cca)
    stage_vars = np.cumsum(params.backoff_variances())
    csma_mean = float(weights @ stage_means)
    csma_var = float(weights @ (stage_vars + stage_means ** 2)) - csma_mean ** 2
    return csma_mean + timing.t_tx + timing.t_ack, max(csma_var, 0.0)


def service_time_moments(
    alpha: ProbabilityArgType,
    gamma: ProbabilityArgType,
    params: MacParams,
    timing: Timing,
) -> Tuple[float, float]:
    """
    First and second moment of the service time of acknowledged packets.

    The service time of a packet acknowledged in transmission stage :math:`k` is the
    sum of :math:`k + 1` independent attempt durations. Backoff draws are discrete
    uniform on :math:`\\{0, \\dots, W - 1\\}`, with variance :math:`(W^2 - 1) / 12`.

    Returns
    -------
    mean :
        Expected service time in seconds.
    second_moment :
        Second moment of the service time in seconds squared.
    """
    alpha = utils.as_probability(alpha, "alpha")
    gamma = utils.as_probability(gamma, "gamma")
    attempt_mean, attempt_var = _attempt_moments(alpha, params, timing)
    weights = _retry_stage_weights(alpha, gamma, params)
    n_attempts = np.arange(1, params.n + 2)
    mean = float(weights @ n_attempts) * attempt_mean
    second = float(
        weights @ (n_attempts * attempt_var + n_attempts ** 2 * attempt_mean ** 2)
    )
    return mean * timing.slot, second * timing.slot ** 2


def expected_service_delay(
    alpha: ProbabilityArgType,
    gamma: ProbabilityArgType,
    params: MacParams,
    timing: Timing,
) -> float:
    """
    Expected time from head of queue to acknowledgement of a delivered packet.

    Conditioned on success, each transmission attempt finds the channel idle at
    backoff stage :math:`s` with probability
    :math:`\\alpha^s (1 - \\alpha) / (1 - \\alpha^{m+1})` and spends the backoff and CCA
    time of stages :math:`0, \\dots, s`, followed by :math:`t_{tx} + t_{ack}`. The
    transmission stage :math:`k` of the acknowledged attempt has weight proportional
    to :math:`(\\gamma (1 - \\alpha^{m+1}))^k`.

    Parameters
    ----------
    alpha :
        Busy channel probability at the sender.
    gamma :
        Per-attempt loss probability.
    params :
        CSMA/CA parameters.
    timing :
        Radio timing constants.

    Returns
    -------
    delay :
        Expected service delay in seconds.

    Examples
    --------
    >>> from macaware.mac import MacParams, Timing, expected_service_delay
    >>> params = MacParams(m0=3, mb=3, m=0, n=0)
    >>> round(expected_service_delay(0.0, 0.0, params, Timing()) * 1e3, 9)
    6.56
    """
    return service_time_moments(alpha, gamma, params, timing)[0]


def expected_queueing_delay(
    arrival_rate: FloatArgType,
    alpha: ProbabilityArgType,
    gamma: ProbabilityArgType,
    params: MacParams,
    timing: Timing,
) -> float:
    """
    Mean waiting time in the transmit queue.

    The queue is treated as M/G/1 with the service time of
    :func:`service_time_moments`, giving the Pollaczek-Khinchine mean
    :math:`\\lambda E[S^2] / (2 (1 - \\rho))` with :math:`\\rho = \\lambda E[S]`.

    Returns
    -------
    delay :
        Expected queueing delay in seconds, ``inf`` if the queue is unstable.
    """
    arrival_rate = utils.as_nonnegative(arrival_rate, "arrival_rate")
    if arrival_rate == 0.0:
        return 0.0
    mean, second = service_time_moments(alpha, gamma, params, timing)
    rho = arrival_rate * mean
    if rho >= 1.0:
        return float("inf")
    return arrival_rate * second / (2.0 * (1.0 - rho))


def node_power(
    tx_rate: FloatArgType,
    rx_rate: FloatArgType,
    alpha: ProbabilityArgType,
    gamma: ProbabilityArgType,
    params: MacParams,
    timing: Timing,
    profile: PowerProfile,
) -> float:
    """
    Average power drawn by a node.

    Linear state-occupancy model: every offered packet runs through on average
    :math:`\\sum_{k=0}^{n} x^k` transmission stages, with
    :math:`x = \\gamma(1-\\alpha^{m+1})`.
    Each stage spends :math:`\\alpha^j \\bar b_j` slots in backoff and
    :math:`\\alpha^j t_{cca}` slots in carrier sense for :math:`j = 0, \\dots, m`, and
    with probability :math:`1 - \\alpha^{m+1}` transmits for :math:`t_{tx}` and listens
    for the acknowledgement for :math:`t_{ack}`. Every received packet costs
    :math:`t_{tx} + t_{ack}` in receive state. The remaining time is idle.

    Parameters
    ----------
    tx_rate :
        Packets per second handed to the MAC, generated and forwarded.
    rx_rate :
        Packets per second received from children.
    alpha :
        Busy channel probability at the node.
    gamma :
        Per-attempt loss probability towards the parent.
    params :
        CSMA/CA parameters.
    timing :
        Radio timing constants.
    profile :
        Power drawn in each radio state.

    Returns
    -------
    power :
        Average power in watts.

    Raises
    ------
    ValueError
        If the node is saturated, i.e. its busy time fraction exceeds one.

    Examples
    --------
    >>> from macaware.mac import MacParams, PowerProfile, Timing, node_power
    >>> node_power(0.0, 0.0, 0.1, 0.1, MacParams(), Timing(), PowerProfile())
    0.0015
    """
    tx_rate = utils.as_nonnegative(tx_rate, "tx_rate")
    rx_rate = utils.as_nonnegative(rx_rate, "rx_rate")
    alpha = utils.as_probability(alpha, "alpha")
    gamma = utils.as_probability(gamma, "gamma")

    access = 1.0 - alpha ** (params.m + 1)
    n_stages = float(np.sum(np.power(gamma * access, np.arange(params.n + 1))))
    reach = np.power(alpha, np.arange(params.m + 1))

    slots_per_packet = {
        "backoff": n_stages * float(reach @ params.backoff_means()),
        "cca": n_stages * timing.t_cca * float(reach.sum()),
        "tx": n_stages * access * timing.t_tx,
        "ack": n_stages * access * timing.t_ack,
    }
    fractions = {
        state: tx_rate * slots * timing.slot
        for state, slots in slots_per_packet.items()
    }
    fractions["rx"] = rx_rate * (timing.t_tx + timing.t_ack) * timing.slot

    busy = sum(fractions.values())
    if busy > 1.0:
        raise ValueError(
            f"Node is saturated: busy time fraction {busy:.3f} exceeds one "
            f"(tx_rate={tx_rate}, rx_rate={rx_rate})."
        )

    return (
        fractions["backoff"] * profile.p_backoff
        + fractions["cca"] * profile.p_cca
        + fractions["tx"] * profile.p_tx
        + (fractions["ack"] + fractions["rx"]) * profile.p_rx
        + (1.0 - busy) * profile.p_idle
    )
