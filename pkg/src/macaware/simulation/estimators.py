"""
Online estimators a node maintains from its own radio events.

The busy channel estimate folds the fraction of busy CCAs of every window into an
exponential moving average. The windowed ETX counts transmission attempts per
acknowledgement over the last acknowledgements of a link.
"""

import collections
import dataclasses
from typing import Deque, Dict, Optional, Union

import numpy as np

from macaware import utils
from macaware.mac import MacParams, Timing, link_reliability, update_alpha_estimate
from macaware.type import NodeIdType

__all__ = [
    "CcaEvent",
    "AckEvent",
    "EstimateSnapshot",
    "NodeEstimators",
    "online_estimators_step",
    "convergence_index",
    "steady_state_variance",
]


@dataclasses.dataclass(frozen=True)
class CcaEvent:
    busy: bool


@dataclasses.dataclass(frozen=True)
class AckEvent:
    """Outcome of one transmission attempt to ``parent``; a timeout if not acked."""

    parent: NodeIdType
    acked: bool


@dataclasses.dataclass(frozen=True)
class EstimateSnapshot:
    alpha: float
    n_windows: int


class NodeEstimators:
    """
    Busy channel and link quality estimates of one node.

    Parameters
    ----------
    r :
        Smoothing factor of the busy channel estimate.
    alpha_window :
        Number of CCAs per busy channel estimation window.
    etx_window :
        Number of acknowledgements in the windowed ETX.
    alpha0 :
        Initial busy channel estimate.

    Examples
    --------
    >>> from macaware.simulation import NodeEstimators
    >>> est = NodeEstimators(r=0.5, alpha_window=2, alpha0=1.0)
    >>> for busy in (False, False, False, False):
    ...     est.on_cca(busy)
    >>> est.alpha
    0.25
    """

    def __init__(
        self,
        r: float = 0.9,
        alpha_window: int = 10,
        etx_window: int = 10,
        alpha0: float = 0.0,
    ):
        if not 0.0 < r < 1.0:
            raise ValueError(f"r must lie in (0, 1), got {r}.")
        self.r = float(r)
        self.alpha_window = utils.as_count(alpha_window, "alpha_window", lower=1)
        self.etx_window = utils.as_count(etx_window, "etx_window", lower=1)
        self.alpha = utils.as_probability(alpha0, "alpha0")
        self.n_windows = 0
        self._busy = 0
        self._sensed = 0
        self._attempts: Dict[NodeIdType, Deque[int]] = {}
        self._pending: Dict[NodeIdType, int] = collections.defaultdict(int)

    def on_cca(self, busy: bool):
        self._sensed += 1
        self._busy += int(busy)
        if self._sensed == self.alpha_window:
            sample = self._busy / self._sensed
            self.alpha = update_alpha_estimate(self.alpha, sample, self.r)
            self.n_windows += 1
            self._busy = self._sensed = 0

    def on_attempt(self, parent: NodeIdType, acked: bool):
        self._pending[parent] += 1
        if acked:
            window = self._attempts.setdefault(
                parent, collections.deque(maxlen=self.etx_window)
            )
            window.append(self._pending.pop(parent))

    def etx(self, parent: NodeIdType, p_bad: Optional[float] = None) -> float:
        """
        Windowed ETX of the link to ``parent``.

        Links without acknowledgements fall back to the link quality prior
        :math:`1 / (1 - p_{bad})`, or NaN without prior.
        """
        window = self._attempts.get(parent)
        if window:
            return sum(window) / len(window)
        if p_bad is None or p_bad >= 1.0:
            return np.nan if p_bad is None else np.inf
        return 1.0 / (1.0 - p_bad)

    def etx_reliability(self, parent: NodeIdType) -> float:
        """Delivery ratio :math:`1/ETX` of a full window, NaN before."""
        window = self._attempts.get(parent)
        if window is None or len(window) < self.etx_window:
            return np.nan
        return len(window) / sum(window)

    def alpha_reliability(
        self, p_bad: float, params: MacParams, timing: Timing
    ) -> float:
        """Link reliability implied by the busy channel estimate."""
        return link_reliability(self.alpha, p_bad, params, timing)

    def snapshot(self) -> EstimateSnapshot:
        return EstimateSnapshot(alpha=self.alpha, n_windows=self.n_windows)


def online_estimators_step(
    estimators: NodeEstimators, event: Union[CcaEvent, AckEvent]
) -> EstimateSnapshot:
    """
    Feed one radio event to the estimators of a node.

    Examples
    --------
    >>> from macaware.simulation import CcaEvent, NodeEstimators, online_estimators_step
    >>> est = NodeEstimators(alpha_window=1)
    >>> round(online_estimators_step(est, CcaEvent(busy=True)).alpha, 12)
    0.1
    """
    if isinstance(event, CcaEvent):
        estimators.on_cca(event.busy)
    elif isinstance(event, AckEvent):
        estimators.on_attempt(event.parent, event.acked)
    else:
        raise TypeError(f"Unknown estimator event {event!r}.")
    return estimators.snapshot()


def _steady_state(series: np.ndarray) -> float:
    tail = series[series.shape[0] // 2 :]
    tail = tail[~np.isnan(tail)]
    if tail.size == 0:
        return np.nan
    return float(np.mean(tail))


def convergence_index(series, band: float = 0.05) -> int:
    """
    Number of samples before an estimate settles around its steady state.

    The steady state is the mean of the second half of the series. The result is one
    past the last sample that is NaN or farther than ``band`` from it, so a series
    that starts inside the band has index 0.

    Examples
    --------
    >>> from macaware.simulation import convergence_index
    >>> convergence_index([0.0, 0.5, 1.0, 1.0, 1.0, 1.0])
    2
    """
    series = np.asarray(series, dtype=float)
    steady = _steady_state(series)
    if np.isnan(steady):
        return int(series.shape[0])
    outside = np.isnan(series) | (np.abs(series - steady) > band)
    idx = np.flatnonzero(outside)
    return int(idx[-1] + 1) if idx.size else 0


def steady_state_variance(series) -> float:
    """Sample variance of the non-NaN second half of a series."""
    series = np.asarray(series, dtype=float)
    tail = series[series.shape[0] // 2 :]
    tail = tail[~np.isnan(tail)]
    if tail.size < 2:
        return np.nan
    return float(np.var(tail, ddof=1))
