"""Routing metric tags and their parameters."""

import dataclasses
from typing import Optional

from macaware.type import FloatArgType

__all__ = ["MetricKind", "ETX", "R_METRIC", "Q_METRIC", "BACKPRESSURE", "METRIC_TAGS"]

ETX = "ETX"
R_METRIC = "R_METRIC"
Q_METRIC = "Q_METRIC"
BACKPRESSURE = "BACKPRESSURE"

METRIC_TAGS = (ETX, R_METRIC, Q_METRIC, BACKPRESSURE)

_ALIASES = {
    "etx": ETX,
    "r": R_METRIC,
    "r_metric": R_METRIC,
    "r-metric": R_METRIC,
    "q": Q_METRIC,
    "q_metric": Q_METRIC,
    "q-metric": Q_METRIC,
    "bp": BACKPRESSURE,
    "backpressure": BACKPRESSURE,
}


@dataclasses.dataclass(frozen=True)
class MetricKind:
    """
    Routing metric used for parent selection.

    Parameters
    ----------
    tag :
        One of ``"ETX"``, ``"R_METRIC"``, ``"Q_METRIC"`` or ``"BACKPRESSURE"``.
    rmin :
        End-to-end reliability floor of the Q-metric, in :math:`(0, 1]`.
    bp_weight :
        Weight :math:`V \\geq 0` of the link ETX in the back-pressure weight.

    Examples
    --------
    >>> from macaware.metrics import MetricKind
    >>> MetricKind.from_string("q", rmin=0.95)
    MetricKind(tag='Q_METRIC', rmin=0.95, bp_weight=1.0)
    """

    tag: str
    rmin: float = 0.9
    bp_weight: float = 1.0

    def __post_init__(self):
        if self.tag not in METRIC_TAGS:
            raise ValueError(
                f"Unknown metric tag {self.tag!r}, expected one of {METRIC_TAGS}."
            )
        rmin = float(self.rmin)
        if not 0.0 < rmin <= 1.0:
            raise ValueError(f"rmin must lie in (0, 1], got {rmin}.")
        bp_weight = float(self.bp_weight)
        if bp_weight < 0.0:
            raise ValueError(f"bp_weight must be non-negative, got {bp_weight}.")
        object.__setattr__(self, "rmin", rmin)
        object.__setattr__(self, "bp_weight", bp_weight)

    @classmethod
    def from_string(
        cls,
        name: str,
        rmin: Optional[FloatArgType] = None,
        bp_weight: Optional[FloatArgType] = None,
    ) -> "MetricKind":
        """Build a metric from a command line name such as ``"r"`` or ``"etx"``."""
        key = str(name).strip()
        tag = _ALIASES.get(key.lower(), key.upper())
        kwargs = {}
        if rmin is not None:
            kwargs["rmin"] = rmin
        if bp_weight is not None:
            kwargs["bp_weight"] = bp_weight
        return cls(tag=tag, **kwargs)

    @property
    def short_name(self) -> str:
        return {ETX: "etx", R_METRIC: "r", Q_METRIC: "q", BACKPRESSURE: "backpressure"}[
            self.tag
        ]
