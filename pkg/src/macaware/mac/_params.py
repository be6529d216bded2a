"""Parameter records of the unslotted CSMA/CA model."""

import dataclasses

import numpy as np

from macaware import utils

__all__ = ["MacParams", "Timing", "PowerProfile"]


@dataclasses.dataclass(frozen=True)
class MacParams:
    """
    Knobs of the unslotted IEEE 802.15.4 CSMA/CA algorithm.

    Parameters
    ----------
    m0 :
        Initial backoff exponent.
    mb :
        Maximum backoff exponent.
    m :
        Maximum number of backoffs, i.e. a transmission attempt is abandoned after
        ``m + 1`` busy clear channel assessments.
    n :
        Maximum number of retransmissions of a packet.

    Raises
    ------
    ValueError
        If ``0 <= m0 <= mb <= 8``, ``0 <= m <= 7`` or ``0 <= n <= 7`` is violated.

    Examples
    --------
    >>> from macaware.mac import MacParams
    >>> MacParams()
    MacParams(m0=3, mb=5, m=4, n=3)
    >>> MacParams(m0=3, mb=3, m=0, n=0).backoff_means()
    array([3.5])
    """

    m0: int = 3
    mb: int = 5
    m: int = 4
    n: int = 3

    def __post_init__(self):
        for name in ("m0", "mb", "m", "n"):
            object.__setattr__(self, name, utils.as_count(getattr(self, name), name))
        if not self.m0 <= self.mb <= 8:
            raise ValueError(
                f"Backoff exponents must satisfy 0 <= m0 <= mb <= 8, "
                f"got m0={self.m0}, mb={self.mb}."
            )
        if self.m > 7:
            raise ValueError(f"m must lie in [0, 7], got {self.m}.")
        if self.n > 7:
            raise ValueError(f"n must lie in [0, 7], got {self.n}.")

    def backoff_windows(self) -> np.ndarray:
        """Backoff window sizes :math:`2^{\\min(m_0 + j, m_b)}` of stages ``0..m``."""
        exponents = np.minimum(self.m0 + np.arange(self.m + 1), self.mb)
        return np.power(2.0, exponents)

    def backoff_means(self) -> np.ndarray:
        """Mean backoff duration in slots of each backoff stage ``0..m``."""
        return (self.backoff_windows() - 1.0) / 2.0

    def backoff_variances(self) -> np.ndarray:
        """Variance of the discrete uniform backoff draw of each backoff stage."""
        return (self.backoff_windows() ** 2 - 1.0) / 12.0

    def replace(self, **changes) -> "MacParams":
        return dataclasses.replace(self, **changes)


@dataclasses.dataclass(frozen=True)
class Timing:
    """
    Timing constants of the radio.

    All durations except ``slot`` are expressed in unit backoff periods. The default
    packet airtime of 14 slots corresponds to a 133-byte frame at 250 kb/s.

    Parameters
    ----------
    slot :
        Duration of a unit backoff period in seconds.
    t_cca :
        Clear channel assessment duration.
    t_tx :
        Packet transmission duration.
    t_ack :
        Acknowledgement wait plus acknowledgement duration.
    """

    slot: float = 320e-6
    t_cca: float = 1.0
    t_tx: float = 14.0
    t_ack: float = 2.0

    def __post_init__(self):
        for name in ("slot", "t_cca", "t_tx", "t_ack"):
            value = float(getattr(self, name))
            if not value > 0.0:
                raise ValueError(
                    f"Timing.{name} must be strictly positive, got {value}."
                )
            object.__setattr__(self, name, value)
        if self.t_tx < 1.0:
            raise ValueError(f"Timing.t_tx must be at least one slot, got {self.t_tx}.")

    @property
    def airtime(self) -> float:
        """Packet transmission duration in seconds."""
        return self.t_tx * self.slot


@dataclasses.dataclass(frozen=True)
class PowerProfile:
    """
    Power drawn by the radio in each of its states, in watts.

    Defaults are CC2420-class catalog values.
    """

    p_tx: float = 57e-3
    p_rx: float = 63e-3
    p_cca: float = 63e-3
    p_backoff: float = 1.5e-3
    p_idle: float = 1.5e-3

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = utils.as_nonnegative(
                getattr(self, field.name), f"PowerProfile.{field.name}"
            )
            object.__setattr__(self, field.name, value)
