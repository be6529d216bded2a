"""Online estimation of the busy channel probability."""

from macaware import utils
from macaware.type import FloatArgType, ProbabilityArgType

__all__ = ["update_alpha_estimate"]


def update_alpha_estimate(
    prev: ProbabilityArgType, sample: ProbabilityArgType, r: FloatArgType = 0.9
) -> float:
    """
    Fold a new busy channel sample into the running estimate.

    Exponential smoothing :math:`\\alpha(t) = r \\alpha(t-1) + (1 - r) \\hat\\alpha(t)`,
    where :math:`\\hat\\alpha(t)` is the busy fraction of the CCAs in the last window.

    Parameters
    ----------
    prev :
        Previous estimate.
    sample :
        Busy fraction observed in the current window.
    r :
        Smoothing factor in :math:`(0, 1)`.

    Raises
    ------
    ValueError
        If ``r`` is not in the open unit interval or an input is not a probability.

    Examples
    --------
    >>> from macaware.mac import update_alpha_estimate
    >>> round(update_alpha_estimate(0.0, 1.0, r=0.9), 12)
    0.1
    """
    prev = utils.as_probability(prev, "prev")
    sample = utils.as_probability(sample, "sample")
    r = float(r)
    if not 0.0 < r < 1.0:
        raise ValueError(f"Smoothing factor r must lie in (0, 1), got {r}.")
    return r * prev + (1.0 - r) * sample
