import numbers

import numpy as np

from macaware.type import (
    FloatArgType,
    IntArgType,
    ProbabilityArgType,
    RandomStateArgType,
    RandomStateType,
)

__all__ = ["as_probability", "as_nonnegative", "as_count", "as_random_state"]


def as_random_state(x: RandomStateArgType) -> RandomStateType:
    """
    Convert a seed or generator into a PCG64-backed :class:`numpy.random.Generator`.

    Generators are passed through unchanged so that callers can share a stream.

    Examples
    --------
    >>> from macaware.utils import as_random_state
    >>> rng = as_random_state(42)
    >>> type(rng.bit_generator).__name__
    'PCG64'
    """
    if isinstance(x, np.random.Generator):
        return x
    seeds = (numbers.Integral, np.integer, np.random.SeedSequence)
    if x is None or isinstance(x, seeds):
        return np.random.Generator(np.random.PCG64(x))
    raise TypeError(f"Cannot convert {x!r} of type {type(x)} into a random generator.")


def as_probability(x: ProbabilityArgType, name: str = "probability") -> float:
    """
    Validate that ``x`` is a real number in :math:`[0, 1]` and return it as a float.

    Raises
    ------
    TypeError
        If ``x`` is not a real scalar.
    ValueError
        If ``x`` lies outside of :math:`[0, 1]` or is NaN.
    """
    if not isinstance(x, (numbers.Real, np.floating, np.integer)):
        raise TypeError(f"{name} must be a real number, got {type(x).__name__}.")
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {x}.")
    return x


def as_nonnegative(x: FloatArgType, name: str = "value") -> float:
    if not isinstance(x, (numbers.Real, np.floating, np.integer)):
        raise TypeError(f"{name} must be a real number, got {type(x).__name__}.")
    x = float(x)
    if not x >= 0.0:
        raise ValueError(f"{name} must be non-negative, got {x}.")
    return x


def as_count(x: IntArgType, name: str = "count", lower: int = 0) -> int:
    if isinstance(x, bool) or not isinstance(x, (numbers.Integral, np.integer)):
        raise TypeError(f"{name} must be an integer, got {type(x).__name__}.")
    x = int(x)
    if x < lower:
        raise ValueError(f"{name} must be at least {lower}, got {x}.")
    return x
