"""
Custom type aliases.

This module defines commonly used types in the library. These are separated into two
different kinds, API types and argument types.

API types are aliases which define custom types used throughout the library. Objects of
this type may be supplied as arguments or returned by a method.

Argument types are aliases which define commonly used method arguments. These should
only ever be used in the signature of a method and then be converted internally, e.g.
in a class instantiation or an interface. They enable the user to conveniently
specify a variety of object types for the same argument, while ensuring a unified
internal representation of those same objects.
"""

import numbers
import os
from typing import Any, Mapping, Union

import numpy as np

########################################################################################
# API Types
########################################################################################

NodeIdType = str
"""Identifier of a network node, e.g. ``"V3"``."""

RandomStateType = np.random.Generator
"""Type of a random number generator. All randomness in the library is drawn from
:class:`numpy.random.Generator` objects backed by :class:`numpy.random.PCG64`."""

########################################################################################
# Argument Types
########################################################################################

IntArgType = Union[int, numbers.Integral, np.integer]
FloatArgType = Union[float, numbers.Real, np.floating]

ProbabilityArgType = FloatArgType
"""Type of a public API argument for supplying a probability. Values of this type
should always be validated with :func:`macaware.utils.as_probability` before further
internal processing."""

RandomStateArgType = Union[None, int, np.random.SeedSequence, np.random.Generator]
"""Type of a public API argument for supplying a random number generator. Values of
this type should always be converted into :class:`RandomStateType` using the function
:func:`macaware.utils.as_random_state` before further internal processing."""

DocumentArgType = Union[str, bytes, os.PathLike, Mapping[str, Any]]
"""Type of a public API argument for supplying a JSON document: a path to a file, the
JSON text itself or an already parsed mapping."""
