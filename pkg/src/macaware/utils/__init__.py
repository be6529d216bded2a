from .argutils import *
from .randomutils import *

# Public classes and functions. Order is reflected in documentation.
__all__ = [
    "as_probability",
    "as_nonnegative",
    "as_count",
    "as_random_state",
    "stream_for_run",
    "spawn_streams",
]
