"""
Routing metrics and parent selection.

ETX, the reliability-maximizing R-metric, the load-balancing Q-metric and a
back-pressure baseline, together with the selection matrix they produce.
"""

from .metrickind import *
from .parentselection import *
from .selectionmatrix import *

# Public classes and functions. Order is reflected in documentation.
__all__ = [
    "MetricKind",
    "ETX",
    "R_METRIC",
    "Q_METRIC",
    "BACKPRESSURE",
    "METRIC_TAGS",
    "etx_link",
    "select_parent_etx",
    "select_parent_r_metric",
    "select_parent_q_metric",
    "select_parent_backpressure",
    "SelectionMatrix",
    "build_selection_matrix",
    "path_to_root",
    "end_to_end_reliability",
]

# Set correct module paths. Corrects links and module paths in documentation.
MetricKind.__module__ = "macaware.metrics"
SelectionMatrix.__module__ = "macaware.metrics"
