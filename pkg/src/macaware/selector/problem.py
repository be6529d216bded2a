"""The MAC parameter search space and the objective of a search."""

import dataclasses
import itertools
import math
from typing import Iterator, Optional, Sequence, Tuple

from macaware.mac import MacParams, PowerProfile, Timing
from macaware.metrics import METRIC_TAGS, Q_METRIC, R_METRIC
from macaware.topology import Dodag, Topology, build_dodag

__all__ = ["SelectionProblem"]


def _as_grid(values: Sequence[float], name: str) -> Tuple[float, ...]:
    grid = tuple(sorted({float(v) for v in values}))
    if any(math.isnan(v) for v in grid):
        raise ValueError(f"{name} must not contain NaN.")
    return grid


@dataclasses.dataclass(frozen=True)
class SelectionProblem:
    """
    Joint choice of routing metric and CSMA/CA parameters.

    Every combination of ``metrics``, ``m0_range``, ``mb_range`` and ``m_range`` with
    :math:`m_b \\geq m_0` is a candidate configuration. Every pair of a reliability
    floor from ``rmin_grid`` and a delay bound from ``dmax_grid`` is a constraint
    cell, in which the feasible configuration with the least maximum node power is
    sought.

    Parameters
    ----------
    topo :
        Network topology with traffic rates.
    rmin_grid :
        End-to-end reliability floors, sorted on construction.
    dmax_grid :
        End-to-end delay bounds in seconds, sorted on construction.
    m0_range :
        Initial backoff exponents.
    mb_range :
        Maximum backoff exponents.
    m_range :
        Maximum numbers of backoffs.
    metrics :
        Routing metric tags.
    n :
        Maximum number of retransmissions, fixed over the search.
    timing :
        Radio timing constants.
    profile :
        Radio power profile.
    dodag :
        DODAG of ``topo``, built if not given.

    Examples
    --------
    >>> from macaware.selector import SelectionProblem
    >>> from macaware.topology import load_fixture
    >>> problem = SelectionProblem(load_fixture("fig1a"), rmin_grid=[0.9, 0.5])
    >>> problem.rmin_grid
    (0.5, 0.9)
    >>> problem.n_configurations
    210
    """

    topo: Topology
    rmin_grid: Sequence[float] = (0.0,)
    dmax_grid: Sequence[float] = (math.inf,)
    m0_range: Sequence[int] = tuple(range(3, 9))
    mb_range: Sequence[int] = tuple(range(3, 9))
    m_range: Sequence[int] = tuple(range(0, 5))
    metrics: Sequence[str] = (R_METRIC, Q_METRIC)
    n: int = 3
    timing: Timing = Timing()
    profile: PowerProfile = PowerProfile()
    dodag: Optional[Dodag] = None

    def __post_init__(self):
        rmin_grid = _as_grid(self.rmin_grid, "rmin_grid")
        if any(not 0.0 <= v <= 1.0 for v in rmin_grid):
            raise ValueError(f"rmin_grid must lie in [0, 1], got {rmin_grid}.")
        dmax_grid = _as_grid(self.dmax_grid, "dmax_grid")
        if any(v <= 0.0 for v in dmax_grid):
            raise ValueError(f"dmax_grid must be positive, got {dmax_grid}.")
        unknown = set(self.metrics) - set(METRIC_TAGS)
        if unknown:
            raise ValueError(f"Unknown metrics {sorted(unknown)}.")
        object.__setattr__(self, "rmin_grid", rmin_grid)
        object.__setattr__(self, "dmax_grid", dmax_grid)
        object.__setattr__(self, "m0_range", tuple(sorted(set(self.m0_range))))
        object.__setattr__(self, "mb_range", tuple(sorted(set(self.mb_range))))
        object.__setattr__(self, "m_range", tuple(sorted(set(self.m_range))))
        object.__setattr__(self, "metrics", tuple(sorted(set(self.metrics))))
        if self.dodag is None:
            object.__setattr__(self, "dodag", build_dodag(self.topo))
        # MacParams validates the ranges.
        list(self.configurations())

    def configurations(self) -> Iterator[MacParams]:
        """MAC configurations of the search space in lexicographic order."""
        for m0, mb, m in itertools.product(self.m0_range, self.mb_range, self.m_range):
            if mb >= m0:
                yield MacParams(m0=m0, mb=mb, m=m, n=self.n)

    @property
    def n_configurations(self) -> int:
        """Number of (metric, MAC configuration) pairs."""
        return len(self.metrics) * sum(1 for _ in self.configurations())

    @property
    def cells(self) -> Iterator[Tuple[float, float]]:
        return itertools.product(self.rmin_grid, self.dmax_grid)
