"""
Benchmarks for the exhaustive configuration search.
"""

from benchmarks.benchmark_utils import load_network
from macaware.selector import SelectionProblem, select


class Select:
    """Benchmark the search over the full MAC parameter space."""

    timeout = 300

    def setup(self):
        # pylint: disable=attribute-defined-outside-init
        topo, dodag = load_network("fig1a")
        self.problem = SelectionProblem(
            topo, rmin_grid=[0.0, 0.9], dmax_grid=[0.05, float("inf")], dodag=dodag
        )

    def time_select(self):
        """Time selecting the best configuration of every cell"""
        select(self.problem)
