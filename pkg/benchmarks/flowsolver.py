"""
Benchmarks for the analytical network solver.
"""

from benchmarks.benchmark_utils import load_network
from macaware.flowsolver import solve_network
from macaware.metrics import METRIC_TAGS, MetricKind


class SolveNetwork:
    """Benchmark the flow balance fixed point."""

    param_names = ["network", "metric"]
    params = [["fig1a", "fig1b", "random50"], list(METRIC_TAGS)]

    def setup(self, network, metric):
        # pylint: disable=attribute-defined-outside-init
        self.topo, self.dodag = load_network(network)
        self.metric = MetricKind(metric)

    def time_solve(self, network, metric):
        """Time solving a network"""
        # pylint: disable=unused-argument
        solve_network(self.topo, self.dodag, self.metric)

    def track_iterations(self, network, metric):
        """Iterations until the busy channel probabilities settle"""
        # pylint: disable=unused-argument
        return solve_network(self.topo, self.dodag, self.metric).iterations
