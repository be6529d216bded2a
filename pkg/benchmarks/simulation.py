"""
Benchmarks for the discrete-event simulator.
"""

from benchmarks.benchmark_utils import load_network
from macaware.metrics import BACKPRESSURE, R_METRIC, MetricKind
from macaware.simulation import SimConfig, run_simulation


class RunSimulation:
    """Benchmark ten simulated seconds."""

    param_names = ["network", "metric"]
    params = [["fig1a", "fig1b"], [R_METRIC, BACKPRESSURE]]
    timeout = 300

    def setup(self, network, metric):
        # pylint: disable=attribute-defined-outside-init
        self.topo, self.dodag = load_network(network)
        self.config = SimConfig(duration=10.0, seed=42, metric=MetricKind(metric))

    def time_run(self, network, metric):
        """Time a simulation run"""
        # pylint: disable=unused-argument
        run_simulation(self.topo, self.dodag, self.config)

    def track_packets(self, network, metric):
        """Packets generated in the run"""
        # pylint: disable=unused-argument
        trace, _ = run_simulation(self.topo, self.dodag, self.config)
        return len(trace.packets)
