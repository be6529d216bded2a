import io
import unittest

import numpy as np
import pandas as pd

from macaware import flowsolver, mac, metrics, topology
from tests.testing import NumpyAssertions


class SolveNetworkTestCase(unittest.TestCase, NumpyAssertions):
    def setUp(self) -> None:
        self.topo = topology.load_fixture("fig1a")
        self.dodag = topology.build_dodag(self.topo)
        self.r_metric = metrics.MetricKind(metrics.R_METRIC)

    def test_solution_invariants(self):
        for tag in metrics.METRIC_TAGS:
            with self.subTest(tag):
                solution = flowsolver.solve_network(
                    self.topo, self.dodag, metrics.MetricKind(tag)
                )
                if tag in (metrics.R_METRIC, metrics.ETX):
                    self.assertTrue(solution.converged)
                mask = solution.non_root_mask
                self.assertTrue(np.all(solution.q >= solution.lambda_ - 1e-9))
                self.assertProbability(solution.alpha)
                self.assertProbability(solution.e2e_reliability)
                self.assertTrue(np.all(solution.e2e_delay[mask] > 0.0))
                self.assertTrue(np.isnan(solution.node_power[~mask]).all())
                self.assertRowStochastic(
                    solution.selection.as_array(), skip_rows=(0,)
                )

    def test_star_routes_to_root(self):
        topo = topology.load_fixture("star5")
        solution = flowsolver.solve_network(topo)
        self.assertEqual(set(solution.selection.parents().values()), {"V0"})
        idx = [topo.index(i) for i in ("V1", "V2", "V3", "V4", "V5")]
        # single hop: end-to-end reliability is the link reliability
        self.assertAllClose(
            solution.e2e_reliability[idx],
            [solution.link_reliability[i, 0] for i in idx],
        )
        # the root receives what its children deliver
        self.assertAllClose(
            solution.q[0], float(solution.e2e_reliability[idx] @ solution.lambda_[idx])
        )

    def test_r_metric_prefers_reliable_path(self):
        solution = flowsolver.solve_network(self.topo, self.dodag, self.r_metric)
        # V2's links have the lowest bad channel probability
        self.assertEqual(solution.parent_of("V5"), "V2")
        self.assertEqual(solution.parent_of("V4"), "V1")

    def test_dominant_node_q_metric_balances_load(self):
        topo = self.topo.with_traffic({"V2": 20.0})
        r_solution = flowsolver.solve_network(topo, metric=self.r_metric)
        q_solution = flowsolver.solve_network(
            topo, metric=metrics.MetricKind(metrics.Q_METRIC, rmin=0.9)
        )
        self.assertLess(q_solution.max_power, 0.75 * r_solution.max_power)
        self.assertLess(
            q_solution.q[topo.index("V2")], r_solution.q[topo.index("V2")]
        )
        self.assertEqual(q_solution.flagged, ())

    def test_dominant_node_power_under_r_metric(self):
        topo = self.topo.with_traffic({"V2": 20.0})
        solution = flowsolver.solve_network(topo, metric=self.r_metric)
        mask = solution.non_root_mask
        power = solution.node_power
        self.assertEqual(solution.nodes[int(np.nanargmax(power))], "V2")
        self.assertTrue(15e-3 <= solution.max_power <= 20e-3)
        # the idle floor bounds every other node from below
        self.assertTrue(np.all(power[mask] >= mac.PowerProfile().p_idle))

    def test_root_only_network(self):
        topo = topology.load_topology(
            {"root": "V0", "nodes": [{"id": "V0", "lambda_pps": 0.0}], "links": []}
        )
        solution = flowsolver.solve_network(topo)
        self.assertEqual(solution.max_power, 0.0)
        self.assertEqual(solution.summary()["max_power_w"], 0.0)
        self.assertEqual(solution.summary()["min_reliability"], 1.0)
    def test_unreachable_floor_is_flagged(self):
        solution = flowsolver.solve_network(
            self.topo, metric=metrics.MetricKind(metrics.Q_METRIC, rmin=1.0)
        )
        self.assertEqual(set(solution.flagged), set(self.dodag.non_root()))

    def test_more_traffic_costs_reliability_and_power(self):
        light = flowsolver.solve_network(self.topo.with_traffic(default=1.0))
        heavy = flowsolver.solve_network(self.topo.with_traffic(default=10.0))
        self.assertGreater(
            light.summary()["avg_reliability"], heavy.summary()["avg_reliability"]
        )
        self.assertLess(light.max_power, heavy.max_power)
        self.assertArrayLess(light.alpha, heavy.alpha + 1e-12)

    def test_non_convergence_warns(self):
        with self.assertWarns(RuntimeWarning):
            solution = flowsolver.solve_network(self.topo, maxiter=1)
        self.assertFalse(solution.converged)
        self.assertEqual(solution.iterations, 1)

    def test_invalid_solver_options_raise(self):
        with self.assertRaises(ValueError):
            flowsolver.solve_network(self.topo, damping=0.0)
        other = topology.build_dodag(topology.load_fixture("star5"))
        with self.assertRaises(ValueError):
            flowsolver.solve_network(self.topo, other)

    def test_csv_has_one_row_per_node(self):
        solution = flowsolver.solve_network(self.topo)
        frame = pd.read_csv(io.StringIO(solution.to_csv()))
        self.assertEqual(list(frame.columns), list(flowsolver.SOLUTION_COLUMNS))
        self.assertEqual(len(frame), 8)
        self.assertEqual(list(frame["node"]), list(self.topo.node_ids))


class FixedPointPropertiesTestCase(unittest.TestCase, NumpyAssertions):
    def setUp(self) -> None:
        self.tags = (metrics.R_METRIC, metrics.ETX, metrics.Q_METRIC)
        self.topos = {name: topology.load_fixture(name) for name in topology.FIXTURES}
        for seed in (1, 2):
            self.topos[f"random{seed}"] = topology.generate_random_topology(
                12, seed=seed
            )

    def _solutions(self):
        for name, topo in self.topos.items():
            dodag = topology.build_dodag(topo)
            for tag in self.tags:
                yield name, tag, flowsolver.solve_network(
                    topo, dodag, metrics.MetricKind(tag)
                )

    def test_fixed_point_does_not_depend_on_the_start(self):
        for name in topology.FIXTURES:
            topo = self.topos[name]
            dodag = topology.build_dodag(topo)
            for tag in self.tags:
                with self.subTest(topology=name, metric=tag):
                    cold, warm = (
                        flowsolver.solve_network(
                            topo, dodag, metrics.MetricKind(tag), alpha0=alpha0
                        )
                        for alpha0 in (0.0, 0.5)
                    )
                    self.assertTrue(cold.converged and warm.converged)
                    self.assertLessEqual(
                        float(np.max(np.abs(cold.alpha - warm.alpha))), 1e-4
                    )

    def test_repeated_solves_are_identical(self):
        first = list(self._solutions())
        for (name, tag, a), (_, _, b) in zip(first, self._solutions()):
            with self.subTest(topology=name, metric=tag):
                self.assertArrayEqual(a.alpha, b.alpha)
                self.assertArrayEqual(a.q, b.q)
                self.assertArrayEqual(a.node_power, b.node_power)
                self.assertEqual(a.selection.parents(), b.selection.parents())

    def test_paths_are_no_better_than_their_weakest_link(self):
        for name, tag, solution in self._solutions():
            with self.subTest(topology=name, metric=tag):
                for node_id in solution.nodes:
                    if node_id == solution.root_id:
                        continue
                    path = metrics.path_to_root(node_id, solution.selection)
                    weakest = min(
                        solution.link_reliability[solution.index(i), solution.index(j)]
                        for i, j in zip(path[:-1], path[1:])
                    )
                    self.assertLessEqual(
                        solution.e2e_reliability[solution.index(node_id)],
                        weakest + 1e-12,
                    )

    def test_forwarding_operator_is_contracting(self):
        for name, tag, solution in self._solutions():
            with self.subTest(topology=name, metric=tag):
                operator = solution.selection.as_array() * solution.link_reliability
                radius = np.max(np.abs(np.linalg.eigvals(operator)))
                self.assertLess(radius, 1.0)

    def test_q_metric_spreads_load_at_light_traffic(self):
        topo = topology.load_fixture("fig1b").with_traffic(default=1.0)
        dodag = topology.build_dodag(topo)
        r_solution = flowsolver.solve_network(
            topo, dodag, metrics.MetricKind(metrics.R_METRIC)
        )
        q_solution = flowsolver.solve_network(
            topo, dodag, metrics.MetricKind(metrics.Q_METRIC)
        )
        self.assertLessEqual(q_solution.max_power, 0.93 * r_solution.max_power)


class ConstraintsTestCase(unittest.TestCase):
    def setUp(self) -> None:
        self.topo = topology.load_fixture("star5")
        self.solution = flowsolver.solve_network(self.topo)

    def test_loose_constraints_are_feasible(self):
        evaluation = flowsolver.check_constraints(self.solution)
        self.assertTrue(evaluation.feasible)
        self.assertEqual(evaluation.objective, self.solution.max_power)
        self.assertEqual(evaluation.violations, ())

    def test_per_node_constraints(self):
        constraints = flowsolver.Constraints(rmin={"V5": 1.0}, dmax={"V1": 1e-6})
        evaluation = flowsolver.check_constraints(self.solution, constraints)
        self.assertFalse(evaluation.feasible)
        self.assertEqual(evaluation.violations, ("V1", "V5"))

    def test_evaluate_configuration(self):
        evaluation = flowsolver.evaluate_configuration(
            self.topo,
            metrics.MetricKind(metrics.R_METRIC),
            mac.MacParams(),
            constraints=flowsolver.Constraints(rmin=0.5, dmax=1.0),
        )
        self.assertTrue(evaluation.feasible)
        self.assertTrue(np.isfinite(evaluation.objective))


if __name__ == "__main__":
    unittest.main()
