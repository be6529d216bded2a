import io
import json
import os
import tempfile
import unittest

import numpy as np
import pandas as pd
import pytest

from macaware import mac, metrics, simulation, topology
from tests.testing import NumpyAssertions


class SimConfigTestCase(unittest.TestCase):
    def test_defaults(self):
        config = simulation.SimConfig()
        self.assertEqual(config.metric.tag, metrics.R_METRIC)
        self.assertEqual(config.mac, mac.MacParams())
        self.assertEqual(config.replace(seed=3).seed, 3)

    def test_invalid_values_raise(self):
        cases = {
            "duration": dict(duration=0.0),
            "reselect_period": dict(reselect_period=-1.0),
            "alpha_smoothing": dict(alpha_smoothing=1.0),
            "arrival": dict(arrival="bursty"),
            "jitter": dict(jitter=1.0),
            "warmup": dict(duration=10.0, warmup=10.0),
            "queue_capacity": dict(queue_capacity=0),
            "scripted_alpha": dict(scripted_alpha={"V1": 1.2}),
        }
        for name, kwargs in cases.items():
            with self.subTest(name):
                with self.assertRaises(ValueError):
                    simulation.SimConfig(**kwargs)

    def test_non_integer_seed_raises(self):
        with self.assertRaises(TypeError):
            simulation.SimConfig(seed=1.5)


class RunSimulationTestCase(unittest.TestCase, NumpyAssertions):
    def setUp(self) -> None:
        self.topo = topology.load_fixture("fig1a")
        self.dodag = topology.build_dodag(self.topo)
        self.config = simulation.SimConfig(duration=10.0, seed=7)

    def test_same_seed_and_run_are_identical(self):
        trace_a, report_a = simulation.run_simulation(
            self.topo, self.dodag, self.config
        )
        trace_b, report_b = simulation.run_simulation(
            self.topo, self.dodag, self.config
        )
        pd.testing.assert_frame_equal(report_a.frame, report_b.frame)
        self.assertEqual(trace_a.to_jsonl(), trace_b.to_jsonl())

    def test_runs_use_independent_streams(self):
        trace_a, _ = simulation.run_simulation(self.topo, self.dodag, self.config)
        trace_b, _ = simulation.run_simulation(
            self.topo, self.dodag, self.config, run_index=1
        )
        self.assertNotEqual(trace_a.to_jsonl(), trace_b.to_jsonl())

    def test_every_packet_is_accounted_for(self):
        trace, report = simulation.run_simulation(self.topo, self.dodag, self.config)
        total = 0
        for node_id in self.dodag.non_root():
            counts = trace.outcome_counts(node_id)
            with self.subTest(node_id):
                self.assertGreater(counts["generated"], 0)
                self.assertEqual(
                    counts["generated"],
                    sum(v for k, v in counts.items() if k != "generated"),
                )
            total += counts["generated"]
        self.assertEqual(total, len(trace.packets))

    def test_report_columns_and_ranges(self):
        _, report = simulation.run_simulation(self.topo, self.dodag, self.config)
        self.assertEqual(list(report.frame.columns), list(simulation.REPORT_COLUMNS))
        self.assertEqual(report.nodes, self.topo.node_ids)
        rows = report.frame[report.frame["node"] != "V0"]
        self.assertProbability(rows["e2e_reliability"].to_numpy())
        self.assertProbability(rows["alpha"].to_numpy())
        self.assertTrue((rows["power_w"] > 0.0).all())
        for node_id, parent in zip(rows["node"], rows["parent"]):
            self.assertIn(parent, self.dodag.candidates(node_id))
        summary = report.summary()
        self.assertGreater(summary["avg_reliability"], 0.5)
        self.assertEqual(summary["switches"], report.total_switches)

    def test_light_traffic_is_mostly_delivered(self):
        topo = topology.load_fixture("chain3")
        _, report = simulation.run_simulation(
            topo, topology.build_dodag(topo), self.config.replace(duration=50.0)
        )
        reliability = report.frame.set_index("node")["e2e_reliability"]
        # one hop over a link with small p_bad at one packet/s
        self.assertGreater(reliability["V1"], 0.9)

    def test_power_lies_between_sleep_and_transmit(self):
        trace, report = simulation.run_simulation(self.topo, self.dodag, self.config)
        profile = self.config.profile
        rows = report.frame[report.frame["node"] != "V0"]
        self.assertTrue((rows["power_w"] >= profile.p_idle).all())
        self.assertTrue((rows["power_w"] <= profile.p_rx).all())
        for counters in trace.counters.values():
            self.assertAlmostEqual(
                sum(counters.state_time.values()), trace.duration, places=6
            )

    def test_warmup_excludes_early_packets(self):
        config = self.config.replace(warmup=4.0)
        trace, _ = simulation.run_simulation(self.topo, self.dodag, config)
        self.assertAlmostEqual(trace.duration, 6.0)
        self.assertTrue(all(packet.birth >= 4.0 for packet in trace.packets))

    def test_poisson_arrivals(self):
        config = self.config.replace(arrival="poisson")
        trace, _ = simulation.run_simulation(self.topo, self.dodag, config)
        # 7 sources at 5 packets/s for 10 s
        self.assertAlmostEqual(len(trace.packets), 350, delta=5 * np.sqrt(350))

    def test_traffic_override(self):
        config = self.config.replace(traffic={"V2": 20.0})
        trace, _ = simulation.run_simulation(self.topo, self.dodag, config)
        generated = trace.outcome_counts("V2")["generated"]
        self.assertAlmostEqual(generated, 200, delta=5)

    def test_small_queue_overflows_under_overload(self):
        topo = topology.load_fixture("star5").with_traffic(default=200.0)
        config = self.config.replace(duration=5.0, queue_capacity=1)
        trace, _ = simulation.run_simulation(topo, topology.build_dodag(topo), config)
        overflow = sum(
            trace.outcome_counts(i)["queue-overflow"] for i in ("V1", "V2", "V3")
        )
        self.assertGreater(overflow, 0)

    def test_scripted_interferer_raises_busy_fraction(self):
        topo = topology.load_fixture("chain3")
        dodag = topology.build_dodag(topo)
        config = self.config.replace(duration=50.0)
        quiet = simulation.run_simulation(topo, dodag, config)[1]
        config = config.replace(scripted_alpha={"V3": 0.5})
        noisy = simulation.run_simulation(topo, dodag, config)[1]
        quiet_alpha = quiet.frame.set_index("node")["alpha"]["V3"]
        noisy_alpha = noisy.frame.set_index("node")["alpha"]["V3"]
        self.assertGreater(noisy_alpha, quiet_alpha + 0.2)

    def test_invalid_inputs_raise(self):
        with self.assertRaises(ValueError):
            simulation.run_simulation(
                self.topo,
                self.dodag,
                self.config.replace(scripted_alpha={"V42": 0.1}),
            )
        other = topology.build_dodag(topology.load_fixture("star5"))
        with self.assertRaises(ValueError):
            simulation.run_simulation(self.topo, other, self.config)


def _topology(rates, links):
    """Topology rooted at ``V0`` from per-node rates and ``(src, dst, p_bad)``."""
    nodes = [{"id": "V0", "lambda_pps": 0.0}]
    nodes += [{"id": i, "lambda_pps": rate} for i, rate in rates.items()]
    return topology.load_topology(
        {
            "root": "V0",
            "nodes": nodes,
            "links": [{"src": s, "dst": d, "p_bad": p} for s, d, p in links],
        }
    )


class RadioAccountingTestCase(unittest.TestCase):
    def setUp(self) -> None:
        # V2 reaches the root only through V1
        self.topo = _topology(
            {"V1": 0.1, "V2": 5.0}, [("V1", "V0", 0.0), ("V2", "V1", 0.5)]
        )
        self.dodag = topology.build_dodag(self.topo)
        self.config = simulation.SimConfig(duration=20.0, seed=3)

    def test_receiver_books_every_frame_addressed_to_it(self):
        trace, _ = simulation.run_simulation(self.topo, self.dodag, self.config)
        timing = self.config.timing
        sender = trace.counters["V2"]
        expected = (
            sender.tx_attempts * timing.airtime
            + sender.acked * timing.t_ack * timing.slot
        )
        rx_time = trace.counters["V1"].state_time["rx"]
        self.assertGreater(sender.tx_attempts, sender.acked)
        # lost frames keep the receiver busy as well as delivered ones
        self.assertGreater(rx_time, sender.acked * timing.airtime)
        self.assertLessEqual(rx_time, expected + 1e-9)
        self.assertGreater(rx_time, 0.95 * expected)

    def test_state_times_add_up_to_the_measured_span(self):
        topo = topology.load_fixture("fig1a").with_traffic(default=20.0)
        config = self.config.replace(duration=10.0, warmup=2.0)
        trace, _ = simulation.run_simulation(topo, topology.build_dodag(topo), config)
        self.assertAlmostEqual(trace.duration, 8.0)
        for node_id, counters in trace.counters.items():
            with self.subTest(node_id):
                self.assertTrue(all(t >= 0.0 for t in counters.state_time.values()))
                self.assertAlmostEqual(
                    sum(counters.state_time.values()), trace.duration, places=6
                )

    def test_overlapping_claims_follow_the_precedence(self):
        self.assertEqual(
            simulation.RADIO_PRECEDENCE, ("tx", "ack", "rx", "cca", "backoff")
        )


class SingleLinkTestCase(unittest.TestCase, NumpyAssertions):
    def test_contention_free_limit(self):
        topo = _topology(
            {"V1": 0.01, "V2": 0.01, "V3": 0.01},
            [("V1", "V0", 0.0), ("V2", "V1", 0.0), ("V3", "V2", 0.0)],
        )
        dodag = topology.build_dodag(topo)
        config = simulation.SimConfig(duration=30000.0, seed=11)
        trace, report = simulation.run_simulation(topo, dodag, config)
        rows = report.frame.set_index("node").drop(index="V0")
        for node_id, row in rows.iterrows():
            with self.subTest(node_id):
                self.assertGreater(trace.outcome_counts(node_id)["generated"], 250)
                self.assertGreaterEqual(row["e2e_reliability"], 0.99)
                self.assertLessEqual(row["alpha"], 0.01)

    @pytest.mark.slow
    def test_single_attempt_over_a_half_lossy_link(self):
        topo = _topology({"V1": 10.0}, [("V1", "V0", 0.5)])
        params = mac.MacParams(n=0, m=7)
        self.assertAlmostEqual(
            mac.link_reliability(0.0, 0.5, params, mac.Timing()), 0.5
        )
        config = simulation.SimConfig(duration=1000.0, seed=5, mac=params)
        trace, _ = simulation.run_simulation(topo, topology.build_dodag(topo), config)
        counts = trace.outcome_counts("V1")
        # a lone sender always finds the channel idle
        self.assertEqual(counts["access-failure"], 0)
        served = counts["delivered"] + counts["retry-limit"]
        self.assertGreater(served, 9900)
        self.assertWithinBinomialBand(counts["delivered"] / served, 0.5, served)

    @pytest.mark.slow
    def test_scripted_interferer_matches_the_link_model(self):
        """
        A scripted busy probability makes a lone sender see the channel of the
        analytic link model. Discard frequencies then match the closed forms within
        three standard errors.
        """
        alpha, p_bad = 0.4, 0.1
        params = mac.MacParams(m=2, n=2)
        timing = mac.Timing()
        topo = _topology({"V1": 20.0}, [("V1", "V0", p_bad)])
        config = simulation.SimConfig(
            duration=5000.0,
            seed=17,
            mac=params,
            timing=timing,
            scripted_alpha={"V1": alpha},
        )
        trace, _ = simulation.run_simulation(topo, topology.build_dodag(topo), config)
        counts = trace.outcome_counts("V1")
        served = (
            counts["delivered"] + counts["access-failure"] + counts["retry-limit"]
        )
        self.assertGreater(served, 95000)
        gamma = mac.attempt_loss(mac.collision_probability(alpha, timing), p_bad)
        self.assertWithinBinomialBand(
            counts["access-failure"] / served,
            mac.access_failure_probability(alpha, gamma, params),
            served,
        )
        self.assertWithinBinomialBand(
            counts["retry-limit"] / served,
            mac.retry_exhaustion_probability(alpha, gamma, params),
            served,
        )
        self.assertWithinBinomialBand(
            counts["delivered"] / served,
            mac.link_reliability(alpha, p_bad, params, timing),
            served,
        )


class TraceTestCase(unittest.TestCase):
    def setUp(self) -> None:
        topo = topology.load_fixture("fig1a")
        self.dodag = topology.build_dodag(topo)
        config = simulation.SimConfig(duration=20.0, seed=1, record_estimates=True)
        self.trace, self.report = simulation.run_simulation(topo, self.dodag, config)

    def test_jsonl_lines_are_tagged_records(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, "trace.jsonl")
            text = self.trace.to_jsonl(path)
            with open(path) as file:
                self.assertEqual(file.read(), text)
        records = [json.loads(line) for line in text.splitlines()]
        kinds = {record["record"] for record in records}
        self.assertLessEqual(kinds, {"packet", "switch", "estimate"})
        self.assertIn("packet", kinds)
        self.assertIn("estimate", kinds)
        packets = [r for r in records if r["record"] == "packet"]
        self.assertEqual(len(packets), len(self.trace.packets))
        for packet in packets:
            self.assertIn(
                packet["outcome"],
                ("delivered", "in-flight") + simulation.DROP_CAUSES,
            )

    def test_switch_counts_match_events(self):
        counts = self.trace.switch_counts()
        self.assertEqual(set(counts), set(self.dodag.non_root()))
        self.assertEqual(sum(counts.values()), len(self.trace.switches))

    def test_etx_estimate_needs_a_full_window(self):
        series = self.trace.estimate_series("V4")
        self.assertGreater(len(series), 20)
        self.assertTrue(series["etx_reliability"].iloc[:9].isna().all())
        self.assertTrue(np.isfinite(series["alpha_reliability"]).all())
        self.assertGreaterEqual(
            simulation.convergence_index(series["etx_reliability"]), 9
        )

    def test_report_csv(self):
        frame = pd.read_csv(
            io.StringIO(self.report.to_csv()), keep_default_na=False
        )
        self.assertEqual(len(frame), 8)


class PeriodicReselectionTestCase(unittest.TestCase):
    def setUp(self) -> None:
        topo = topology.load_fixture("fig1a")
        self.sim = simulation.Simulation(
            topo, topology.build_dodag(topo), simulation.SimConfig(duration=5.0)
        )

    def test_reselection_follows_the_metric(self):
        motes = [self.sim.motes[i] for i in ("V5", "V6", "V7")]
        simulation.periodic_reselection(0.0, motes, self.sim)
        for mote in motes:
            self.assertEqual(mote.parent, self.sim.choose_parent(mote))
        # a second pass with unchanged estimates is stable
        self.assertEqual(simulation.periodic_reselection(0.0, motes, self.sim), [])

    def test_time_must_match_the_clock(self):
        with self.assertRaises(ValueError):
            simulation.periodic_reselection(1.0, [], self.sim)

    def test_switches_are_recorded(self):
        mote = self.sim.motes["V7"]
        old = mote.parent
        other = "V3" if old == "V2" else "V2"
        event = self.sim.switch_parent(mote, other)
        self.assertEqual((event.old_parent, event.new_parent), (old, other))
        self.assertEqual(mote.parent, other)
        self.assertIsNone(self.sim.switch_parent(mote, other))
        self.assertEqual(self.sim.switches, [event])


class ReplicateTestCase(unittest.TestCase):
    def test_confidence_columns(self):
        topo = topology.load_fixture("chain3")
        summary = simulation.replicate(
            topo,
            topology.build_dodag(topo),
            simulation.SimConfig(duration=5.0),
            replications=3,
        )
        self.assertEqual(len(summary.reports), 3)
        self.assertEqual(len(summary.runs), 3)
        self.assertIn("e2e_reliability_ci", summary.frame.columns)
        self.assertIn("power_w_ci", summary.frame.columns)
        row = summary.frame.set_index("node").loc["V3"]
        self.assertGreaterEqual(row["e2e_reliability_ci"], 0.0)
        self.assertIn("avg_reliability", summary.summary())

    def test_single_replication_has_no_interval(self):
        topo = topology.load_fixture("chain3")
        summary = simulation.replicate(
            topo,
            topology.build_dodag(topo),
            simulation.SimConfig(duration=5.0),
            replications=1,
        )
        self.assertTrue(summary.frame["q_pps_ci"].isna().all())


@pytest.mark.slow
class MetricChurnTestCase(unittest.TestCase):
    def test_backpressure_switches_far_more_than_r_metric(self):
        topo = topology.load_fixture("fig1a").with_traffic({"V2": 20.0})
        dodag = topology.build_dodag(topo)
        config = simulation.SimConfig(duration=30.0, seed=2)
        _, r_report = simulation.run_simulation(topo, dodag, config)
        bp = config.replace(metric=metrics.MetricKind(metrics.BACKPRESSURE))
        _, bp_report = simulation.run_simulation(topo, dodag, bp)
        self.assertGreater(bp_report.total_switches, 2 * r_report.total_switches)

    def test_all_metrics_run(self):
        topo = topology.load_fixture("fig1a")
        dodag = topology.build_dodag(topo)
        for tag in metrics.METRIC_TAGS:
            config = simulation.SimConfig(
                duration=10.0, metric=metrics.MetricKind(tag)
            )
            with self.subTest(tag):
                _, report = simulation.run_simulation(topo, dodag, config)
                self.assertGreater(report.summary()["avg_reliability"], 0.5)


if __name__ == "__main__":
    unittest.main()
