import json
import math
import os
import tempfile
import unittest

import numpy as np

from macaware import cli, mac, metrics


class ParseHelpersTestCase(unittest.TestCase):
    def test_assignments(self):
        self.assertEqual(cli.parse_assignments("m0=3, mb=5"), {"m0": 3.0, "mb": 5.0})
        for text in ("V2", "=3", "V2=fast"):
            with self.subTest(text):
                with self.assertRaises(ValueError):
                    cli.parse_assignments([text])

    def test_grid(self):
        self.assertEqual(cli.parse_grid("1e-3,inf"), (1e-3, math.inf))
        with self.assertRaises(ValueError):
            cli.parse_grid("0.9,high")

    def test_space(self):
        self.assertEqual(
            cli.parse_space("m0=3:5,mb=8"), {"m0": (3, 4, 5), "mb": (8,)}
        )
        for text in ("n=0:3", "m0=a:b", "m0"):
            with self.subTest(text):
                with self.assertRaises(ValueError):
                    cli.parse_space(text)

    def test_sweep(self):
        np.testing.assert_allclose(cli.parse_sweep("1:100:log3"), [1.0, 10.0, 100.0])
        self.assertEqual(len(cli.parse_sweep("0.1:10:lin7")), 7)
        for text in ("1:10", "1:10:geo3", "0:10:log3", "5:1:lin2", "1:2:lin0"):
            with self.subTest(text):
                with self.assertRaises(ValueError):
                    cli.parse_sweep(text)

    def test_metrics(self):
        self.assertEqual(
            cli.parse_metrics("r,bp"), (metrics.R_METRIC, metrics.BACKPRESSURE)
        )
        with self.assertRaises(ValueError):
            cli.parse_metrics("r,hops")


class ExperimentConfigTestCase(unittest.TestCase):
    def test_defaults(self):
        config = cli.ExperimentConfig()
        self.assertEqual(config.metric_kind, metrics.MetricKind(metrics.R_METRIC))
        self.assertEqual(config.mac, mac.MacParams())
        self.assertEqual(config.metrics, (metrics.R_METRIC, metrics.Q_METRIC))

    def test_none_keeps_current_value(self):
        config = cli.ExperimentConfig(seed=4).merged_with({"seed": None, "rmin": 0.5})
        self.assertEqual(config.seed, 4)
        self.assertEqual(config.metric_kind.rmin, 0.5)

    def test_nested_records_accept_partial_mappings(self):
        config = cli.ExperimentConfig().merged_with({"mac": {"m": 2}})
        self.assertEqual(config.mac, mac.MacParams(m=2))
        with self.assertRaises(ValueError):
            cli.ExperimentConfig().merged_with({"mac": {"m": 9}})

    def test_traffic_overrides_merge(self):
        config = cli.ExperimentConfig(traffic={"V1": 2.0})
        merged = config.merged_with({"traffic": ["V2=20"]})
        self.assertEqual(merged.traffic, {"V1": 2.0, "V2": 20.0})

    def test_unknown_field_raises(self):
        with self.assertRaisesRegex(ValueError, "colour"):
            cli.ExperimentConfig().merged_with({"colour": "red"})

    def test_invalid_values_raise(self):
        with self.assertRaises(ValueError):
            cli.ExperimentConfig(compare_mode="guess")
        with self.assertRaises(ValueError):
            cli.ExperimentConfig(replications=0)

    def test_from_json_sources(self):
        document = {"topology": "star5", "mac": {"m0": 4, "mb": 6}, "seed": 3}
        from_mapping = cli.ExperimentConfig.from_json(document)
        from_text = cli.ExperimentConfig.from_json(json.dumps(document))
        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, "config.json")
            with open(path, "w") as file:
                json.dump(document, file)
            from_file = cli.ExperimentConfig.from_json(path)
        self.assertEqual(from_mapping, from_text)
        self.assertEqual(from_mapping, from_file)
        self.assertEqual(from_file.mac, mac.MacParams(m0=4, mb=6))

    def test_load_topology(self):
        config = cli.ExperimentConfig(topology="fig1a", lambda_all=2.0)
        topo = config.merged_with({"traffic": {"V2": 20.0}}).load_topology()
        self.assertEqual(topo.node("V2").lambda_pps, 20.0)
        self.assertEqual(topo.node("V1").lambda_pps, 2.0)
        with self.assertRaises(ValueError):
            cli.ExperimentConfig().load_topology()
        with self.assertRaises(FileNotFoundError):
            cli.ExperimentConfig(topology="/nonexistent.json").load_topology()

    def test_sim_config(self):
        config = cli.ExperimentConfig(metric="q", rmin=0.8, duration=7.0, seed=9)
        sim_config = config.sim_config(warmup=1.0)
        self.assertEqual(sim_config.metric, metrics.MetricKind(metrics.Q_METRIC, 0.8))
        self.assertEqual((sim_config.duration, sim_config.seed), (7.0, 9))
        self.assertEqual(sim_config.warmup, 1.0)


if __name__ == "__main__":
    unittest.main()
