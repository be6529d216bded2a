import unittest

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from macaware import mac
from macaware.simulation import (
    AckEvent,
    CcaEvent,
    NodeEstimators,
    convergence_index,
    online_estimators_step,
    steady_state_variance,
)
from tests.testing import NumpyAssertions


class NodeEstimatorsTestCase(unittest.TestCase, NumpyAssertions):
    def setUp(self) -> None:
        self.est = NodeEstimators(r=0.5, alpha_window=4, etx_window=3)

    def test_alpha_updates_once_per_window(self):
        for busy in (True, True, False):
            self.est.on_cca(busy)
        self.assertEqual(self.est.alpha, 0.0)
        self.assertEqual(self.est.n_windows, 0)
        self.est.on_cca(False)
        self.assertAlmostEqual(self.est.alpha, 0.25)
        self.assertEqual(self.est.n_windows, 1)

    def test_etx_falls_back_to_link_prior(self):
        self.assertAlmostEqual(self.est.etx("V1", p_bad=0.2), 1.25)
        self.assertTrue(np.isnan(self.est.etx("V1")))
        self.assertEqual(self.est.etx("V1", p_bad=1.0), np.inf)

    def test_windowed_etx(self):
        for acked in (False, True, True, False, False, True):
            self.est.on_attempt("V1", acked)
        # attempts per acknowledgement: 2, 1, 3
        self.assertAlmostEqual(self.est.etx("V1"), 2.0)
        self.assertAlmostEqual(self.est.etx_reliability("V1"), 0.5)
        for _ in range(3):
            self.est.on_attempt("V1", True)
        self.assertAlmostEqual(self.est.etx("V1"), 1.0)

    def test_etx_reliability_needs_a_full_window(self):
        self.est.on_attempt("V2", True)
        self.est.on_attempt("V2", True)
        self.assertTrue(np.isnan(self.est.etx_reliability("V2")))
        self.est.on_attempt("V2", True)
        self.assertEqual(self.est.etx_reliability("V2"), 1.0)

    def test_links_are_tracked_separately(self):
        self.est.on_attempt("V1", False)
        self.est.on_attempt("V2", True)
        self.assertEqual(self.est.etx("V2"), 1.0)
        self.est.on_attempt("V1", True)
        self.assertEqual(self.est.etx("V1"), 2.0)

    def test_alpha_reliability_matches_closed_form(self):
        params, timing = mac.MacParams(), mac.Timing()
        self.est.alpha = 0.3
        self.assertAlmostEqual(
            self.est.alpha_reliability(0.1, params, timing),
            mac.link_reliability(0.3, 0.1, params, timing),
        )

    def test_invalid_arguments_raise(self):
        with self.assertRaises(ValueError):
            NodeEstimators(r=1.0)
        with self.assertRaises(ValueError):
            NodeEstimators(alpha_window=0)
        with self.assertRaises(ValueError):
            NodeEstimators(alpha0=1.5)

    @given(st.lists(st.booleans(), min_size=1, max_size=200))
    def test_alpha_stays_a_probability(self, events):
        est = NodeEstimators(alpha_window=3)
        for busy in events:
            est.on_cca(busy)
        self.assertProbability(est.alpha)


class OnlineEstimatorsStepTestCase(unittest.TestCase):
    def test_events_are_dispatched(self):
        est = NodeEstimators(alpha_window=1, r=0.5)
        snapshot = online_estimators_step(est, CcaEvent(busy=True))
        self.assertAlmostEqual(snapshot.alpha, 0.5)
        self.assertEqual(snapshot.n_windows, 1)
        online_estimators_step(est, AckEvent(parent="V1", acked=True))
        self.assertEqual(est.etx("V1"), 1.0)

    def test_unknown_event_raises(self):
        with self.assertRaises(TypeError):
            online_estimators_step(NodeEstimators(), "busy")

    def test_constant_channel_converges_to_its_busy_fraction(self):
        est = NodeEstimators(r=0.9, alpha_window=10)
        rng = np.random.default_rng(3)
        for busy in rng.random(20000) < 0.3:
            online_estimators_step(est, CcaEvent(busy=bool(busy)))
        self.assertAlmostEqual(est.alpha, 0.3, delta=0.1)


class ConvergenceStatisticsTestCase(unittest.TestCase):
    def test_settled_series_has_index_zero(self):
        self.assertEqual(convergence_index([0.9] * 10), 0)

    def test_leading_nan_counts_as_unsettled(self):
        series = [np.nan] * 4 + [0.8] * 12
        self.assertEqual(convergence_index(series), 4)

    def test_all_nan_series(self):
        self.assertEqual(convergence_index([np.nan, np.nan]), 2)
        self.assertTrue(np.isnan(steady_state_variance([np.nan] * 6)))

    def test_steady_state_variance_uses_second_half(self):
        series = [100.0, -100.0, 1.0, 3.0]
        self.assertAlmostEqual(steady_state_variance(series), 2.0)


if __name__ == "__main__":
    unittest.main()
