import unittest

import numpy as np

from macaware import utils
from tests.testing import NumpyAssertions


class RandomUtilsTestCase(unittest.TestCase, NumpyAssertions):
    """Test case for utility functions handling random streams."""

    def setUp(self) -> None:
        self.seed = 42

    def test_as_random_state_uses_pcg64(self):
        rng = utils.as_random_state(self.seed)
        self.assertIsInstance(rng.bit_generator, np.random.PCG64)

    def test_as_random_state_passes_generator_through(self):
        rng = np.random.default_rng(self.seed)
        self.assertIs(utils.as_random_state(rng), rng)

    def test_as_random_state_rejects_legacy_state(self):
        with self.assertRaises(TypeError):
            utils.as_random_state(np.random.RandomState(self.seed))
        with self.assertRaises(TypeError):
            utils.as_random_state("42")

    def test_stream_for_run_is_reproducible(self):
        a = utils.stream_for_run(self.seed, 3).random(10)
        b = utils.stream_for_run(self.seed, 3).random(10)
        self.assertArrayEqual(a, b)

    def test_streams_of_different_runs_differ(self):
        a = utils.stream_for_run(self.seed, 0).random(10)
        b = utils.stream_for_run(self.seed, 1).random(10)
        c = utils.stream_for_run(self.seed + 1, 0).random(10)
        self.assertFalse(np.array_equal(a, b))
        self.assertFalse(np.array_equal(a, c))

    def test_spawn_streams_are_independent_and_reproducible(self):
        first = [s.random(5) for s in utils.spawn_streams(self.seed, 4, run_index=2)]
        second = [s.random(5) for s in utils.spawn_streams(self.seed, 4, run_index=2)]
        self.assertEqual(len(first), 4)
        for a, b in zip(first, second):
            self.assertArrayEqual(a, b)
        self.assertFalse(np.array_equal(first[0], first[1]))


class ArgUtilsTestCase(unittest.TestCase):
    def test_as_probability(self):
        self.assertEqual(utils.as_probability(1), 1.0)
        self.assertEqual(utils.as_probability(np.float64(0.25)), 0.25)
        for value in (-0.1, 1.1, float("nan")):
            with self.subTest(value=value):
                with self.assertRaises(ValueError):
                    utils.as_probability(value)
        with self.assertRaises(TypeError):
            utils.as_probability("0.5")

    def test_as_nonnegative(self):
        self.assertEqual(utils.as_nonnegative(0), 0.0)
        with self.assertRaises(ValueError):
            utils.as_nonnegative(-1e-9)
        with self.assertRaises(ValueError):
            utils.as_nonnegative(float("nan"))

    def test_as_count(self):
        self.assertEqual(utils.as_count(np.int64(3)), 3)
        with self.assertRaises(TypeError):
            utils.as_count(True)
        with self.assertRaises(TypeError):
            utils.as_count(2.0)
        with self.assertRaises(ValueError):
            utils.as_count(0, lower=1)


if __name__ == "__main__":
    unittest.main()
