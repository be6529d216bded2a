import unittest

import numpy as np

from macaware import metrics, topology
from tests.testing import NumpyAssertions


class SelectionMatrixTestCase(unittest.TestCase, NumpyAssertions):
    def setUp(self) -> None:
        self.dodag = topology.build_dodag(topology.load_fixture("fig1a"))
        self.choices = {
            "V1": "V0",
            "V2": "V0",
            "V3": "V0",
            "V4": "V1",
            "V5": "V2",
            "V6": "V2",
            "V7": "V3",
        }
        self.selection = metrics.build_selection_matrix(self.dodag, self.choices)

    def test_rows_select_one_parent(self):
        self.assertRowStochastic(self.selection.as_array(), skip_rows=(0,))
        self.assertEqual(self.selection.parents(), self.choices)
        self.assertIsNone(self.selection.parent_of("V0"))

    def test_equality_and_hash(self):
        other = metrics.build_selection_matrix(self.dodag, dict(self.choices))
        self.assertEqual(other, self.selection)
        self.assertEqual(hash(other), hash(self.selection))
        moved = metrics.build_selection_matrix(self.dodag, {**self.choices, "V5": "V3"})
        self.assertNotEqual(moved, self.selection)

    def test_invalid_choices_raise(self):
        with self.assertRaises(ValueError):
            metrics.build_selection_matrix(self.dodag, {**self.choices, "V4": "V2"})
        missing = dict(self.choices)
        del missing["V7"]
        with self.assertRaises(ValueError):
            metrics.build_selection_matrix(self.dodag, missing)

    def test_path_to_root(self):
        self.assertEqual(metrics.path_to_root("V5", self.selection), ["V5", "V2", "V0"])
        self.assertEqual(metrics.path_to_root("V0", self.selection), ["V0"])

    def test_path_with_cycle_raises(self):
        entries = np.zeros((3, 3))
        entries[1, 2] = entries[2, 1] = 1.0
        selection = metrics.SelectionMatrix(["V0", "V1", "V2"], "V0", entries)
        with self.assertRaises(ValueError):
            metrics.path_to_root("V1", selection)

    def test_end_to_end_reliability(self):
        links = {(s, d): 0.9 for s, d in [("V5", "V2"), ("V2", "V0")]}
        self.assertAlmostEqual(
            metrics.end_to_end_reliability("V5", self.selection, links), 0.81
        )
        matrix = np.full((8, 8), 0.5)
        self.assertAlmostEqual(
            metrics.end_to_end_reliability("V4", self.selection, matrix), 0.25
        )
        self.assertEqual(
            metrics.end_to_end_reliability("V0", self.selection, matrix), 1.0
        )


if __name__ == "__main__":
    unittest.main()
