"""Custom assertions for test cases in unittest."""

import numpy as np

from tests.testing.statistics import binomial_halfwidth

__all__ = ["NumpyAssertions"]


class NumpyAssertions:
    """Wraps numpy's assert statements and adds checks on probabilities."""

    __unittest = True  # avoids printing traceback from this class

    def assertAllClose(
        self, actual, desired, rtol=1e-7, atol=0, equal_nan=True, msg=""
    ):
        """
        Raises an AssertionError if two objects are not equal up to desired
        tolerance.

        The test is equivalent to ``allclose(actual, desired, rtol, atol)``. It
        compares the difference between `actual` and `desired` to
        ``atol + rtol * abs(desired)``.
        """
        np.testing.assert_allclose(
            actual=actual,
            desired=desired,
            rtol=rtol,
            atol=atol,
            equal_nan=equal_nan,
            err_msg=msg,
        )

    def assertArrayEqual(self, actual, desired, msg=""):
        """
        Raises an AssertionError if two array_like objects are not equal.

        NaNs in the same positions compare equal.
        """
        np.testing.assert_array_equal(x=actual, y=desired, err_msg=msg, verbose=True)

    def assertArrayLess(self, smaller, larger, msg=""):
        """Raises an AssertionError unless ``smaller`` is below ``larger``."""
        np.testing.assert_array_less(x=smaller, y=larger, err_msg=msg, verbose=True)

    def assertProbability(self, value, msg=""):
        """Raises an AssertionError if ``value`` has entries outside of [0, 1]."""
        value = np.asarray(value, dtype=float)
        if np.any(np.isnan(value)) or np.any(value < 0.0) or np.any(value > 1.0):
            raise AssertionError(f"Not a probability: {value}. {msg}")

    def assertRowStochastic(self, matrix, skip_rows=(), msg=""):
        """
        Raises an AssertionError unless every row of ``matrix`` has exactly one
        entry equal to one and zeros elsewhere. Rows in ``skip_rows`` must be zero.
        """
        matrix = np.asarray(matrix, dtype=float)
        for i, row in enumerate(matrix):
            if i in skip_rows:
                np.testing.assert_array_equal(row, 0.0, err_msg=msg)
                continue
            self.assertEqual(int(np.count_nonzero(row)), 1, msg=f"row {i}. {msg}")
            self.assertEqual(float(row.sum()), 1.0, msg=f"row {i}. {msg}")

    def assertWithinBinomialBand(
        self, frequency, probability, trials, z=3.0, msg=""
    ):
        """
        Raises an AssertionError if an observed ``frequency`` out of ``trials``
        Bernoulli trials lies more than ``z`` standard errors from ``probability``.

        A floor of half a count keeps the band positive for probabilities of zero
        or one.
        """
        halfwidth = max(binomial_halfwidth(probability, trials, z), 0.5 / trials)
        if abs(frequency - probability) > halfwidth:
            raise AssertionError(
                f"Frequency {frequency} is not within {halfwidth:.3g} of "
                f"{probability} over {trials} trials. {msg}"
            )
