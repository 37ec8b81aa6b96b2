import math
import unittest

import numpy as np
import pytest

from casimir_sdk.exceptions import AccuracyError
from casimir_sdk.quadrature import gauss_legendre, integrate_panels, richardson, stable_sum


class TestIntegratePanels(unittest.TestCase):

    def test_polynomial_is_exact(self):
        result = integrate_panels(lambda x: x ** 5 - 2 * x, [0.0, 1.0, 3.0])
        self.assertAlmostEqual(result.value, 3 ** 6 / 6 - 9, delta=1e-10)
        self.assertTrue(result.converged)

    def test_oscillatory(self):
        edges = np.linspace(0, 20 * math.pi, 41)
        result = integrate_panels(lambda x: x * np.sin(x), edges, rtol=1e-12, atol=1e-13)
        self.assertAlmostEqual(result.value, -20 * math.pi, delta=1e-9)

    def test_vector_valued(self):
        result = integrate_panels(lambda x: np.stack([np.exp(x), 1j * np.cos(x)], axis=-1), [0.0, 1.0])
        np.testing.assert_allclose(result.value, [math.e - 1, 1j * math.sin(1.0)], rtol=1e-12)

    def test_refinement_near_a_kink(self):
        result = integrate_panels(lambda x: np.sqrt(np.abs(x - 0.3)), [0.0, 1.0], rtol=1e-9)
        expected = (2 / 3) * (0.3 ** 1.5 + 0.7 ** 1.5)
        self.assertAlmostEqual(result.value, expected, delta=1e-7)

    def test_not_converged(self):
        result = integrate_panels(lambda x: 1 / np.sqrt(x), [0.0, 1.0], rtol=1e-14, max_depth=2)
        self.assertFalse(result.converged)
        with self.assertRaises(AccuracyError):
            integrate_panels(lambda x: 1 / np.sqrt(x), [0.0, 1.0], rtol=1e-14, max_depth=2, strict=True)

    def test_edges(self):
        with self.assertRaises(ValueError):
            integrate_panels(np.sin, [1.0])
        with self.assertRaises(ValueError):
            integrate_panels(np.sin, [0.0, 2.0, 1.0])

    def test_independent_of_panel_order(self):
        f = lambda x: np.exp(-x) * np.cos(3 * x)
        a = integrate_panels(f, np.linspace(0, 10, 11)).value
        b = integrate_panels(f, np.linspace(0, 10, 11)).value
        self.assertEqual(a, b)


class TestRichardson(unittest.TestCase):

    def test_removes_linear_and_quadratic_terms(self):
        deltas = [0.02, 0.01, 0.005]
        values = [4.0 + 3.0 * d - 7.0 * d ** 2 for d in deltas]
        value, error = richardson(deltas, values)
        self.assertAlmostEqual(value, 4.0, delta=1e-12)
        self.assertLess(error, 0.1)

    def test_single_value(self):
        value, error = richardson([0.1], [2.5])
        self.assertEqual(value, 2.5)
        self.assertTrue(math.isnan(error))

    def test_mismatched(self):
        with self.assertRaises(ValueError):
            richardson([0.1, 0.05], [1.0])


def test_gauss_legendre_is_read_only():
    nodes, weights = gauss_legendre(8)
    assert weights.sum() == pytest.approx(2.0)
    with pytest.raises(ValueError):
        nodes[0] = 0.0


def test_stable_sum():
    values = [1e16, 1.0, -1e16, 1.0]
    assert stable_sum(values) == 2.0
    assert stable_sum(np.array([1e16 + 1j, 1.0, -1e16 - 1j])) == 1.0 + 0j
