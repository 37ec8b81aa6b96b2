import cmath
import math
import unittest

import mpmath
import numpy as np
import pytest

from casimir_sdk.constants import ZETA4
from casimir_sdk.exceptions import PolylogDivergenceError, PolylogDomainError, RangeError
from casimir_sdk.polylog import eval_polylog, inverse_polylog4, polylog_array, polylogs


def _mp_polylog(m, z):
    return complex(mpmath.polylog(m, mpmath.mpc(z.real, z.imag)))


def _random_disc(rng, n, radius=1.0):
    return radius * np.sqrt(rng.uniform(0, 1, n)) * np.exp(2j * np.pi * rng.uniform(0, 1, n))


class TestEvalPolylog(unittest.TestCase):

    #########################
    # Known special values  #
    #########################

    def test_li4_at_one(self):
        """Li_4(1) = zeta(4) = pi^4 / 90"""
        self.assertAlmostEqual(eval_polylog(4, 1).real / (math.pi ** 4 / 90), 1.0, delta=1e-12)
        self.assertEqual(eval_polylog(4, 1).imag, 0.0)

    def test_li3_at_zero(self):
        self.assertEqual(eval_polylog(3, 0), 0)

    def test_li4_quarter(self):
        """Compared with the truncated series, whose tail is below 1e-40"""
        series = math.fsum(0.25 ** n / n ** 4 for n in range(1, 61))
        self.assertAlmostEqual(eval_polylog(4, 0.25).real, series, delta=1e-14)
        self.assertAlmostEqual(eval_polylog(4, 0.25).real, 0.2541162, delta=1e-7)

    def test_li1_half(self):
        self.assertAlmostEqual(eval_polylog(1, 0.5).real, math.log(2), delta=1e-15)
        series = math.fsum(0.5 ** n / n for n in range(1, 80))
        self.assertAlmostEqual(eval_polylog(1, 0.5).real, series, delta=1e-15)

    def test_li1_principal_branch(self):
        z = -0.3 + 0.9j
        self.assertAlmostEqual(abs(eval_polylog(1, z) + cmath.log(1 - z)), 0.0, delta=1e-15)

    ####################
    # Argument errors  #
    ####################

    def test_li1_diverges_at_one(self):
        with self.assertRaises(PolylogDivergenceError):
            eval_polylog(1, 1.0)
        with self.assertRaises(ArithmeticError):
            polylogs(np.array([0.5, 1.0]), orders=(1, 2))

    def test_outside_unit_disc(self):
        with self.assertRaises(PolylogDomainError):
            eval_polylog(2, 1.1)
        with self.assertRaises(ValueError):
            polylog_array(4, np.array([0.2, 2j]))

    def test_slack_is_accepted(self):
        value = eval_polylog(4, 1 + 1e-13)
        self.assertAlmostEqual(value.real, ZETA4, delta=1e-11)

    def test_order_out_of_range(self):
        for m in (0, 5):
            with self.assertRaises(PolylogDomainError):
                eval_polylog(m, 0.5)

    def test_tolerance_floor(self):
        with self.assertRaises(PolylogDomainError):
            eval_polylog(2, 0.5, tol=1e-16)


@pytest.mark.parametrize('m', [1, 2, 3, 4])
def test_matches_mpmath_in_disc(m):
    rng = np.random.default_rng(1234 + m)
    z = _random_disc(rng, 200)
    values = polylog_array(m, z)
    expected = np.array([_mp_polylog(m, complex(v)) for v in z])
    assert np.max(np.abs(values - expected) / np.maximum(np.abs(expected), 1e-300)) < 1e-10


@pytest.mark.parametrize('m', [2, 3, 4])
def test_matches_mpmath_on_unit_circle(m):
    xi = np.linspace(0.05, 2 * np.pi - 0.05, 41)
    z = np.exp(1j * xi)
    values = polylog_array(m, z)
    expected = np.array([_mp_polylog(m, complex(v)) for v in z])
    assert values == pytest.approx(expected, rel=1e-10, abs=1e-12)


@pytest.mark.parametrize('m', [2, 3, 4])
@pytest.mark.parametrize('xi', [0.5, 2.0, 4.0])
def test_unit_circle_direct_summation(m, xi):
    n = np.arange(1, 10 ** 6 + 1, dtype=float)
    z = cmath.exp(1j * xi)
    direct = np.sum(np.exp(1j * xi * n) / n ** m)
    assert abs(eval_polylog(m, z) - direct) < 1e-8


def test_conjugation_symmetry():
    rng = np.random.default_rng(7)
    z = _random_disc(rng, 100)
    for m in (1, 2, 3, 4):
        assert polylog_array(m, np.conj(z)) == pytest.approx(np.conj(polylog_array(m, z)), rel=1e-14, abs=1e-15)


@pytest.mark.parametrize('m', [2, 3, 4])
def test_derivative_recursion(m):
    """z d/dz Li_m(z) = Li_{m-1}(z), checked with central differences"""
    rng = np.random.default_rng(99 + m)
    z = _random_disc(rng, 100, radius=0.9)
    h = 1e-6
    derivative = (polylog_array(m, z + h) - polylog_array(m, z - h)) / (2 * h)
    assert z * derivative == pytest.approx(polylog_array(m - 1, z), rel=1e-6, abs=1e-9)


def test_polylogs_shares_orders_and_keeps_shape():
    z = np.array([[0.1, 0.7j], [-0.95, 0.6 + 0.6j]])
    values = polylogs(z, orders=(2, 4))
    assert set(values) == {2, 4}
    assert values[4].shape == (2, 2)
    assert values[2][1, 1] == pytest.approx(eval_polylog(2, 0.6 + 0.6j), rel=1e-13)


def test_li4_real_and_increasing():
    x = np.linspace(0, 1, 501)
    values = polylog_array(4, x)
    assert np.all(values.imag == 0)
    assert np.all(np.diff(values.real) > 0)


class TestInversePolylog4(unittest.TestCase):

    def test_end_points(self):
        self.assertEqual(inverse_polylog4(0.0), 0.0)
        self.assertEqual(inverse_polylog4(ZETA4), 1.0)

    def test_roundtrip_quarter(self):
        self.assertAlmostEqual(inverse_polylog4(eval_polylog(4, 0.25).real), 0.25, delta=1e-12)

    def test_roundtrip_grid(self):
        for x in np.linspace(0.0, 1.0, 101):
            y = eval_polylog(4, x).real
            self.assertAlmostEqual(inverse_polylog4(y), x, delta=1e-9)

    def test_out_of_range(self):
        with self.assertRaises(RangeError):
            inverse_polylog4(-1e-3)
        with self.assertRaises(RangeError):
            inverse_polylog4(ZETA4 * 1.001)
