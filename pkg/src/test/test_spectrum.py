import math
import unittest

import numpy as np
import pytest

from casimir_sdk.classes.enum import Method, Polarization
from casimir_sdk.exceptions import ModelDomainError, PolylogDivergenceError
from casimir_sdk.polylog import eval_polylog
from casimir_sdk.spectrum import (FORD_LIMIT_R, ConstantReflection, PhysicalSetup, constant_r_free_energy,
                                  constant_r_pressure, constant_r_pressure_breakdown, density_components,
                                  density_spectrum, evanescent_density, extrapolated_spectrum_pressure,
                                  ideal_casimir_pressure, propagating_density, regularized_spectrum_pressure,
                                  total_density)

SETUP = PhysicalSetup(100e-9)


class TestPhysicalSetup(unittest.TestCase):

    def test_frequency_conversion(self):
        omega = np.array([1e14, 1e15, 1e16])
        np.testing.assert_allclose(SETUP.omega(SETUP.xi(omega)), omega, rtol=1e-15)
        self.assertAlmostEqual(SETUP.xi(SETUP.c / (2 * SETUP.a)), 1.0, delta=1e-15)

    def test_pressure_scale(self):
        self.assertAlmostEqual(SETUP.pressure_scale, SETUP.hbar * SETUP.c / (2 * 1e-28), delta=1e-12)

    def test_separation(self):
        for a in (0.0, -1e-9, float('nan')):
            with self.assertRaises(ModelDomainError):
                PhysicalSetup(a)


class TestConstantReflectionSpectrum(unittest.TestCase):

    def test_unit_disc(self):
        with self.assertRaises(ModelDomainError):
            ConstantReflection.uniform(1.01)
        with self.assertRaises(ModelDomainError):
            ConstantReflection(0.5, 0.9 + 0.5j)
        ConstantReflection.uniform(1.0)

    ####################
    # Evanescent waves #
    ####################

    def test_evanescent_vanishes_for_real_r(self):
        for r in (0.0, 0.5, -0.8, FORD_LIMIT_R):
            plates = ConstantReflection.uniform(r)
            self.assertAlmostEqual(evanescent_density(plates, Polarization.TE), 0.0, delta=1e-15)

    def test_evanescent_for_complex_r(self):
        plates = ConstantReflection.uniform(0.8 * np.exp(1j * math.pi / 4))
        expected = -2 * eval_polylog(3, 0.64j).imag / (16 * math.pi ** 2)
        self.assertAlmostEqual(evanescent_density(plates, Polarization.TM), expected, delta=1e-15)
        self.assertNotEqual(expected, 0.0)

    def test_evanescent_cancels_static_term(self):
        plates = ConstantReflection(0.9 * np.exp(0.3j), 0.6 * np.exp(-1.1j))
        xi = np.linspace(0.0, 40.0, 81)
        pw, ew, total = density_components(plates.squared(), xi)
        np.testing.assert_allclose(pw.sum(axis=-1) + ew.sum(axis=-1), total, rtol=1e-12, atol=1e-14)
        for sigma in Polarization:
            np.testing.assert_allclose(pw[:, sigma], propagating_density(plates, xi, sigma), rtol=1e-15)

    def test_evanescent_cancels_static_term_random(self):
        rng = np.random.default_rng(7)
        radius = 0.95 * np.sqrt(rng.uniform(0.0, 1.0, 50))
        r = radius * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, 50))
        xi = rng.uniform(0.1, 6.0, 50)
        for r_sigma, x in zip(r, xi):
            plates = ConstantReflection(r_sigma, 0.0)
            u = r_sigma ** 2 * np.exp(1j * x)
            bracket = (-x ** 2 * eval_polylog(1, u).imag - 2 * x * eval_polylog(2, u).real +
                       2 * eval_polylog(3, u).imag)
            static = propagating_density(plates, x, Polarization.TE) + bracket / (16 * math.pi ** 2)
            self.assertAlmostEqual(static + evanescent_density(plates, Polarization.TE), 0.0, delta=1e-12)

    ############
    # Spectrum #
    ############

    def test_zero_frequency(self):
        sample = total_density(ConstantReflection.uniform(0.7), 0.0)
        self.assertAlmostEqual(sample.density_total, 0.0, delta=1e-15)
        self.assertIsNone(sample.omega)

    def test_no_reflection(self):
        sample = total_density(ConstantReflection.uniform(0.0), 3.0)
        self.assertEqual(sample.density_total, 0.0)

    def test_spectrum_does_not_decay(self):
        plates = ConstantReflection.uniform(0.5)
        low = np.abs([s.density_total for s in density_spectrum(plates, np.linspace(10, 10 + 2 * math.pi, 64))])
        high = np.abs([s.density_total for s in density_spectrum(plates, np.linspace(100, 100 + 2 * math.pi, 64))])
        self.assertGreater(high.max(), 10 * low.max())

    def test_oscillation_envelope_grows_quadratically(self):
        r_squared = ConstantReflection.uniform(0.5).squared()
        peaks, where = [], []
        for k in range(2, 20):
            xi = np.linspace(2 * math.pi * k, 2 * math.pi * (k + 1), 2001)
            density = np.abs(density_components(r_squared, xi)[2])
            i = int(np.argmax(density))
            peaks.append(density[i])
            where.append(xi[i])
        exponent = np.polyfit(np.log(where), np.log(peaks), 1)[0]
        self.assertTrue(1.9 <= exponent <= 2.1, msg=exponent)

    def test_perfect_mirror_divergence(self):
        for r in (1.0, -1.0):
            plates = ConstantReflection.uniform(r)
            for xi in (0.0, 2 * math.pi, 4 * math.pi, 6 * math.pi, 14 * math.pi):
                with self.assertRaises(PolylogDivergenceError):
                    propagating_density(plates, xi, Polarization.TE)
        with self.assertRaises(PolylogDivergenceError):
            density_spectrum(ConstantReflection.uniform(1.0), [1.0, 2 * math.pi, 7.0])
        self.assertTrue(math.isfinite(propagating_density(ConstantReflection.uniform(1.0), math.pi, Polarization.TM)))
        self.assertTrue(math.isfinite(propagating_density(ConstantReflection.uniform(0.999), 2 * math.pi,
                                                          Polarization.TM)))

    def test_spectrum_depends_on_xi_only(self):
        plates = ConstantReflection(0.7, 0.9 + 0.2j)
        near, far = PhysicalSetup(100e-9), PhysicalSetup(250e-9)
        omega = 3e15
        first, = density_spectrum(plates, [float(near.xi(omega))])
        second, = density_spectrum(plates, [float(far.xi(omega * 0.4))])
        self.assertEqual(first.density_total, pytest.approx(second.density_total, rel=1e-12))

    def test_spectrum_with_setup(self):
        samples = density_spectrum(ConstantReflection.uniform(0.9), [0.5, 1.0, 2.0], SETUP)
        self.assertEqual(len(samples), 3)
        self.assertEqual(samples[1].omega, pytest.approx(SETUP.c / (2 * SETUP.a), rel=1e-15))
        record = samples[2].to_record()
        self.assertEqual(record['xi'], 2.0)
        self.assertEqual(record['density_total'], samples[2].density_total)

    def test_negative_xi(self):
        with self.assertRaises(ModelDomainError):
            density_spectrum(ConstantReflection.uniform(0.5), [-1.0])


class TestClosedForm(unittest.TestCase):

    def test_ideal_pressure(self):
        self.assertEqual(ideal_casimir_pressure(SETUP), pytest.approx(-13.00, abs=0.01))
        self.assertEqual(ideal_casimir_pressure(PhysicalSetup(1e-6)), pytest.approx(-1.3e-3, rel=1e-3))

    def test_perfect_mirrors(self):
        plates = ConstantReflection.uniform(1.0)
        self.assertEqual(constant_r_pressure(plates, SETUP), pytest.approx(ideal_casimir_pressure(SETUP), rel=1e-12))

    def test_breakdown(self):
        plates = ConstantReflection(0.3, 0.9)
        te, tm = constant_r_pressure_breakdown(plates, SETUP)
        self.assertLess(abs(te), abs(tm))
        self.assertEqual(te + tm, pytest.approx(constant_r_pressure(plates, SETUP), rel=1e-15))

    def test_monotone_in_r(self):
        pressures = [constant_r_pressure(ConstantReflection.uniform(r), SETUP) for r in np.linspace(0, 1, 21)]
        self.assertEqual(pressures[0], 0.0)
        self.assertTrue(np.all(np.diff(pressures) < 0))

    def test_pressure_is_derivative_of_free_energy(self):
        plates = ConstantReflection(0.6, 0.8 + 0.1j)
        a, h = SETUP.a, 1e-4 * SETUP.a
        derivative = (constant_r_free_energy(plates, PhysicalSetup(a + h)) -
                      constant_r_free_energy(plates, PhysicalSetup(a - h))) / (2 * h)
        self.assertEqual(constant_r_pressure(plates, SETUP), pytest.approx(-derivative, rel=1e-6))

    def test_pressure_is_derivative_of_free_energy_random(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            r_te, r_tm = np.sqrt(rng.uniform(0.0, 1.0, 2)) * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, 2))
            plates = ConstantReflection(r_te, r_tm)
            a = rng.uniform(10e-9, 1e-6)
            h = 1e-4 * a
            derivative = (constant_r_free_energy(plates, PhysicalSetup(a + h)) -
                          constant_r_free_energy(plates, PhysicalSetup(a - h))) / (2 * h)
            self.assertEqual(constant_r_pressure(plates, PhysicalSetup(a)), pytest.approx(-derivative, rel=1e-6))

    def test_scaling_with_separation(self):
        plates = ConstantReflection(0.7, 0.9 + 0.2j)
        pressure, energy = constant_r_pressure(plates, SETUP), constant_r_free_energy(plates, SETUP)
        for a in (50e-9, 200e-9, 400e-9):
            setup = PhysicalSetup(a)
            ratio = SETUP.a / a
            self.assertEqual(constant_r_pressure(plates, setup), pytest.approx(pressure * ratio ** 4, rel=1e-12))
            self.assertEqual(constant_r_free_energy(plates, setup), pytest.approx(energy * ratio ** 3, rel=1e-12))
        self.assertEqual(ideal_casimir_pressure(PhysicalSetup(200e-9)),
                         pytest.approx(ideal_casimir_pressure(SETUP) / 16, rel=1e-12))


class TestRegularizedSpectrum(unittest.TestCase):

    def test_invalid_regularization(self):
        plates = ConstantReflection.uniform(0.5)
        with self.assertRaises(ModelDomainError):
            regularized_spectrum_pressure(plates, SETUP, 0.0)
        with self.assertRaises(ModelDomainError):
            regularized_spectrum_pressure(plates, SETUP, 0.1, xi_max=100.0)

    def test_regularization_converges(self):
        plates = ConstantReflection.uniform(0.8)
        exact = constant_r_pressure(plates, SETUP)
        errors = [abs(regularized_spectrum_pressure(plates, SETUP, delta) - exact) for delta in (0.04, 0.02)]
        self.assertLess(errors[1], errors[0])


@pytest.mark.slow
@pytest.mark.parametrize('r', [0.5, 0.8, FORD_LIMIT_R])
def test_spectrum_integrates_to_closed_form(r):
    plates = ConstantReflection.uniform(r)
    result = extrapolated_spectrum_pressure(plates, SETUP)
    assert result.method == Method.REAL_FREQUENCY
    assert result.value == pytest.approx(constant_r_pressure(plates, SETUP), rel=5e-3)
