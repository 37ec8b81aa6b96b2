"""
Closed-form results for reflection coefficients that do not depend on frequency or on p.

With u = r^2 exp(i xi) and xi = 2 w a / c the pressure spectrum per polarization is, in units of hbar/a^3,

    P_pw(xi) = -1/(16 pi^2) * [-xi^2 Im Li1(u) - 2 xi Re Li2(u) + 2 Im Li3(u) - 2 Im Li3(r^2)]
    P_ew     = -1/(16 pi^2) * 2 Im Li3(r^2)

so the evanescent part cancels the last propagating term exactly. The spectrum integrates to

    P = -3 hbar c / (16 pi^2 a^4) * sum_sigma Re Li4(r_sigma^2)
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from casimir_sdk.classes.enum import Method, Polarization
from casimir_sdk.classes.results import PressureResult, SpectralSample
from casimir_sdk.constants import C, HBAR
from casimir_sdk.exceptions import AccuracyError, ModelDomainError, PolylogDivergenceError
from casimir_sdk.polylog import UNIT_DISC_SLACK, polylogs
from casimir_sdk.quadrature import integrate_panels, richardson

__all__ = [
    'ConstantReflection',
    'PhysicalSetup',
    'FORD_LIMIT_R',
    'REGULARIZATION_DELTAS',
    'propagating_density',
    'evanescent_density',
    'total_density',
    'density_spectrum',
    'density_components',
    'constant_r_pressure',
    'constant_r_pressure_breakdown',
    'constant_r_free_energy',
    'constant_r_free_energy_breakdown',
    'regularized_spectrum_pressure',
    'extrapolated_spectrum_pressure',
    'ideal_casimir_pressure',
]

logger = logging.getLogger(__name__)

# r = 1 has a distributional spectrum, it is represented by this value
FORD_LIMIT_R = 1.0 - 1e-9

REGULARIZATION_DELTAS = (1e-2, 5e-3, 2.5e-3)
_XI_PANEL = math.pi / 4
_NORM = 1.0 / (16 * math.pi ** 2)
# |1 - u| below which the r = 1 spectrum is treated as sitting on its singularity
_DIVERGENCE_GAP = 1e-12


@dataclass(frozen=True)
class ConstantReflection:
    r_te: complex
    r_tm: complex

    def __post_init__(self):
        for name in ('r_te', 'r_tm'):
            value = complex(getattr(self, name))
            if not abs(value) <= 1 + UNIT_DISC_SLACK:
                raise ModelDomainError(f'|{name}| must not exceed 1, got {value!r}')
            object.__setattr__(self, name, value)

    @classmethod
    def uniform(cls, r: complex) -> 'ConstantReflection':
        """Same coefficient for both polarizations."""
        return cls(r, r)

    def coefficient(self, sigma: Polarization) -> complex:
        return self.r_te if Polarization.parse(sigma) == Polarization.TE else self.r_tm

    def squared(self) -> Tuple[complex, complex]:
        return self.r_te ** 2, self.r_tm ** 2


@dataclass(frozen=True)
class PhysicalSetup:
    """
    Two parallel plates at separation ``a`` (m), at zero temperature.
    """
    a: float
    temperature = 0.0  # K, fixed
    hbar = HBAR
    c = C

    def __post_init__(self):
        if not (np.isfinite(self.a) and self.a > 0):
            raise ModelDomainError(f'Plate separation must be positive, got {self.a!r}')

    def xi(self, omega):
        """Dimensionless frequency xi = 2 w a / c."""
        return 2 * np.asarray(omega, dtype=float) * self.a / self.c

    def omega(self, xi):
        return np.asarray(xi, dtype=float) * self.c / (2 * self.a)

    @property
    def pressure_scale(self) -> float:
        """Pa per unit of the xi-integral of a normalised spectral density."""
        return self.hbar * self.c / (2 * self.a ** 4)


def _check_xi(xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    if np.any(~(xi >= 0)) or np.any(~np.isfinite(xi)):
        raise ModelDomainError('xi must be non-negative and finite')
    return xi


def _reduced_bracket(r_squared, xi):
    """
    -xi^2 Im Li1(u) - 2 xi Re Li2(u) + 2 Im Li3(u) with u = r^2 exp(i xi), vectorised over xi (and r^2).

    The phase is reduced mod 2 pi before exponentiating. u within 1e-12 of 1 counts as the Li1 singularity.
    """
    u = np.asarray(r_squared, dtype=complex) * np.exp(1j * np.mod(xi, 2 * math.pi))
    if np.any(np.abs(1.0 - u) < _DIVERGENCE_GAP):
        raise PolylogDivergenceError('Li_1(r^2 exp(i xi)) diverges: |r| = 1 with real r^2 at xi = 0 (mod 2 pi)')
    li = polylogs(u, orders=(1, 2, 3))
    return -xi ** 2 * li[1].imag - 2 * xi * li[2].real + 2 * li[3].imag


def _static_term(r_squared) -> float:
    """2 Im Li3(r^2), the xi independent part of the propagating bracket."""
    return 2 * float(polylogs(r_squared, orders=(3,))[3].imag)


def _scalar(value):
    return float(value) if np.ndim(value) == 0 else value


def propagating_density(r: ConstantReflection, xi, sigma: Polarization):
    """
    Propagating-wave pressure spectrum of one polarization in units of hbar/a^3. Vectorised over ``xi``.

    Raises:
        PolylogDivergenceError: |r| = 1 with real r^2 at xi = 0 (mod 2 pi), where the r = 1 spectrum is singular.
    """
    xi = _check_xi(xi)
    r_squared = r.coefficient(sigma) ** 2
    return _scalar(-_NORM * (_reduced_bracket(r_squared, xi) - _static_term(r_squared)))


def evanescent_density(r: ConstantReflection, sigma: Polarization) -> float:
    """
    Evanescent-wave pressure spectrum of one polarization, hbar/a^3 units. Independent of xi, zero for real r.
    """
    return -_NORM * _static_term(r.coefficient(sigma) ** 2)


def density_components(r_squared: Tuple[complex, complex], xi) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Vectorised spectrum for given squared coefficients (or plate products r1 r2) per polarization.

    Returns:
        (propagating, evanescent, total): the first two have shape xi.shape + (2,) with TE in column 0, ``total`` is
        the sum over everything evaluated from the cancelled bracket.
    """
    xi = _check_xi(xi)
    brackets = [_reduced_bracket(r_squared[sigma], xi) for sigma in Polarization]
    statics = [_static_term(r_squared[sigma]) for sigma in Polarization]

    pw = np.stack([-_NORM * (brackets[s] - statics[s]) for s in Polarization], axis=-1)
    ew = np.broadcast_to(np.array([-_NORM * statics[s] for s in Polarization]), pw.shape)
    total = -_NORM * (brackets[Polarization.TE] + brackets[Polarization.TM])
    return pw, ew, total


def total_density(r: ConstantReflection, xi: float) -> SpectralSample:
    """
    Both polarizations and both wave types at one xi. ``density_total`` is evaluated from the cancelled bracket.
    """
    return density_spectrum(r, [xi])[0]


def density_spectrum(r: ConstantReflection, xi: Sequence[float],
                     setup: Optional[PhysicalSetup] = None) -> List[SpectralSample]:
    """
    total_density over a grid of xi, with the physical frequency attached when a setup is given.
    """
    xi = _check_xi(np.atleast_1d(xi))
    pw, ew, total = density_components(r.squared(), xi)
    omegas = setup.omega(xi) if setup is not None else [None] * len(xi)

    return [SpectralSample(xi=float(xi[i]),
                           density_pw=(float(pw[i, 0]), float(pw[i, 1])),
                           density_ew=(float(ew[i, 0]), float(ew[i, 1])),
                           density_total=float(total[i]),
                           omega=None if omegas[i] is None else float(omegas[i]))
            for i in range(len(xi))]


def constant_r_pressure_breakdown(r: ConstantReflection, setup: PhysicalSetup) -> Tuple[float, float]:
    """
    (P_TE, P_TM) in Pa, P_sigma = -3 hbar c / (16 pi^2 a^4) * Re Li4(r_sigma^2).
    """
    prefactor = -3 * setup.hbar * setup.c * _NORM / setup.a ** 4
    li4 = polylogs(np.array(r.squared()), orders=(4,))[4].real
    return prefactor * float(li4[0]), prefactor * float(li4[1])


def constant_r_pressure(r: ConstantReflection, setup: PhysicalSetup) -> float:
    return math.fsum(constant_r_pressure_breakdown(r, setup))


def constant_r_free_energy_breakdown(r: ConstantReflection, setup: PhysicalSetup) -> Tuple[float, float]:
    """
    (F_TE, F_TM) in J/m^2, F_sigma = -hbar c / (16 pi^2 a^3) * Re Li4(r_sigma^2).
    """
    prefactor = -setup.hbar * setup.c * _NORM / setup.a ** 3
    li4 = polylogs(np.array(r.squared()), orders=(4,))[4].real
    return prefactor * float(li4[0]), prefactor * float(li4[1])


def constant_r_free_energy(r: ConstantReflection, setup: PhysicalSetup) -> float:
    return math.fsum(constant_r_free_energy_breakdown(r, setup))


def ideal_casimir_pressure(setup: PhysicalSetup) -> float:
    """
    Perfect mirrors: -hbar c pi^2 / (240 a^4).
    """
    return -setup.hbar * setup.c * math.pi ** 2 / (240 * setup.a ** 4)


def _regularized_integral(r: ConstantReflection, delta: float, xi_max: float):
    r_squared = r.squared()
    same = r_squared[0] == r_squared[1]

    def _integrand(xi):
        attenuation = np.exp(-2 * delta * xi)
        value = _reduced_bracket(r_squared[0] * attenuation, xi)
        if same:
            value = 2 * value
        else:
            value = value + _reduced_bracket(r_squared[1] * attenuation, xi)
        return -_NORM * value

    n_panels = max(1, math.ceil(xi_max / _XI_PANEL))
    edges = np.linspace(0.0, xi_max, n_panels + 1)
    return integrate_panels(_integrand, edges, order=8, rtol=1e-10, atol=1e-12, max_depth=12)


def regularized_spectrum_pressure(r: ConstantReflection, setup: PhysicalSetup, delta: float,
                                  xi_max: Optional[float] = None) -> float:
    """
    Integrate the constant-r spectrum over xi in [0, xi_max] with r -> r exp(-delta xi), in Pa.

    Args:
        r: Reflection coefficients.
        setup: Plate separation.
        delta: Regularisation strength, > 0.
        xi_max: Upper limit, at least 50 / delta (the default).

    Raises:
        AccuracyError: The panel quadrature did not converge, the exception carries the best estimate in Pa.
    """
    if not delta > 0:
        raise ModelDomainError(f'delta must be positive, got {delta!r}')
    if xi_max is None:
        xi_max = 50.0 / delta
    elif xi_max < 50.0 / delta:
        raise ModelDomainError(f'xi_max must be at least 50/delta = {50.0 / delta:.6g}, got {xi_max!r}')

    result = _regularized_integral(r, delta, xi_max)
    value = setup.pressure_scale * float(np.real(result.value))
    if not result.converged:
        raise AccuracyError(f'Regularised spectrum integral with delta={delta} did not converge',
                            estimate=value, error=setup.pressure_scale * float(result.error))
    logger.debug(f'delta={delta}: {value:.9e} Pa ({result.evaluations} evaluations)')
    return value


def extrapolated_spectrum_pressure(r: ConstantReflection, setup: PhysicalSetup,
                                   deltas: Sequence[float] = REGULARIZATION_DELTAS) -> PressureResult:
    """
    regularized_spectrum_pressure for a halving sequence of deltas, Richardson-extrapolated to delta -> 0.
    """
    values = [regularized_spectrum_pressure(r, setup, delta) for delta in deltas]
    value, error = richardson(deltas, values, powers=(1, 2))
    logger.info(f'Regularised spectrum pressure {value:.9e} Pa, extrapolation error {error:.3e} Pa')
    return PressureResult(value=value, method=Method.REAL_FREQUENCY, error_estimate=error)
