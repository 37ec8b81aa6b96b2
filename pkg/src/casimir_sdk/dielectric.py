"""
Permittivity models on the real and on the imaginary frequency axis.

All frequencies are angular frequencies in rad/s. Every model accepts scalars or NumPy arrays and is immutable after
construction, so evaluations are pure and may run concurrently.
"""
import logging
import math
import os
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import BinaryIO, Optional, Tuple, Union

import numpy as np

from casimir_sdk.classes.enum import Extrapolation, WindowMode
from casimir_sdk.constants import C, EV
from casimir_sdk.exceptions import ModelDomainError, RangeError, TableValidationError, UnsupportedModelError
from casimir_sdk.quadrature import gauss_legendre
from casimir_sdk.readers.optical_table_reader import OpticalTableReader, format_table_rows

__all__ = [
    'DielectricModel',
    'DrudeModel',
    'PlasmaModel',
    'TabulatedModel',
    'WindowSpec',
    'WindowedModel',
    'VacuumModel',
    'ConstantPermittivityModel',
    'GOLD_DRUDE',
    'HSM_WINDOW',
    'permittivity_real_axis',
    'permittivity_imag_axis',
    'window_factor',
    'delta_eps_imag_axis',
    'load_optical_table',
    'synthesize_optical_table',
]

logger = logging.getLogger(__name__)

MIN_TABLE_SAMPLES = 8
_TINY = 1e-300
_TAYLOR_WINDOW = 1e-6
_TABLE_GAUSS_ORDER = 8


def _positive(name: str, value: float):
    if not (np.isfinite(value) and value > 0):
        raise ModelDomainError(f'{name} must be positive and finite, got {value!r}')


def _check_frequency(name: str, value) -> np.ndarray:
    value = np.asarray(value, dtype=float)
    if np.any(~(value > 0)) or np.any(~np.isfinite(value)):
        raise ModelDomainError(f'{name} must be positive and finite')
    return value


class DielectricModel(ABC):
    """
    A material's permittivity eps = 1 + chi. eps(w) -> 1 as w -> infinity for every model.
    """

    @abstractmethod
    def real_axis(self, omega: np.ndarray) -> np.ndarray:
        """
        Complex eps(w) for real w > 0 (rad/s).
        """
        pass

    @abstractmethod
    def imag_axis(self, zeta: np.ndarray) -> np.ndarray:
        """
        Real eps(i zeta) for zeta > 0 (rad/s).
        """
        pass

    def susceptibility(self, omega: np.ndarray) -> np.ndarray:
        return self.real_axis(omega) - 1.0


@dataclass(frozen=True)
class VacuumModel(DielectricModel):
    """eps = 1 everywhere."""

    def real_axis(self, omega):
        return np.ones(np.shape(omega), dtype=complex)

    def imag_axis(self, zeta):
        return np.ones(np.shape(zeta), dtype=float)


@dataclass(frozen=True)
class ConstantPermittivityModel(DielectricModel):
    """
    Non-dispersive eps, e.g. eps = 1e12 as a perfect conductor. Not causal unless eps is real, so the imaginary axis
    uses Re(eps).
    """
    eps: complex

    def __post_init__(self):
        if not np.isfinite(self.eps) or np.imag(self.eps) < 0:
            raise ModelDomainError(f'Constant permittivity must be finite and passive (Im eps >= 0), got {self.eps!r}')

    def real_axis(self, omega):
        return np.full(np.shape(omega), complex(self.eps))

    def imag_axis(self, zeta):
        return np.full(np.shape(zeta), float(np.real(self.eps)))


@dataclass(frozen=True)
class DrudeModel(DielectricModel):
    """
    eps(w) = 1 - wp^2 / (w^2 + i w nu). nu = 0 is the plasma model.
    """
    omega_p: float
    nu: float

    def __post_init__(self):
        _positive('omega_p', self.omega_p)
        if not (np.isfinite(self.nu) and self.nu >= 0):
            raise ModelDomainError(f'nu must be non-negative and finite, got {self.nu!r}')

    @classmethod
    def from_ev(cls, omega_p_ev: float, nu_ev: float) -> 'DrudeModel':
        return cls(omega_p=omega_p_ev * EV, nu=nu_ev * EV)

    def real_axis(self, omega):
        omega = np.asarray(omega, dtype=float)
        return 1.0 - self.omega_p ** 2 / (omega ** 2 + 1j * omega * self.nu)

    def imag_axis(self, zeta):
        zeta = np.asarray(zeta, dtype=float)
        return 1.0 + self.omega_p ** 2 / (zeta * (zeta + self.nu))

    def loss(self, omega):
        """eps''(w) = wp^2 nu / (w (w^2 + nu^2))"""
        omega = np.asarray(omega, dtype=float)
        return self.omega_p ** 2 * self.nu / (omega * (omega ** 2 + self.nu ** 2))


@dataclass(frozen=True)
class PlasmaModel(DielectricModel):
    """
    Lossless eps(w) = 1 - wp^2 / w^2.
    """
    omega_p: float

    def __post_init__(self):
        _positive('omega_p', self.omega_p)

    @classmethod
    def from_ev(cls, omega_p_ev: float) -> 'PlasmaModel':
        return cls(omega_p=omega_p_ev * EV)

    def real_axis(self, omega):
        omega = np.asarray(omega, dtype=float)
        return (1.0 - self.omega_p ** 2 / omega ** 2).astype(complex)

    def imag_axis(self, zeta):
        zeta = np.asarray(zeta, dtype=float)
        return 1.0 + self.omega_p ** 2 / zeta ** 2


# Gold as used for the transparency window estimates: wp = 9 eV, nu = 35 meV
GOLD_DRUDE = DrudeModel.from_ev(9.0, 0.035)


def _kk_drude_band(omega_p: float, nu: float, omega1: float, omega2: float, zeta: np.ndarray) -> np.ndarray:
    """
    (2/pi) * integral_{w1}^{w2} w eps''(w) / (w^2 + zeta^2) dw for the Drude loss eps'' = wp^2 nu / (w (w^2 + nu^2)).
    """
    zeta = np.asarray(zeta, dtype=float)
    if nu == 0.0 or omega2 <= omega1:
        return np.zeros_like(zeta)

    with np.errstate(divide='ignore', invalid='ignore'):
        band_nu = np.arctan(omega2 / nu) - np.arctan(omega1 / nu)
        band_zeta = np.arctan(omega2 / zeta) - np.arctan(omega1 / zeta)
        closed = omega_p ** 2 / (zeta ** 2 - nu ** 2) * (2 / np.pi) * (band_nu - nu / zeta * band_zeta)

    near = np.abs(zeta - nu) < _TAYLOR_WINDOW * nu
    if np.any(near):
        # integral dw / ((w^2+nu^2)(w^2+nu^2+u)) = J2 - u J3 + u^2 J4 + O(u^3), u = zeta^2 - nu^2
        u = zeta[near] ** 2 - nu ** 2
        j = _reduction_integrals(nu, omega1, omega2, 4)
        series = j[2] - u * j[3] + u ** 2 * j[4]
        closed = np.array(closed, dtype=float)
        closed[near] = (2 / np.pi) * omega_p ** 2 * nu * series
    return closed


def _reduction_integrals(nu: float, omega1: float, omega2: float, n_max: int):
    """
    J_n = integral_{w1}^{w2} dw / (w^2 + nu^2)^n for n = 1..n_max, by the standard reduction formula.
    """
    def _boundary(n, w):
        return w / (2 * n * nu ** 2 * (w ** 2 + nu ** 2) ** n)

    j = {1: (math.atan(omega2 / nu) - math.atan(omega1 / nu)) / nu}
    for n in range(1, n_max):
        j[n + 1] = _boundary(n, omega2) - _boundary(n, omega1) + (2 * n - 1) / (2 * n * nu ** 2) * j[n]
    return j


@dataclass(frozen=True, eq=False)
class TabulatedModel(DielectricModel):
    """
    Permittivity sampled at increasing frequencies. Interpolation is linear in (log w, eps') and (log w, log eps'').

    Below the table a Drude tail fitted to the two lowest samples is used, above it eps' -> 1 as w^-2 and
    eps'' ~ w^-3. Either side can be disabled with Extrapolation.NONE, queries outside the table then raise RangeError.
    """
    omega: np.ndarray
    eps_re: np.ndarray
    eps_im: np.ndarray
    low: Extrapolation = Extrapolation.DRUDE
    high: Extrapolation = Extrapolation.POWER_LAW
    _drude_tail: Optional[Tuple[float, float]] = field(default=None, init=False, repr=False)

    def __post_init__(self):
        omega = np.array(self.omega, dtype=float)
        eps_re = np.array(self.eps_re, dtype=float)
        eps_im = np.array(self.eps_im, dtype=float)
        if not (omega.ndim == eps_re.ndim == eps_im.ndim == 1 and len(omega) == len(eps_re) == len(eps_im)):
            raise TableValidationError('omega, eps_re and eps_im must be 1-D sequences of equal length')
        if len(omega) < MIN_TABLE_SAMPLES:
            raise TableValidationError(f'at least {MIN_TABLE_SAMPLES} samples are required, got {len(omega)}')
        for row, (w, re_, im_) in enumerate(zip(omega, eps_re, eps_im), start=1):
            if not (np.isfinite(w) and np.isfinite(re_) and np.isfinite(im_)):
                raise TableValidationError('non-finite value', row=row)
            if w <= 0:
                raise TableValidationError(f'frequency must be positive, got {w!r}', row=row)
            if im_ < 0:
                raise TableValidationError(f"eps'' must be non-negative (passivity), got {im_!r}", row=row)
            if row > 1 and w <= omega[row - 2]:
                raise TableValidationError('frequencies must be strictly increasing', row=row)

        low = Extrapolation.parse(self.low)
        high = Extrapolation.parse(self.high)
        if low not in (Extrapolation.NONE, Extrapolation.DRUDE):
            raise TableValidationError(f'unsupported low-frequency extrapolation {low}')
        if high not in (Extrapolation.NONE, Extrapolation.POWER_LAW):
            raise TableValidationError(f'unsupported high-frequency extrapolation {high}')

        for array in (omega, eps_re, eps_im):
            array.setflags(write=False)
        object.__setattr__(self, 'omega', omega)
        object.__setattr__(self, 'eps_re', eps_re)
        object.__setattr__(self, 'eps_im', eps_im)
        object.__setattr__(self, 'low', low)
        object.__setattr__(self, 'high', high)
        if low == Extrapolation.DRUDE:
            object.__setattr__(self, '_drude_tail', self._fit_drude_tail())

    def __len__(self):
        return len(self.omega)

    def _fit_drude_tail(self) -> Tuple[float, float]:
        """
        (wp^2, nu) of the Drude loss through the two lowest samples.
        """
        (w1, w2), (e1, e2) = self.omega[:2], self.eps_im[:2]
        a1, a2 = e1 * w1, e2 * w2
        nu_sq = (e2 * w2 ** 3 - e1 * w1 ** 3) / (a1 - a2) if a1 != a2 else -1.0
        if not (np.isfinite(nu_sq) and nu_sq > 0):
            # single point estimate from eps'' w / (1 - eps') = nu
            nu_sq = (e1 * w1 / max(1.0 - self.eps_re[0], _TINY)) ** 2
            logger.warning('Two-point Drude fit of the low-frequency tail failed, falling back to the lowest sample')
        nu = math.sqrt(nu_sq)
        omega_p_sq = e1 * w1 * (w1 ** 2 + nu_sq) / nu if nu > 0 else (1.0 - self.eps_re[0]) * w1 ** 2
        return omega_p_sq, nu

    def _check_range(self, omega: np.ndarray):
        if self.low == Extrapolation.NONE and np.any(omega < self.omega[0]):
            raise RangeError(f'frequency below the table start {self.omega[0]:.6e} rad/s')
        if self.high == Extrapolation.NONE and np.any(omega > self.omega[-1]):
            raise RangeError(f'frequency above the table end {self.omega[-1]:.6e} rad/s')

    def _interpolate(self, omega: np.ndarray) -> np.ndarray:
        log_omega = np.log(self.omega)
        x = np.log(omega)
        eps_re = np.interp(x, log_omega, self.eps_re)
        eps_im = np.exp(np.interp(x, log_omega, np.log(np.maximum(self.eps_im, _TINY))))
        eps_im = np.where(eps_im <= 1e-290, 0.0, eps_im)
        return eps_re + 1j * eps_im

    def real_axis(self, omega):
        omega = np.asarray(omega, dtype=float)
        self._check_range(omega)
        result = np.asarray(self._interpolate(omega), dtype=complex)

        below = omega < self.omega[0]
        if np.any(below):
            omega_p_sq, nu = self._drude_tail
            w = omega[below]
            result[below] = 1.0 - omega_p_sq / (w ** 2 + 1j * w * nu)

        above = omega > self.omega[-1]
        if np.any(above):
            ratio = self.omega[-1] / omega[above]
            result[above] = 1.0 + (self.eps_re[-1] - 1.0) * ratio ** 2 + 1j * self.eps_im[-1] * ratio ** 3
        return result

    def imag_axis(self, zeta):
        """
        eps(i zeta) = 1 + (2/pi) integral_0^inf w eps''(w) / (w^2 + zeta^2) dw, by Gauss quadrature between the samples
        plus the closed-form integrals of the extrapolated tails.
        """
        zeta = np.asarray(zeta, dtype=float)
        if self.low == Extrapolation.NONE or self.high == Extrapolation.NONE:
            raise UnsupportedModelError('eps(i zeta) of a table needs both extrapolation tails')
        flat = zeta.ravel()

        nodes, weights = gauss_legendre(_TABLE_GAUSS_ORDER)
        log_omega = np.log(self.omega)
        mid = 0.5 * (log_omega[1:] + log_omega[:-1])
        half = 0.5 * (log_omega[1:] - log_omega[:-1])
        x = (mid[:, None] + half[:, None] * nodes).ravel()
        w = np.exp(x)
        loss = self._interpolate(w).imag
        # w eps''/(w^2+zeta^2) dw = w^2 eps''/(w^2+zeta^2) d(log w)
        kernel = (w ** 2 * loss)[None, :] / (w[None, :] ** 2 + flat[:, None] ** 2)
        table_part = kernel.reshape(len(flat), len(mid), -1) @ weights
        table_part = (table_part * half[None, :]).sum(axis=1) * (2 / np.pi)

        omega_p_sq, nu = self._drude_tail
        low_part = _kk_drude_band(math.sqrt(omega_p_sq), nu, 0.0, self.omega[0], flat)

        # eps'' = A w^-3 above the table: integral_{wN}^inf A dw / (w^2 (w^2 + zeta^2))
        w_n = self.omega[-1]
        amplitude = self.eps_im[-1] * w_n ** 3
        r = flat / w_n
        with np.errstate(divide='ignore', invalid='ignore'):
            closed = (1 / w_n - np.arctan(r) / flat) / flat ** 2
        series = sum((-1) ** k * r ** (2 * k) / (2 * k + 3) for k in range(6)) / w_n ** 3
        high_part = (2 / np.pi) * amplitude * np.where(r < 1e-2, series, closed)

        return (1.0 + table_part + low_part + high_part).reshape(zeta.shape)


@dataclass(frozen=True)
class WindowSpec:
    """
    Transparency window: chi is reduced by the fraction delta between omega1 and omega2 (rad/s).

    In smooth mode the edges are arctan steps whose sharpness s is measured in units of c/a.
    """
    omega1: float
    omega2: float
    delta: float = 1.0
    s: float = 10.0
    mode: WindowMode = WindowMode.SHARP

    def __post_init__(self):
        _positive('omega1', self.omega1)
        _positive('s', self.s)
        if not self.omega2 > self.omega1:
            raise ModelDomainError(f'window requires 0 < omega1 < omega2, got {self.omega1!r}, {self.omega2!r}')
        if not 0.0 <= self.delta <= 1.0:
            raise ModelDomainError(f'window reduction delta must lie in [0, 1], got {self.delta!r}')
        object.__setattr__(self, 'mode', WindowMode.parse(self.mode))


# Hydrogen-switchable mirror band, wavelengths 0.2-2.5 um
HSM_WINDOW = WindowSpec(omega1=7.5e14, omega2=9.4e15)


def window_factor(spec: WindowSpec, omega, a: float):
    """
    Factor multiplying chi(w). Sharp mode: 1 - delta * theta(w - w1) theta(w2 - w), with theta(0) = 1/2. Smooth mode:

        phi(w) = 1 - delta/pi * [arctan(s (w - w1) / (c/a)) + arctan(s (w2 - w) / (c/a))]
    """
    omega = _check_frequency('omega', omega)
    _positive('a', a)
    if spec.mode == WindowMode.SHARP:
        theta = (np.heaviside(omega - spec.omega1, 0.5) * np.heaviside(spec.omega2 - omega, 0.5))
        return 1.0 - spec.delta * theta
    scale = C / a
    return 1.0 - spec.delta / np.pi * (np.arctan(spec.s * (omega - spec.omega1) / scale) +
                                       np.arctan(spec.s * (spec.omega2 - omega) / scale))


def delta_eps_imag_axis(model: DielectricModel, spec: WindowSpec, zeta):
    """
    Kramers-Kronig image of removing the Drude loss inside the band (w1, w2):

        d_eps(i zeta) = (2/pi) integral_{w1}^{w2} w eps''(w) / (w^2 + zeta^2) dw
                      = wp^2 / (zeta^2 - nu^2) * (2/pi) * [atan(w2/nu) - atan(w1/nu)
                                                           - nu/zeta * (atan(w2/zeta) - atan(w1/zeta))]

    This is the full (delta = 1) perturbation; near zeta = nu a second order expansion replaces the removable
    singularity.
    """
    zeta = _check_frequency('zeta', zeta)
    if spec.mode != WindowMode.SHARP:
        raise UnsupportedModelError('the Kramers-Kronig window perturbation is only defined for sharp windows')
    if isinstance(model, PlasmaModel):
        return np.zeros_like(zeta)
    if not isinstance(model, DrudeModel):
        raise UnsupportedModelError(f'closed-form window perturbation needs a Drude model, got {type(model).__name__}')
    return _kk_drude_band(model.omega_p, model.nu, spec.omega1, spec.omega2, zeta)


@dataclass(frozen=True)
class WindowedModel(DielectricModel):
    """
    Base model whose susceptibility is suppressed inside a transparency window, for plates at separation a (m).
    """
    base: DielectricModel
    spec: WindowSpec
    a: float

    def __post_init__(self):
        _positive('a', self.a)
        if isinstance(self.base, WindowedModel):
            raise UnsupportedModelError('windows cannot be nested')

    def real_axis(self, omega):
        omega = np.asarray(omega, dtype=float)
        return 1.0 + self.base.susceptibility(omega) * window_factor(self.spec, omega, self.a)

    def imag_axis(self, zeta):
        if self.spec.mode == WindowMode.SMOOTH:
            raise UnsupportedModelError('smooth windows are not causal, eps(i zeta) is undefined for them')
        zeta = np.asarray(zeta, dtype=float)
        return self.base.imag_axis(zeta) - self.spec.delta * delta_eps_imag_axis(self.base, self.spec, zeta)


def permittivity_real_axis(model: DielectricModel, omega):
    """
    Complex eps(w) of ``model`` at real w > 0 (rad/s).

    Raises:
        ModelDomainError: w <= 0.
        RangeError: tabulated query outside an extrapolation-free range.
    """
    omega = _check_frequency('omega', omega)
    return model.real_axis(omega)


def permittivity_imag_axis(model: DielectricModel, zeta):
    """
    Real eps(i zeta) of ``model`` for zeta > 0 (rad/s).

    Raises:
        ModelDomainError: zeta <= 0.
        UnsupportedModelError: smooth-windowed model.
    """
    zeta = _check_frequency('zeta', zeta)
    return model.imag_axis(zeta)


def load_optical_table(source: Union[bytes, str, os.PathLike, BinaryIO],
                       low: Extrapolation = Extrapolation.DRUDE,
                       high: Extrapolation = Extrapolation.POWER_LAW) -> TabulatedModel:
    """
    Read an eV optical table (see OpticalTableReader) into a validated TabulatedModel.

    Raises:
        TableParseError: malformed input, with its line number.
        TableValidationError: decreasing frequencies or negative eps'', with the offending row.
    """
    with OpticalTableReader(source) as reader:
        table = reader.read()
    return TabulatedModel(omega=table.omega_ev * EV, eps_re=table.eps_re, eps_im=table.eps_im, low=low, high=high)


def synthesize_optical_table(model: DielectricModel, omega) -> str:
    """
    Sample ``model`` at the frequencies ``omega`` (rad/s) and format the result as an eV optical table.
    """
    omega = _check_frequency('omega', omega)
    eps = model.real_axis(omega)
    header = [f'# synthetic table sampled from {model!r}']
    return format_table_rows(omega / EV, eps.real, eps.imag, header=header)
