"""
Result containers shared by the engines and the CLI. Spectral densities are dimensionless (in units of hbar/a^3, per
unit angular frequency), pressures are in Pa, free energies in J/m^2.
"""
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from casimir_sdk.classes.enum import Method, Polarization


@dataclass(frozen=True)
class SpectralSample:
    """
    One point of the pressure frequency spectrum. Per-polarization tuples are indexed by Polarization (TE = 0, TM = 1).
    """
    xi: float  # 2 w a / c
    density_pw: Tuple[float, float]  # propagating waves
    density_ew: Tuple[float, float]  # evanescent waves
    density_total: float
    omega: Optional[float] = None  # rad/s, when the sample belongs to a physical setup

    def __post_init__(self):
        if not self.xi >= 0:
            raise ValueError(f'xi must be non-negative, got {self.xi!r}')

    def polarization(self, sigma: Polarization) -> float:
        sigma = Polarization.parse(sigma)
        return self.density_pw[sigma] + self.density_ew[sigma]

    def to_record(self) -> Dict[str, float]:
        return {
            'omega_rad_s': self.omega,
            'xi': self.xi,
            'density_pw_te': self.density_pw[Polarization.TE],
            'density_pw_tm': self.density_pw[Polarization.TM],
            'density_ew_te': self.density_ew[Polarization.TE],
            'density_ew_tm': self.density_ew[Polarization.TM],
            'density_total': self.density_total,
        }


@dataclass(frozen=True)
class PressureResult:
    """
    A Casimir pressure (Pa, negative = attractive).

    ``propagating`` and ``evanescent`` are only set by the real-frequency engine, ``polarization`` holds the
    (TE, TM) split whenever the method provides one.
    """
    value: float
    method: Method
    error_estimate: float = 0.0
    propagating: Optional[float] = None
    evanescent: Optional[float] = None
    polarization: Optional[Tuple[float, float]] = None

    def __float__(self):
        return float(self.value)

    def to_record(self) -> Dict[str, object]:
        return {
            'method': str(self.method),
            'value_pa': self.value,
            'propagating_pa': self.propagating,
            'evanescent_pa': self.evanescent,
            'error_estimate_pa': self.error_estimate,
        }


@dataclass(frozen=True)
class WindowForceDifference:
    """
    Change of the pressure when the transparency window is switched on.
    """
    pressure: PressureResult
    pressure_windowed: PressureResult
    method: Method
    windowed_plates: str = 'both'

    @property
    def difference(self) -> float:
        return self.pressure_windowed.value - self.pressure.value

    @property
    def ratio(self) -> float:
        """dP / P, NaN for a vanishing reference pressure."""
        return self.difference / self.pressure.value if self.pressure.value else float('nan')

    @property
    def error_estimate(self) -> float:
        return self.pressure.error_estimate + self.pressure_windowed.error_estimate

    def __float__(self):
        return float(self.difference)
