import math

from scipy.constants import c, e, hbar

__all__ = ['HBAR', 'C', 'EV', 'ZETA4', 'SPEED_OF_LIGHT', 'POLYLOG_TOL']

HBAR = hbar  # J s
C = SPEED_OF_LIGHT = c  # m/s

# 1 eV expressed as an angular frequency, omega = E / hbar (rad/s)
EV = e / hbar

ZETA4 = math.pi ** 4 / 90

# Default relative tolerance of every polylog evaluation
POLYLOG_TOL = 1e-12
