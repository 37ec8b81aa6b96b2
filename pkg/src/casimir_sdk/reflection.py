"""
Fresnel reflection coefficients of a single vacuum/medium interface in the Lifshitz variable p.

p is the normal wave-vector component in units of w/c. The real-frequency contour runs from p = 1 down to 0 along the
real axis (propagating waves) and on along p = iq, q > 0 (evanescent waves). On the imaginary frequency axis p is real
and >= 1.
"""
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from casimir_sdk.classes.enum import Branch, Polarization
from casimir_sdk.exceptions import SingularInterfaceError

__all__ = ['ContourPoint', 'fresnel', 'fresnel_pair', 'normal_wavevector']

_SINGULAR = 1e-300


@dataclass(frozen=True, eq=False)
class ContourPoint:
    """
    One point (or a vectorised batch of points) on the integration contour, tagged with its branch.

    Use the ``propagating``, ``evanescent`` and ``imag_axis`` constructors rather than building p by hand.
    """
    p: Union[complex, np.ndarray]
    branch: Branch

    def __post_init__(self):
        branch = Branch.parse(self.branch)
        p = np.asarray(self.p, dtype=complex)
        object.__setattr__(self, 'branch', branch)
        object.__setattr__(self, 'p', p)

        if not np.all(np.isfinite(p)):
            raise ValueError('Contour point must be finite')
        if branch == Branch.PROPAGATING:
            ok = (p.imag == 0) & (p.real > 0) & (p.real <= 1)
        elif branch == Branch.EVANESCENT:
            ok = (p.real == 0) & (p.imag > 0)
        else:
            ok = (p.imag == 0) & (p.real >= 1)
        if not np.all(ok):
            raise ValueError(f'p does not lie on the {branch} branch of the contour')

    @classmethod
    def propagating(cls, p) -> 'ContourPoint':
        """p real in (0, 1]."""
        return cls(np.asarray(p, dtype=float).astype(complex), Branch.PROPAGATING)

    @classmethod
    def evanescent(cls, q) -> 'ContourPoint':
        """p = iq with q real and > 0."""
        return cls(1j * np.asarray(q, dtype=float), Branch.EVANESCENT)

    @classmethod
    def imag_axis(cls, p) -> 'ContourPoint':
        """p real >= 1, for use with eps(i zeta)."""
        return cls(np.asarray(p, dtype=float).astype(complex), Branch.IMAG_AXIS)

    @property
    def q(self) -> np.ndarray:
        return self.p.imag


def normal_wavevector(eps, point: ContourPoint) -> np.ndarray:
    """
    w = sqrt(p^2 + eps - 1), the normal wave-vector in the medium in units of w/c.

    The principal root is flipped where needed so that Im w >= 0 (waves decay into the medium), a vanishing imaginary
    part is resolved by Re w >= 0.
    """
    w = np.sqrt(point.p ** 2 + (np.asarray(eps, dtype=complex) - 1.0))
    flip = (w.imag < 0) | ((w.imag == 0) & (w.real < 0))
    return np.where(flip, -w, w)


def _ratio(numerator, denominator):
    if np.any(np.abs(denominator) < _SINGULAR):
        raise SingularInterfaceError('Fresnel denominator vanishes; the interface is degenerate at this point')
    return numerator / denominator


def fresnel_pair(eps, point: ContourPoint) -> Tuple[np.ndarray, np.ndarray]:
    """
    (r_TE, r_TM) sharing a single evaluation of the medium wave-vector.
    """
    eps = np.asarray(eps, dtype=complex)
    p = point.p
    w = normal_wavevector(eps, point)
    r_te = _ratio(p - w, p + w)
    r_tm = _ratio(eps * p - w, eps * p + w)
    return r_te, r_tm


def fresnel(eps, point: ContourPoint, sigma: Polarization):
    """
    r_TE = (p - w) / (p + w) and r_TM = (eps p - w) / (eps p + w) with w = sqrt(p^2 + eps - 1).

    Args:
        eps: Permittivity of the medium, scalar or array broadcastable against ``point.p``.
        point: Contour point(s).
        sigma: Polarization.

    Raises:
        SingularInterfaceError: |denominator| < 1e-300.
    """
    sigma = Polarization.parse(sigma)
    eps = np.asarray(eps, dtype=complex)
    p = point.p
    w = normal_wavevector(eps, point)
    if sigma == Polarization.TE:
        r = _ratio(p - w, p + w)
    else:
        r = _ratio(eps * p - w, eps * p + w)
    return r if np.ndim(r) else complex(r)
