"""
Complex polylogarithms Li_m(z), m = 1..4, on the closed unit disc, and the inverse of Li_4 on [0, 1].

For |z| <= 0.5 the defining series sum z^n / n^m is summed directly. For 0.5 < |z| <= 1 the expansion in powers of
w = log z is used,

    Li_m(z) = sum_{k != m-1} zeta(m-k) w^k / k!  +  w^(m-1) / (m-1)! * (H_{m-1} - log(-w)),

which converges geometrically for |w| < 2 pi (here |w| <= 3.22, so about 0.51 per term).
"""
import cmath
import logging
import math
from functools import lru_cache
from typing import Dict, Iterable, Union

import numpy as np
from scipy.special import bernoulli, zeta

from casimir_sdk.constants import POLYLOG_TOL, ZETA4
from casimir_sdk.exceptions import PolylogDivergenceError, PolylogDomainError, RangeError

__all__ = ['eval_polylog', 'polylog_array', 'polylogs', 'inverse_polylog4', 'UNIT_DISC_SLACK']

logger = logging.getLogger(__name__)

UNIT_DISC_SLACK = 1e-12
MIN_TOL = 1e-14

_DIRECT_RADIUS = 0.5
_LOG_SERIES_TERMS = 72
_MAX_DIRECT_TERMS = 400
_HARMONIC = {1: 0.0, 2: 1.0, 3: 1.5, 4: 11.0 / 6.0}


def _check_order(m: int) -> int:
    if isinstance(m, bool) or int(m) != m or not 1 <= m <= 4:
        raise PolylogDomainError(f'Polylog order must be one of 1, 2, 3, 4, got {m}')
    return int(m)


def _check_tol(tol: float) -> float:
    if not tol >= MIN_TOL:
        raise PolylogDomainError(f'Polylog tolerance must be >= {MIN_TOL}, got {tol}')
    return tol


@lru_cache(maxsize=None)
def _log_series_coefficients(m: int) -> np.ndarray:
    """
    zeta(m - k) / k! for k = 0.._LOG_SERIES_TERMS-1, with the k = m - 1 entry (zeta(1)) set to zero.
    """
    bern = bernoulli(_LOG_SERIES_TERMS + 1)
    coefficients = np.zeros(_LOG_SERIES_TERMS)
    factorial = 1.0
    for k in range(_LOG_SERIES_TERMS):
        if k > 0:
            factorial *= k
        s = m - k
        if s == 1:
            continue
        if s >= 2:
            value = float(zeta(s))
        elif s == 0:
            value = -0.5
        else:
            j = -s  # zeta(-j) = -B_{j+1} / (j+1) for odd j, zero for even j > 0
            value = -bern[j + 1] / (j + 1) if j % 2 else 0.0
        coefficients[k] = value / factorial
    coefficients.setflags(write=False)
    return coefficients


def _direct_series(orders: Iterable[int], z: np.ndarray, tol: float) -> Dict[int, np.ndarray]:
    orders = tuple(orders)
    sums = {m: np.zeros_like(z) for m in orders}
    power = np.ones_like(z)
    max_modulus = float(np.max(np.abs(z))) if z.size else 0.0
    for n in range(1, _MAX_DIRECT_TERMS + 1):
        power = power * z
        for m in orders:
            sums[m] += power / n ** m
        # For |z| <= 1/2 and m >= 2: tail <= 2 |z|^(n+1) / (n+1)^2 and |Li_m(z)| >= 0.8 |z|
        if 2.5 * max_modulus ** n / (n + 1) ** 2 <= tol:
            break
    return sums


def _log_series(orders: Iterable[int], z: np.ndarray) -> Dict[int, np.ndarray]:
    w = np.log(z)
    log_minus_w = np.log(-w)

    result = {}
    for m in orders:
        value = np.zeros_like(w)
        for coefficient in _log_series_coefficients(m)[::-1]:
            value = value * w + coefficient
        value += w ** (m - 1) / math.factorial(m - 1) * (_HARMONIC[m] - log_minus_w)
        result[m] = value
    return result


def polylogs(z, orders: Iterable[int] = (1, 2, 3, 4), tol: float = POLYLOG_TOL) -> Dict[int, np.ndarray]:
    """
    Evaluate several polylog orders at once on an array of arguments, sharing the series work between orders.

    Args:
        z: Complex scalar or array, |z| <= 1 (up to UNIT_DISC_SLACK).
        orders: Polylog orders, each in 1..4.
        tol: Relative tolerance, >= 1e-14.

    Returns:
        Dict mapping each order to a complex array shaped like ``z``.
    """
    orders = tuple(sorted({_check_order(m) for m in orders}))
    _check_tol(tol)
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    z = z.ravel()

    modulus = np.abs(z)
    if np.any(~np.isfinite(modulus)) or np.any(modulus > 1 + UNIT_DISC_SLACK):
        bad = z[~(modulus <= 1 + UNIT_DISC_SLACK)][0]
        raise PolylogDomainError(f'Polylog argument {bad} lies outside the closed unit disc; '
                                 f'continuation across the branch cut is not implemented')
    outside = modulus > 1
    if np.any(outside):
        z = z.copy()
        z[outside] /= modulus[outside]
        modulus = np.abs(z)

    at_one = z == 1
    if 1 in orders and np.any(at_one):
        raise PolylogDivergenceError('Li_1(z) = -log(1 - z) diverges at z = 1')

    result = {m: np.empty_like(z) for m in orders}
    if 1 in orders:
        result[1][:] = -np.log1p(-z)

    higher = tuple(m for m in orders if m > 1)
    if higher:
        near = modulus <= _DIRECT_RADIUS
        far = ~near & ~at_one
        if np.any(near):
            for m, value in _direct_series(higher, z[near], tol).items():
                result[m][near] = value
        if np.any(far):
            for m, value in _log_series(higher, z[far]).items():
                result[m][far] = value
        for m in higher:
            result[m][at_one] = zeta(m)

    return {m: value.reshape(shape) for m, value in result.items()}


def polylog_array(m: int, z, tol: float = POLYLOG_TOL) -> np.ndarray:
    """
    Vectorised Li_m(z) for a single order.
    """
    return polylogs(z, orders=(m,), tol=tol)[_check_order(m)]


def eval_polylog(m: int, z: Union[complex, float], tol: float = POLYLOG_TOL) -> complex:
    """
    Li_m(z) for m in 1..4 and |z| <= 1, to relative error ``tol``.

    Li_1 is the closed form -log(1 - z) on the principal branch.

    Raises:
        PolylogDomainError: order out of range, tolerance below 1e-14, or |z| > 1.
        PolylogDivergenceError: m = 1 and z = 1.
    """
    m = _check_order(m)
    z = complex(z)
    if m == 1:
        if z == 1:
            raise PolylogDivergenceError('Li_1(z) = -log(1 - z) diverges at z = 1')
        if abs(z) > 1 + UNIT_DISC_SLACK:
            raise PolylogDomainError(f'Polylog argument {z} lies outside the closed unit disc')
        _check_tol(tol)
        return -cmath.log(1 - z)
    return complex(polylog_array(m, z, tol)[()])


def inverse_polylog4(y: float) -> float:
    """
    The unique x in [0, 1] with Li_4(x) = y, for 0 <= y <= zeta(4).

    Newton iteration on Li_4(x) - y with derivative Li_3(x) / x, safeguarded by bisection on [0, 1].

    Raises:
        RangeError: y outside [0, zeta(4)], e.g. a computed pressure beyond the perfect-mirror bound.
    """
    y = float(y)
    if not 0.0 <= y <= ZETA4 * (1 + 1e-12):
        raise RangeError(f'Li_4 inverse is defined on [0, pi^4/90], got {y!r}')
    if y == 0.0:
        return 0.0
    if y >= ZETA4:
        return 1.0

    lo, hi = 0.0, 1.0
    x = min(y, 1.0 - 1e-3)
    for _ in range(200):
        li4 = eval_polylog(4, x).real
        residual = li4 - y
        if residual > 0:
            hi = x
        else:
            lo = x
        slope = eval_polylog(3, x).real / x if x > 0 else 1.0
        step = residual / slope
        candidate = x - step
        if not lo < candidate < hi:
            candidate = 0.5 * (lo + hi)
        if abs(candidate - x) <= 1e-15 * max(x, 1e-300) or hi - lo <= 1e-16:
            return candidate
        x = candidate

    logger.warning(f'Li_4 inverse of {y!r} stopped at the iteration limit')
    return x
