"""
Panel Gauss-Legendre quadrature with bisection refinement, and Richardson extrapolation.

Every integral of the package goes through :func:`integrate_panels`. Panels are evaluated in vectorised batches, but the
accepted panel contributions are always reduced in panel order with :func:`math.fsum`, so the result does not depend on
how the batches were formed.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence, Tuple, Union

import numpy as np

from casimir_sdk.exceptions import AccuracyError

__all__ = ['QuadratureResult', 'gauss_legendre', 'integrate_panels', 'richardson', 'stable_sum']

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadratureResult:
    """
    ``value`` and ``error`` are scalars for scalar integrands and arrays for vector-valued ones.
    """
    value: Union[complex, np.ndarray]
    error: Union[float, np.ndarray]
    evaluations: int
    converged: bool


@lru_cache(maxsize=32)
def gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gauss-Legendre nodes and weights on [-1, 1]. Returned arrays are read-only, they are shared through the cache.
    """
    if order < 1:
        raise ValueError(f'Gauss-Legendre order must be positive, got {order}')
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def stable_sum(values) -> complex:
    """
    Order-independent, correctly rounded sum of real or complex values.
    """
    values = np.asarray(values)
    if np.iscomplexobj(values):
        return complex(math.fsum(values.real.tolist()), math.fsum(values.imag.tolist()))
    return math.fsum(values.tolist())


def _column_sums(values: np.ndarray):
    """stable_sum along the first axis, for every trailing component."""
    if values.ndim == 1:
        return stable_sum(values)
    flat = values.reshape(len(values), -1)
    sums = [stable_sum(flat[:, j]) for j in range(flat.shape[1])]
    return np.array(sums).reshape(values.shape[1:])


def integrate_panels(func: Callable[[np.ndarray], np.ndarray],
                     edges: Sequence[float],
                     order: int = 8,
                     rtol: float = 1e-10,
                     atol: float = 0.0,
                     max_depth: int = 12,
                     strict: bool = False) -> QuadratureResult:
    """
    Integrate ``func`` over the union of the panels defined by ``edges``.

    Each panel is integrated with Gauss-Legendre of the given order, once over the whole panel and once over its two
    halves. Panels whose two estimates differ by more than ``max(atol * width / total, rtol * |estimate|)`` are bisected,
    up to ``max_depth`` times. For vector-valued integrands every component has to pass.

    Args:
        func: Vectorised integrand. Maps a 1-D array of N abscissae to an array of shape (N,) or (N, K), real or complex.
        edges: Increasing panel boundaries.
        order: Gauss-Legendre order per panel.
        rtol: Relative tolerance per panel.
        atol: Absolute tolerance, distributed over the panels proportionally to their width.
        max_depth: Maximum number of bisections of an initial panel.
        strict: Raise AccuracyError instead of returning a non-converged estimate.

    Returns:
        QuadratureResult with the integral, the summed panel error estimates and the number of integrand evaluations.
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or len(edges) < 2:
        raise ValueError('At least two panel edges are required')
    if np.any(np.diff(edges) <= 0):
        raise ValueError('Panel edges must be strictly increasing')

    nodes, weights = gauss_legendre(order)
    n = len(nodes)
    total = edges[-1] - edges[0]
    lo, hi = edges[:-1], edges[1:]
    depth = 0

    accepted_left = []
    accepted_value = []
    accepted_error = []
    evaluations = 0
    converged = True

    while len(lo):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        quarter = 0.5 * half

        x_whole = mid[:, None] + half[:, None] * nodes
        x_left = (lo + quarter)[:, None] + quarter[:, None] * nodes
        x_right = (mid + quarter)[:, None] + quarter[:, None] * nodes
        x = np.concatenate([x_whole, x_left, x_right], axis=1)

        f = np.asarray(func(x.ravel()))
        trailing = f.shape[1:]
        f = f.reshape(x.shape + trailing)
        evaluations += x.size
        scale = (-1,) + (1,) * len(trailing)

        coarse = half.reshape(scale) * np.einsum('pn...,n->p...', f[:, :n], weights)
        fine = quarter.reshape(scale) * (np.einsum('pn...,n->p...', f[:, n:2 * n], weights) +
                                         np.einsum('pn...,n->p...', f[:, 2 * n:], weights))
        err = np.abs(fine - coarse)

        bound = np.maximum((atol * (hi - lo) / total).reshape(scale), rtol * np.abs(fine))
        passed = np.all((err <= bound).reshape(len(lo), -1), axis=1)
        done = passed | (depth >= max_depth)
        if depth >= max_depth and not np.all(passed):
            converged = False
            logger.warning(f'{int(np.sum(~passed))} panel(s) did not converge after {max_depth} bisections')

        accepted_left.append(lo[done])
        accepted_value.append(fine[done])
        accepted_error.append(err[done])

        split = ~done
        lo, hi = np.concatenate([lo[split], mid[split]]), np.concatenate([mid[split], hi[split]])
        depth += 1

    left = np.concatenate(accepted_left)
    ordering = np.argsort(left, kind='stable')
    value = _column_sums(np.concatenate(accepted_value)[ordering])
    error = _column_sums(np.concatenate(accepted_error)[ordering])
    logger.debug(f'{len(left)} panels, {evaluations} evaluations, error estimate {np.max(error):.3e}')

    if strict and not converged:
        raise AccuracyError('Panel quadrature did not converge', estimate=float(np.max(np.real(value))),
                            error=float(np.max(error)))
    return QuadratureResult(value=value, error=error, evaluations=evaluations, converged=converged)


def richardson(deltas: Sequence[float], values: Sequence[float], powers: Sequence[int] = (1, 2)) -> Tuple[float, float]:
    """
    Extrapolate ``values[i] = V + sum_k c_k * deltas[i] ** powers[k]`` to delta -> 0.

    All ``len(values) - 1`` leading powers are eliminated. The error estimate is the difference to the extrapolation that
    uses one power less and only the smallest deltas.

    Returns:
        (extrapolated value, error estimate)
    """
    deltas = np.asarray(deltas, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(deltas) != len(values) or len(values) < 1:
        raise ValueError('deltas and values must have the same, non-zero length')
    if len(values) == 1:
        return float(values[0]), float('nan')

    powers = list(powers)[:len(values) - 1]
    if len(powers) < len(values) - 1:
        raise ValueError(f'{len(values) - 1} powers are needed to extrapolate {len(values)} values')

    def _solve(d, v, p):
        matrix = np.column_stack([np.ones_like(d)] + [d ** k for k in p])
        return float(np.linalg.solve(matrix, v)[0])

    best = _solve(deltas, values, powers)
    previous = _solve(deltas[1:], values[1:], powers[:-1]) if len(values) > 2 else float(values[-1])
    return best, abs(best - previous)
