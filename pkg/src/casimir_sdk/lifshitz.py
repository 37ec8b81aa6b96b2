"""
Lifshitz pressure between two half-spaces at zero temperature.

On the real frequency axis the pressure spectrum is, in units of hbar/a^3 and with xi = 2 w a / c,

    P(xi) = -xi^3 / (16 pi^2) * Re integral_C dp p^2 sum_sigma R e^{i p xi} / (1 - R e^{i p xi}),  R = r1 r2

where C runs from p = 1 to 0 along the real axis (propagating waves) and on to p = i infinity (evanescent waves).
On the imaginary axis w = i zeta the integrand becomes smooth and exponentially decaying:

    P = -hbar / (2 pi^2 c^3) * integral_0^inf dzeta zeta^3 integral_1^inf dp p^2 sum_sigma R e^{-2p zeta a/c} / (...)
"""
import logging
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from casimir_sdk.classes.enum import Branch, Method, WindowMode
from casimir_sdk.classes.results import PressureResult, SpectralSample, WindowForceDifference
from casimir_sdk.constants import C, HBAR, ZETA4
from casimir_sdk.dielectric import (ConstantPermittivityModel, DielectricModel, DrudeModel, PlasmaModel, WindowedModel,
                                    WindowSpec)
from casimir_sdk.exceptions import AccuracyError, ModelDomainError, RangeError, ResonanceError, UnsupportedModelError
from casimir_sdk.polylog import UNIT_DISC_SLACK, inverse_polylog4
from casimir_sdk.quadrature import gauss_legendre, integrate_panels, richardson
from casimir_sdk.reflection import ContourPoint, fresnel_pair
from casimir_sdk.spectrum import PhysicalSetup, density_components

__all__ = [
    'QuadratureSpec',
    'ConstantReflectionModel',
    'lifshitz_integrand',
    'material_spectral_density',
    'pressure_real_frequency',
    'pressure_imag_frequency',
    'effective_reflection',
    'window_force_difference',
]

logger = logging.getLogger(__name__)

RESONANCE_GUARD = 1e-12
_NORM = 1.0 / (16 * math.pi ** 2)
_IDEAL_INTEGRAL = math.pi ** 2 / 120  # |xi-integral| of the normalised ideal spectrum

_EVANESCENT_EDGES = (0.0, 0.25, 0.5, 0.75, 1.0)
_V_EDGES = (0.0, 0.5, 0.75, 0.9, 0.97, 0.99, 0.997, 0.999, 0.9997, 1.0)
_U_EDGES = (0.0, 0.1, 0.2, 0.3, 0.45, 0.6, 0.75, 0.85, 0.92, 0.97, 1.0)
_MAX_DOUBLINGS = 4
_GRID_CHUNK = 256


@dataclass(frozen=True)
class QuadratureSpec:
    """
    Discretisation of the Lifshitz integrals.

    Attributes:
        p_nodes: Gauss order of every p-panel (real axis) and of every (u, v)-panel (imaginary axis), >= 16.
        omega_panel_width: Initial width of the real-frequency panels (rad/s), at most (pi/8) c/a.
            None = (pi/16) c/a.
        omega_max: Real-frequency cutoff (rad/s). None = xi_max c / 2a with xi_max = 200 for dispersive plates and
            50 / min(deltas) for non-dispersive ones.
        zeta_scale: Imaginary-frequency map parameter zeta_0 (rad/s), zeta = (zeta_0 / p) * u / (1 - u). None = c/2a.
        rtol: Target relative tolerance.
        deltas: Strengths of the soft cutoff exp(-delta xi) of the real-frequency integral, extrapolated to zero.
        max_depth: Bisection depth of the p-integrals.
        omega_max_depth: Bisection depth of the real-frequency panels.
    """
    p_nodes: int = 16
    omega_panel_width: Optional[float] = None
    omega_max: Optional[float] = None
    zeta_scale: Optional[float] = None
    rtol: float = 1e-6
    deltas: Tuple[float, ...] = (0.02, 0.01, 0.005)
    max_depth: int = 12
    omega_max_depth: int = 6

    def __post_init__(self):
        if isinstance(self.p_nodes, bool) or int(self.p_nodes) != self.p_nodes or self.p_nodes < 16:
            raise ModelDomainError(f'p_nodes must be an integer >= 16, got {self.p_nodes!r}')
        for name in ('omega_panel_width', 'omega_max', 'zeta_scale'):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ModelDomainError(f'{name} must be positive, got {value!r}')
        if not 0 < self.rtol < 1:
            raise ModelDomainError(f'rtol must lie in (0, 1), got {self.rtol!r}')
        deltas = tuple(float(d) for d in self.deltas)
        if not deltas or any(d <= 0 for d in deltas):
            raise ModelDomainError('deltas must be a non-empty sequence of positive numbers')
        object.__setattr__(self, 'p_nodes', int(self.p_nodes))
        object.__setattr__(self, 'deltas', deltas)

    def resolve(self, setup: PhysicalSetup, dispersive: bool = True) -> 'QuadratureSpec':
        """
        Copy with every default replaced by its value at the given separation.
        """
        scale = C / setup.a
        width = self.omega_panel_width if self.omega_panel_width is not None else math.pi / 16 * scale
        if width > math.pi / 8 * scale * (1 + 1e-12):
            raise ModelDomainError(f'omega_panel_width must not exceed (pi/8) c/a = {math.pi / 8 * scale:.6e} rad/s')
        omega_max = self.omega_max
        if omega_max is None:
            xi_max = 200.0 if dispersive else 50.0 / min(self.deltas)
            omega_max = float(setup.omega(xi_max))
        zeta_scale = self.zeta_scale if self.zeta_scale is not None else scale / 2
        return replace(self, omega_panel_width=width, omega_max=omega_max, zeta_scale=zeta_scale)


@dataclass(frozen=True)
class ConstantReflectionModel:
    """
    Plate with fixed reflection coefficients. Fresnel coefficients are bypassed wherever it is used.

    With ``closed_form`` the real-frequency p-integrals are replaced by their polylog expressions.
    """
    r_te: complex
    r_tm: complex
    closed_form: bool = True

    def __post_init__(self):
        for name in ('r_te', 'r_tm'):
            value = complex(getattr(self, name))
            if not abs(value) <= 1 + UNIT_DISC_SLACK:
                raise ModelDomainError(f'|{name}| must not exceed 1, got {value!r}')
            object.__setattr__(self, name, value)


PlateModel = Union[DielectricModel, ConstantReflectionModel]


def _is_dispersive(model: PlateModel) -> bool:
    if isinstance(model, WindowedModel):
        return _is_dispersive(model.base)
    return not isinstance(model, (ConstantPermittivityModel, ConstantReflectionModel))


def _plate_coefficients(model: PlateModel, point: ContourPoint, omega=None, zeta=None):
    if isinstance(model, ConstantReflectionModel):
        shape = np.shape(point.p)
        return np.full(shape, model.r_te), np.full(shape, model.r_tm)
    eps = model.real_axis(omega) if zeta is None else model.imag_axis(zeta)
    return fresnel_pair(eps, point)


def _reflection_products(model: PlateModel, model2: Optional[PlateModel], point: ContourPoint, omega=None, zeta=None):
    """
    (R_TE, R_TM) with R = r1 r2; a single plate model stands for two identical plates.
    """
    r1 = _plate_coefficients(model, point, omega, zeta)
    if model2 is None or model2 is model:
        return r1[0] * r1[0], r1[1] * r1[1]
    r2 = _plate_coefficients(model2, point, omega, zeta)
    return r1[0] * r2[0], r1[1] * r2[1]


def lifshitz_integrand(r_squared, point: ContourPoint, xi):
    """
    p^2 R e / (1 - R e) with e = exp(i p xi) on the real-frequency contour and e = exp(-p xi) on the imaginary axis,
    where xi = 2 zeta a / c.

    Args:
        r_squared: R = r1 r2 (r^2 for identical plates), broadcastable against ``point.p``.
        point: Contour point(s).
        xi: Dimensionless frequency, broadcastable against ``point.p``.

    Raises:
        ResonanceError: |1 - R e| < 1e-12.
    """
    p = point.p
    if point.branch == Branch.IMAG_AXIS:
        phase = np.exp(-p.real * xi)
    else:
        phase = np.exp(1j * p * xi)
    x = np.asarray(r_squared, dtype=complex) * phase
    denominator = 1.0 - x
    if np.any(np.abs(denominator) < RESONANCE_GUARD):
        raise ResonanceError(f'Lifshitz denominator vanishes on the {point.branch} branch at xi = {np.max(xi):.6g}')
    return p ** 2 * x / denominator


def _contour_densities(model: PlateModel, model2: Optional[PlateModel], omega: float, xi: float,
                       quad: QuadratureSpec):
    """
    ((pw_TE, pw_TM), (ew_TE, ew_TM)) at one real frequency, by adaptive p-integration.
    """
    def _propagating(p):
        point = ContourPoint.propagating(p)
        products = _reflection_products(model, model2, point, omega=omega)
        return np.stack([lifshitz_integrand(r, point, xi).real for r in products], axis=-1)

    def _evanescent(v):
        # t = exp(-q xi) = v^3
        point = ContourPoint.evanescent(-3 * np.log(v) / xi)
        products = _reflection_products(model, model2, point, omega=omega)
        return np.stack([(lifshitz_integrand(r, point, xi) / v).imag for r in products], axis=-1)

    n_panels = max(2, math.ceil(xi / (2 * math.pi)))
    rtol = 0.1 * quad.rtol
    propagating = integrate_panels(_propagating, np.linspace(0.0, 1.0, n_panels + 1), order=quad.p_nodes,
                                   rtol=rtol, atol=1e-15, max_depth=quad.max_depth)
    evanescent = integrate_panels(_evanescent, _EVANESCENT_EDGES, order=quad.p_nodes,
                                  rtol=rtol, atol=1e-15, max_depth=quad.max_depth)
    pw = _NORM * xi ** 3 * np.asarray(propagating.value, dtype=float)
    ew = 3 * _NORM * xi ** 2 * np.asarray(evanescent.value, dtype=float)
    return pw, ew


def _is_closed_form(model: PlateModel, model2: Optional[PlateModel]) -> bool:
    plates = (model, model if model2 is None else model2)
    return all(isinstance(m, ConstantReflectionModel) and m.closed_form for m in plates)


def _constant_products(model: ConstantReflectionModel, model2: Optional[ConstantReflectionModel]):
    other = model if model2 is None else model2
    return model.r_te * other.r_te, model.r_tm * other.r_tm


def material_spectral_density(model: PlateModel, setup: PhysicalSetup, omega: float,
                              quad: Optional[QuadratureSpec] = None,
                              model2: Optional[PlateModel] = None) -> SpectralSample:
    """
    Pressure spectrum (hbar/a^3 units) of plates made of ``model`` (and ``model2``) at the real frequency ``omega``.

    The propagating part integrates over p in (0, 1]. The evanescent part substitutes t = exp(-q xi) = v^3 on
    p = iq, so the decay of the integrand becomes the integration measure.
    """
    if not (np.isfinite(omega) and omega > 0):
        raise ModelDomainError(f'omega must be positive, got {omega!r}')
    quad = quad or QuadratureSpec()
    xi = float(setup.xi(omega))

    if _is_closed_form(model, model2):
        pw, ew, total = density_components(_constant_products(model, model2), np.array([xi]))
        pw, ew, total = pw[0], ew[0], float(total[0])
    else:
        pw, ew = _contour_densities(model, model2, omega, xi, quad)
        total = float(np.sum(pw) + np.sum(ew))
    return SpectralSample(xi=xi, density_pw=(float(pw[0]), float(pw[1])), density_ew=(float(ew[0]), float(ew[1])),
                          density_total=total, omega=float(omega))


def _window_breakpoints(model: Optional[PlateModel]) -> Tuple[float, ...]:
    if isinstance(model, WindowedModel) and model.spec.mode == WindowMode.SHARP:
        return model.spec.omega1, model.spec.omega2
    return ()


def _omega_edges(setup: PhysicalSetup, quad: QuadratureSpec, breakpoints: Sequence[float]) -> np.ndarray:
    xi_max = float(setup.xi(quad.omega_max))
    width = float(setup.xi(quad.omega_panel_width))
    edges = np.linspace(0.0, xi_max, max(1, math.ceil(xi_max / width)) + 1)
    extra = [float(setup.xi(w)) for w in breakpoints if 0 < w < quad.omega_max]
    return np.union1d(edges, extra)


def pressure_real_frequency(model: PlateModel, setup: PhysicalSetup, quad: Optional[QuadratureSpec] = None,
                            model2: Optional[PlateModel] = None, breakpoints: Sequence[float] = ()) -> PressureResult:
    """
    Integrate material_spectral_density over 0 < w < omega_max.

    The integrand is damped by exp(-delta xi) for every delta of the quadrature spec and the results are
    Richardson-extrapolated to delta -> 0, component by component, so the value still splits exactly into the
    propagating and evanescent parts.

    Args:
        model: Plate model, or the first plate when ``model2`` is given.
        setup: Plate separation.
        quad: Discretisation, defaults to QuadratureSpec().
        model2: Second plate, None for two identical plates.
        breakpoints: Additional panel edges (rad/s), e.g. where the permittivity jumps.

    Raises:
        AccuracyError: The frequency panels did not converge; carries the best estimate in Pa.
    """
    quad = (quad or QuadratureSpec()).resolve(setup, dispersive=_is_dispersive(model) and
                                              (model2 is None or _is_dispersive(model2)))
    deltas = np.array(quad.deltas)
    breakpoints = tuple(breakpoints) + _window_breakpoints(model) + _window_breakpoints(model2)
    edges = _omega_edges(setup, quad, breakpoints)
    closed_form = _is_closed_form(model, model2)
    if closed_form:
        products = _constant_products(model, model2)

    def _integrand(xi):
        if closed_form:
            pw, ew, _ = density_components(products, xi)
        else:
            pw, ew = np.empty((len(xi), 2)), np.empty((len(xi), 2))
            for i, x in enumerate(xi):
                pw[i], ew[i] = _contour_densities(model, model2, float(setup.omega(x)), float(x), quad)
        components = np.concatenate([pw, ew], axis=-1)  # pw_te, pw_tm, ew_te, ew_tm
        damping = np.exp(-np.outer(xi, deltas))
        return (damping[:, :, None] * components[:, None, :]).reshape(len(xi), -1)

    logger.info(f'Real-frequency integration over {len(edges) - 1} panels up to {quad.omega_max:.4e} rad/s')
    atol = quad.rtol * _IDEAL_INTEGRAL
    result = integrate_panels(_integrand, edges, order=8, rtol=quad.rtol, atol=atol, max_depth=quad.omega_max_depth)
    values = np.asarray(result.value, dtype=float).reshape(len(deltas), 4)
    errors = np.asarray(result.error, dtype=float).reshape(len(deltas), 4)

    extrapolated, extrapolation_error = np.empty(4), np.empty(4)
    for k in range(4):
        extrapolated[k], extrapolation_error[k] = richardson(deltas, values[:, k], powers=(1, 2))
    extrapolation_error = np.nan_to_num(extrapolation_error)

    scale = setup.pressure_scale
    propagating = scale * math.fsum(extrapolated[:2])
    evanescent = scale * math.fsum(extrapolated[2:])
    value = propagating + evanescent
    error = scale * (math.fsum(errors[-1]) + math.fsum(extrapolation_error))
    polarization = (scale * (extrapolated[0] + extrapolated[2]), scale * (extrapolated[1] + extrapolated[3]))

    if not result.converged and error > 10 * max(scale * atol, quad.rtol * abs(value)):
        raise AccuracyError('Real-frequency Lifshitz integral did not converge', estimate=value, error=error)
    logger.info(f'Real-frequency pressure {value:.6e} Pa (propagating {propagating:.6e}, evanescent {evanescent:.6e},'
                f' error {error:.2e})')
    return PressureResult(value=value, method=Method.REAL_FREQUENCY, error_estimate=error, propagating=propagating,
                          evanescent=evanescent, polarization=polarization)


def _composite_rule(edges: Sequence[float], order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = gauss_legendre(order)
    edges = np.asarray(edges, dtype=float)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    return (mid[:, None] + half[:, None] * nodes).ravel(), (half[:, None] * weights).ravel()


def _imag_axis_sum(model: PlateModel, model2: Optional[PlateModel], setup: PhysicalSetup, zeta_scale: float,
                   order: int) -> np.ndarray:
    """
    Tensor Gauss estimate of (P_TE, P_TM) in Pa with p = 1/(1-v) and zeta = (zeta_0/p) u/(1-u).
    """
    v, v_weights = _composite_rule(_V_EDGES, order)
    u, u_weights = _composite_rule(_U_EDGES, order)
    y = u / (1.0 - u)
    kappa = 2 * zeta_scale * setup.a / C
    prefactor = -HBAR * zeta_scale ** 4 / (2 * math.pi ** 2 * C ** 3)

    partial = []
    for start in range(0, len(v), _GRID_CHUNK):
        rows = slice(start, start + _GRID_CHUNK)
        p_grid = np.broadcast_to((1.0 / (1.0 - v[rows]))[:, None], (len(v[rows]), len(u)))
        zeta = zeta_scale * y[None, :] / p_grid
        point = ContourPoint.imag_axis(p_grid)
        xi = kappa * y[None, :] / p_grid  # p xi = kappa y

        # zeta^3 dzeta p^2 dp = zeta_0^4 y^3 / p^2 dy dv
        measure = (y ** 3 / (1.0 - u) ** 2)[None, :] / p_grid ** 2
        weights = v_weights[rows, None] * u_weights[None, :]
        products = _reflection_products(model, model2, point, zeta=zeta)
        partial.append([np.sum(weights * measure * lifshitz_integrand(r, point, xi).real) for r in products])

    partial = np.array(partial)
    return prefactor * np.array([math.fsum(partial[:, 0]), math.fsum(partial[:, 1])])


def pressure_imag_frequency(model: PlateModel, setup: PhysicalSetup, quad: Optional[QuadratureSpec] = None,
                            model2: Optional[PlateModel] = None) -> PressureResult:
    """
    Lifshitz pressure from the imaginary frequency axis.

    The Gauss order of the (u, v) panels is doubled, starting from ``quad.p_nodes``, until two successive estimates
    agree to ``quad.rtol``; the last difference is reported as the error estimate.

    Raises:
        UnsupportedModelError: The permittivity is undefined on the imaginary axis (smooth windows).
        AccuracyError: No agreement after four doublings.
    """
    quad = (quad or QuadratureSpec()).resolve(setup)
    order = quad.p_nodes
    previous = _imag_axis_sum(model, model2, setup, quad.zeta_scale, order)
    for _ in range(_MAX_DOUBLINGS):
        order *= 2
        current = _imag_axis_sum(model, model2, setup, quad.zeta_scale, order)
        value = math.fsum(current)
        error = abs(value - math.fsum(previous)) + 1e-12 * abs(value)
        logger.debug(f'Gauss order {order}: {value:.12e} Pa, change {error:.3e}')
        if error <= quad.rtol * abs(value) or value == 0.0:
            logger.info(f'Imaginary-frequency pressure {value:.6e} Pa (error {error:.2e})')
            return PressureResult(value=value, method=Method.IMAG_FREQUENCY, error_estimate=error,
                                  polarization=(float(current[0]), float(current[1])))
        previous = current
    raise AccuracyError('Imaginary-frequency Lifshitz integral did not converge', estimate=value, error=error)


def effective_reflection(p_sigma: Sequence[float], setup: PhysicalSetup) -> Tuple[float, float]:
    """
    Constant reflection coefficients reproducing the per-polarization pressures (P_TE, P_TM):

        r_sigma = sqrt(Li4^-1(-16 pi^2 a^4 P_sigma / (3 hbar c)))

    Raises:
        RangeError: a pressure is repulsive or stronger than its perfect-mirror bound.
    """
    bound = 3 * HBAR * C / (16 * math.pi ** 2 * setup.a ** 4)
    coefficients = []
    for pressure in p_sigma:
        y = -float(pressure) / bound
        if y > ZETA4 and y <= ZETA4 * (1 + 1e-9):
            y = ZETA4
        try:
            coefficients.append(math.sqrt(inverse_polylog4(y)))
        except RangeError:
            raise RangeError(f'Pressure {pressure:.6e} Pa lies outside [-{bound * ZETA4:.6e}, 0] Pa, '
                             f'no constant reflection coefficient reproduces it') from None
    return tuple(coefficients)


def window_force_difference(model: DielectricModel, spec: WindowSpec, setup: PhysicalSetup,
                            method: Union[Method, str] = Method.IMAG_FREQUENCY,
                            quad: Optional[QuadratureSpec] = None,
                            windowed_plates: str = 'both',
                            reference: Optional[PressureResult] = None) -> WindowForceDifference:
    """
    Pressure change when the susceptibility of ``model`` is suppressed inside the window ``spec``.

    Both pressures use the same quadrature spec and the same frequency panels. With ``windowed_plates='one'`` only the
    first plate is switched (r^2 -> r1 r2). A reference pressure of the bare plates, computed with the same
    method and spec, is reused instead of being recomputed.

    Raises:
        UnsupportedModelError: imaginary-frequency method with a smooth window or a non-Drude base model.
    """
    method = Method.parse(method)
    if windowed_plates not in ('both', 'one'):
        raise ModelDomainError(f"windowed_plates must be 'both' or 'one', got {windowed_plates!r}")
    if method == Method.CLOSED_FORM:
        raise UnsupportedModelError('the window force difference needs a numerical Lifshitz method')
    if method == Method.IMAG_FREQUENCY:
        if spec.mode != WindowMode.SHARP:
            raise UnsupportedModelError('smooth windows are not causal, use the real-frequency method')
        if not isinstance(model, (DrudeModel, PlasmaModel)):
            raise UnsupportedModelError(f'imaginary-frequency window shifts need a Drude model, '
                                        f'got {type(model).__name__}')

    windowed = WindowedModel(model, spec, setup.a)
    second = windowed if windowed_plates == 'both' else model
    if method == Method.REAL_FREQUENCY:
        breakpoints = (spec.omega1, spec.omega2) if spec.mode == WindowMode.SHARP else ()
        pressure = (reference if reference is not None else
                    pressure_real_frequency(model, setup, quad, breakpoints=breakpoints))
        pressure_windowed = (pressure if spec.delta == 0 else
                             pressure_real_frequency(windowed, setup, quad, model2=second, breakpoints=breakpoints))
    else:
        pressure = reference if reference is not None else pressure_imag_frequency(model, setup, quad)
        pressure_windowed = (pressure if spec.delta == 0 else
                             pressure_imag_frequency(windowed, setup, quad, model2=second))

    result = WindowForceDifference(pressure=pressure, pressure_windowed=pressure_windowed, method=method,
                                   windowed_plates=windowed_plates)
    logger.info(f'Window force difference ({method}, {windowed_plates}): {result.difference:.6e} Pa, '
                f'dP/P = {result.ratio:.4g}')
    return result
