"""
Executes a RunConfig: builds the plates and the setup, runs the engine of the command and records the rows.
"""
import logging
from typing import Callable, Dict, Iterator, Sequence

import numpy as np

from casimir_sdk import __version__
from casimir_sdk.classes.enum import Method, OutputFormat, WindowMode
from casimir_sdk.classes.results import PressureResult
from casimir_sdk.classes.run_config import RunConfig
from casimir_sdk.dielectric import (ConstantPermittivityModel, DrudeModel, PlasmaModel, WindowSpec, load_optical_table,
                                    window_factor)
from casimir_sdk.exceptions import EXIT_IO, CasimirError, ConfigError
from casimir_sdk.lifshitz import (ConstantReflectionModel, PlateModel, QuadratureSpec, effective_reflection,
                                  material_spectral_density, pressure_imag_frequency, pressure_real_frequency,
                                  window_force_difference)
from casimir_sdk.recorders import CsvRecorder, JsonLinesRecorder
from casimir_sdk.spectrum import (ConstantReflection, PhysicalSetup, constant_r_free_energy,
                                  constant_r_pressure_breakdown, constant_r_pressure, density_spectrum,
                                  ideal_casimir_pressure)

__all__ = ['COLUMNS', 'execute']

logger = logging.getLogger(__name__)

_SPECTRUM_COLUMNS = ('omega_rad_s', 'xi', 'density_pw_te', 'density_pw_tm', 'density_ew_te', 'density_ew_tm',
                     'density_total')
COLUMNS: Dict[str, Sequence[str]] = {
    'spectrum-const-r': _SPECTRUM_COLUMNS,
    'pressure-const-r-sweep': ('r', 'pressure_pa', 'ideal_pa', 'ratio_to_ideal', 'free_energy_j_m2'),
    'effective-r': ('a_m', 'pressure_te_pa', 'pressure_tm_pa', 'r_te', 'r_tm'),
    'spectrum-material': _SPECTRUM_COLUMNS,
    'window-shape': ('omega_rad_s', 's', 'phi'),
    'window-diff': ('delta', 's', 'mode', 'pressure_pa', 'pressure_windowed_pa', 'delta_pressure_pa', 'ratio',
                    'error_estimate_pa'),
    'pressure': ('method', 'value_pa', 'propagating_pa', 'evanescent_pa', 'error_estimate_pa'),
}

Rows = Iterator[Dict[str, object]]


def _plate_model(config: RunConfig) -> PlateModel:
    if config.model == 'drude':
        return DrudeModel(config.omega_p, config.nu)
    if config.model == 'plasma':
        return PlasmaModel(config.omega_p)
    if config.model == 'table':
        return load_optical_table(config.table)
    if config.model == 'eps':
        return ConstantPermittivityModel(config.eps)
    if config.model == 'const-r':
        return ConstantReflectionModel(*config.reflection())
    raise ConfigError(f"model '{config.model}' has no permittivity", remedy='choose drude, plasma, table or eps')


def _quadrature(config: RunConfig) -> QuadratureSpec:
    overrides = {'p_nodes': config.p_nodes, 'rtol': config.rtol, 'omega_max': config.omega_cutoff}
    return QuadratureSpec(**{key: value for key, value in overrides.items() if value is not None})


def _frequencies(config: RunConfig) -> np.ndarray:
    if config.grid == 'log':
        return np.geomspace(config.omega_min, config.omega_max, config.points)
    return np.linspace(config.omega_min, config.omega_max, config.points)


def _spectrum_const_r(config: RunConfig) -> Rows:
    r = ConstantReflection(*config.reflection())
    setup = PhysicalSetup(config.a) if config.a is not None else None
    xi = np.linspace(config.xi_min, config.xi_max, config.xi_points)
    for sample in density_spectrum(r, xi, setup):
        yield sample.to_record()


def _pressure_const_r_sweep(config: RunConfig) -> Rows:
    setup = PhysicalSetup(config.a)
    ideal = ideal_casimir_pressure(setup)
    for r in np.linspace(config.r_min, config.r_max, config.r_points):
        plates = ConstantReflection.uniform(float(r))
        pressure = constant_r_pressure(plates, setup)
        yield {
            'r': float(r),
            'pressure_pa': pressure,
            'ideal_pa': ideal,
            'ratio_to_ideal': pressure / ideal,
            'free_energy_j_m2': constant_r_free_energy(plates, setup),
        }


def _effective_r(config: RunConfig) -> Rows:
    model = _plate_model(config)
    quad = _quadrature(config)
    for a in np.geomspace(config.a_min, config.a_max, config.a_points):
        setup = PhysicalSetup(float(a))
        result = pressure_imag_frequency(model, setup, quad)
        r_te, r_tm = effective_reflection(result.polarization, setup)
        yield {
            'a_m': float(a),
            'pressure_te_pa': result.polarization[0],
            'pressure_tm_pa': result.polarization[1],
            'r_te': r_te,
            'r_tm': r_tm,
        }


def _spectrum_material(config: RunConfig) -> Rows:
    model = _plate_model(config)
    setup = PhysicalSetup(config.a)
    quad = _quadrature(config)
    for omega in _frequencies(config):
        yield material_spectral_density(model, setup, float(omega), quad).to_record()


def _window_shape(config: RunConfig) -> Rows:
    if len(config.delta) != 1:
        raise ConfigError('window-shape takes a single delta', remedy='pass one value, e.g. --delta 1')
    omegas = _frequencies(config)
    for s in config.s:
        spec = WindowSpec(config.omega1, config.omega2, delta=config.delta[0], s=s, mode=config.mode)
        phi = window_factor(spec, omegas, config.a)
        for omega, value in zip(omegas, phi):
            yield {'omega_rad_s': float(omega), 's': float(s), 'phi': float(value)}


def _window_diff(config: RunConfig) -> Rows:
    model = _plate_model(config)
    setup = PhysicalSetup(config.a)
    quad = _quadrature(config)
    # s only shapes smooth edges
    sharpness = config.s if config.mode == WindowMode.SMOOTH else config.s[:1]
    reference = None
    for delta in config.delta:
        for s in sharpness:
            spec = WindowSpec(config.omega1, config.omega2, delta=delta, s=s, mode=config.mode)
            result = window_force_difference(model, spec, setup, config.method, quad, config.windowed_plates,
                                             reference=reference)
            reference = result.pressure
            yield {
                'delta': float(delta),
                's': float(s),
                'mode': config.mode,
                'pressure_pa': result.pressure.value,
                'pressure_windowed_pa': result.pressure_windowed.value,
                'delta_pressure_pa': result.difference,
                'ratio': result.ratio,
                'error_estimate_pa': result.error_estimate,
            }


def _pressure(config: RunConfig) -> Rows:
    setup = PhysicalSetup(config.a)
    if config.model == 'ideal':
        if config.method != Method.CLOSED_FORM:
            logger.info('Perfect mirrors are always evaluated in closed form')
        result = PressureResult(value=ideal_casimir_pressure(setup), method=Method.CLOSED_FORM)
    elif config.method == Method.CLOSED_FORM:
        plates = ConstantReflection(*config.reflection())
        result = PressureResult(value=constant_r_pressure(plates, setup), method=Method.CLOSED_FORM,
                                polarization=constant_r_pressure_breakdown(plates, setup))
    elif config.method == Method.REAL_FREQUENCY:
        result = pressure_real_frequency(_plate_model(config), setup, _quadrature(config))
    else:
        result = pressure_imag_frequency(_plate_model(config), setup, _quadrature(config))
    logger.info(f'Pressure at a = {config.a:.4e} m: {result.value:.6e} Pa ({result.method})')
    yield result.to_record()


_COMMANDS: Dict[str, Callable[[RunConfig], Rows]] = {
    'spectrum-const-r': _spectrum_const_r,
    'pressure-const-r-sweep': _pressure_const_r_sweep,
    'effective-r': _effective_r,
    'spectrum-material': _spectrum_material,
    'window-shape': _window_shape,
    'window-diff': _window_diff,
    'pressure': _pressure,
}


def execute(config: RunConfig) -> int:
    """
    Run ``config`` and write its output file.

    Every output begins with '# casimir-sdk <version>', '# command = ...' and the resolved parameters, so the file can
    be passed back with --config. Nothing is left behind when the run fails.

    Returns:
        Process exit status: 0, or the exit code of the error (3 validation, 4 numerical, 5 I/O).
    """
    recorder_class = JsonLinesRecorder if config.format == OutputFormat.JSONL else CsvRecorder
    logger.info(f'Running {config.command}')
    try:
        rows = _COMMANDS[config.command](config)
        with recorder_class(config.output, config.command, config.parameters(), COLUMNS[config.command],
                            __version__) as recorder:
            for row in rows:
                recorder.write(row)
    except CasimirError as e:
        remedy = f' ({e.remedy})' if getattr(e, 'remedy', '') else ''
        logger.error(f'{config.command} failed: {e}{remedy}')
        return e.exit_code
    except OSError as e:
        logger.error(f'{config.command} failed: {e}')
        return EXIT_IO
    logger.info(f'{config.command} finished')
    return 0
