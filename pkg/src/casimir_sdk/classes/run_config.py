from dataclasses import dataclass
from typing import Dict, List, Optional

from marshmallow import RAISE, Schema, ValidationError, fields, post_load, validate, validates_schema

from casimir_sdk.classes.enum import Method, OutputFormat, WindowMode
from casimir_sdk.exceptions import ConfigError
from casimir_sdk.polylog import UNIT_DISC_SLACK
from casimir_sdk.utils import format_frequency, format_length, parse_frequency, parse_length

__all__ = ['COMMANDS', 'MODELS', 'RunConfig', 'RunConfigSchema']

COMMANDS = (
    'spectrum-const-r',
    'pressure-const-r-sweep',
    'effective-r',
    'spectrum-material',
    'window-shape',
    'window-diff',
    'pressure',
)
MODELS = ('drude', 'plasma', 'table', 'eps', 'const-r', 'ideal')

# Models every command accepts
_COMMAND_MODELS = {
    'effective-r': ('drude', 'plasma', 'table', 'eps'),
    'spectrum-material': ('drude', 'plasma', 'table', 'eps', 'const-r'),
    'window-diff': ('drude', 'plasma', 'table'),
    'pressure': MODELS,
}
_COMMAND_REQUIRED = {
    'spectrum-const-r': ('xi_max',),
    'pressure-const-r-sweep': ('a',),
    'effective-r': ('model', 'a_min', 'a_max'),
    'spectrum-material': ('model', 'a', 'omega_min', 'omega_max'),
    'window-shape': ('a', 'omega1', 'omega2', 'omega_min', 'omega_max'),
    'window-diff': ('model', 'a', 'omega1', 'omega2', 'delta'),
    'pressure': ('model', 'a'),
}
_MODEL_REQUIRED = {
    'drude': ('omega_p', 'nu'),
    'plasma': ('omega_p',),
    'table': ('table',),
    'eps': ('eps',),
}
_ORDERED = (('a_min', 'a_max'), ('xi_min', 'xi_max'), ('r_min', 'r_max'), ('omega_min', 'omega_max'),
            ('omega1', 'omega2'))

_POSITIVE = validate.Range(min=0, min_inclusive=False)


class _Quantity(fields.Field):
    """Unit-bearing string, loaded as an SI float and dumped back in a form the loader accepts."""
    parse = None
    format = None

    def _deserialize(self, value, attr, data, **kwargs):
        try:
            return type(self).parse(value)
        except ConfigError as e:
            raise ValidationError(f'{e}; {e.remedy}') from e

    def _serialize(self, value, attr, obj, **kwargs):
        return None if value is None else type(self).format(value)


class Length(_Quantity):
    parse = staticmethod(parse_length)
    format = staticmethod(format_length)


class Frequency(_Quantity):
    parse = staticmethod(parse_frequency)
    format = staticmethod(format_frequency)


class Complex(fields.Field):
    """Reflection coefficient written as a Python number, e.g. 0.9 or 0.8+0.1j."""

    def _deserialize(self, value, attr, data, **kwargs):
        try:
            return complex(str(value).replace(' ', ''))
        except ValueError as e:
            raise ValidationError(f"'{value}' is not a real or complex number") from e

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return repr(value.real) if value.imag == 0 else repr(value)


class CommaSeparated(fields.List):
    """List field that also accepts the comma separated form used on the command line and in config files."""

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, str):
            value = [item for item in value.split(',') if item.strip()]
        return super()._deserialize(value, attr, data, **kwargs)

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return ','.join(repr(float(item)) for item in value)


def _in_unit_disc(value: complex):
    if not abs(value) <= 1 + UNIT_DISC_SLACK:
        raise ValidationError(f'|r| must not exceed 1, got {value!r}')


@dataclass
class RunConfig:
    """
    Fully resolved parameters of one CLI run. Lengths are in m, frequencies in rad/s. Parameters a command does not
    use are None.
    """
    command: str
    model: Optional[str] = None
    omega_p: Optional[float] = None
    nu: Optional[float] = None
    eps: Optional[float] = None
    table: Optional[str] = None
    r: Optional[complex] = None
    r_te: Optional[complex] = None
    r_tm: Optional[complex] = None
    a: Optional[float] = None
    a_min: Optional[float] = None
    a_max: Optional[float] = None
    a_points: Optional[int] = None
    xi_min: Optional[float] = None
    xi_max: Optional[float] = None
    xi_points: Optional[int] = None
    r_min: Optional[float] = None
    r_max: Optional[float] = None
    r_points: Optional[int] = None
    omega_min: Optional[float] = None
    omega_max: Optional[float] = None
    points: Optional[int] = None
    grid: Optional[str] = None
    omega1: Optional[float] = None
    omega2: Optional[float] = None
    delta: Optional[List[float]] = None
    s: Optional[List[float]] = None
    mode: Optional[WindowMode] = None
    method: Optional[Method] = None
    windowed_plates: Optional[str] = None
    p_nodes: Optional[int] = None
    rtol: Optional[float] = None
    omega_cutoff: Optional[float] = None
    format: OutputFormat = OutputFormat.CSV
    output: Optional[str] = None

    def parameters(self) -> Dict[str, str]:
        """
        Every parameter that is set, except the command and the output path, in config-file syntax.
        """
        dumped = RunConfigSchema().dump(self)
        parameters = {}
        for key in sorted(dumped):
            value = dumped[key]
            if value is None or key in ('command', 'output'):
                continue
            parameters[key] = repr(value) if isinstance(value, float) else str(value)
        return parameters

    def reflection(self):
        """(r_TE, r_TM) from either ``r`` or the per-polarization values."""
        if self.r_te is not None or self.r_tm is not None:
            return self.r_te, self.r_tm
        return self.r, self.r


class _EnumField(fields.Field):
    enum = None

    def _deserialize(self, value, attr, data, **kwargs):
        try:
            return self.enum.parse(value)
        except ValueError as e:
            raise ValidationError(str(e)) from e

    def _serialize(self, value, attr, obj, **kwargs):
        return None if value is None else str(value).replace('_', '-')


class MethodField(_EnumField):
    enum = Method


class WindowModeField(_EnumField):
    enum = WindowMode


class OutputFormatField(_EnumField):
    enum = OutputFormat


class RunConfigSchema(Schema):
    class Meta:
        unknown = RAISE

    command = fields.Str(required=True, validate=validate.OneOf(COMMANDS))
    # Plate material
    model = fields.Str(validate=validate.OneOf(MODELS))
    omega_p = Frequency(validate=_POSITIVE)
    nu = Frequency(validate=_POSITIVE)
    eps = fields.Float(validate=_POSITIVE)
    table = fields.Str()
    # Constant reflection coefficients
    r = Complex(validate=_in_unit_disc)
    r_te = Complex(validate=_in_unit_disc)
    r_tm = Complex(validate=_in_unit_disc)
    # Separations
    a = Length(validate=_POSITIVE)
    a_min = Length(validate=_POSITIVE)
    a_max = Length(validate=_POSITIVE)
    a_points = fields.Int(validate=validate.Range(min=1))
    # Grids
    xi_min = fields.Float(validate=validate.Range(min=0))
    xi_max = fields.Float(validate=_POSITIVE)
    xi_points = fields.Int(validate=validate.Range(min=2))
    r_min = fields.Float(validate=validate.Range(min=0, max=1))
    r_max = fields.Float(validate=validate.Range(min=0, max=1))
    r_points = fields.Int(validate=validate.Range(min=2))
    omega_min = Frequency(validate=_POSITIVE)
    omega_max = Frequency(validate=_POSITIVE)
    points = fields.Int(validate=validate.Range(min=2))
    grid = fields.Str(validate=validate.OneOf(('linear', 'log')))
    # Transparency window
    omega1 = Frequency(validate=_POSITIVE)
    omega2 = Frequency(validate=_POSITIVE)
    delta = CommaSeparated(fields.Float(validate=validate.Range(min=0, max=1)), validate=validate.Length(min=1))
    s = CommaSeparated(fields.Float(validate=_POSITIVE), validate=validate.Length(min=1))
    mode = WindowModeField()
    windowed_plates = fields.Str(validate=validate.OneOf(('both', 'one')))
    # Lifshitz integration
    method = MethodField()
    p_nodes = fields.Int(validate=validate.Range(min=16))
    rtol = fields.Float(validate=validate.Range(min=0, max=1, min_inclusive=False, max_inclusive=False))
    omega_cutoff = Frequency(validate=_POSITIVE)
    # Output
    format = OutputFormatField()
    output = fields.Str(allow_none=True)

    @validates_schema
    def _validate_command(self, data, **kwargs):
        command = data.get('command')
        if command not in COMMANDS:
            return

        missing = [key for key in _COMMAND_REQUIRED[command] if data.get(key) is None]
        model = data.get('model')
        if model is not None:
            allowed = _COMMAND_MODELS.get(command, ())
            if model not in allowed:
                raise ValidationError(f"model '{model}' is not available for {command}, use one of "
                                      f"{', '.join(allowed)}", 'model')
            missing += [key for key in _MODEL_REQUIRED.get(model, ()) if data.get(key) is None]
            if model == 'const-r':
                missing += _missing_reflection(data)
        if command == 'spectrum-const-r':
            missing += _missing_reflection(data)
        if missing:
            raise ValidationError(f"missing required parameter(s) {', '.join(missing)} for {command}")

        for lower, upper in _ORDERED:
            if data.get(lower) is not None and data.get(upper) is not None and not data[lower] < data[upper]:
                raise ValidationError(f'{lower} must be smaller than {upper}', lower)

        method = data.get('method')
        if method == Method.CLOSED_FORM and model not in ('const-r', 'ideal'):
            raise ValidationError('the closed form exists for constant reflection coefficients only, '
                                  'use method real or imag', 'method')

    @post_load
    def _make_config(self, data, **kwargs):
        return RunConfig(**data)


def _missing_reflection(data) -> List[str]:
    per_polarization = [data.get('r_te') is not None, data.get('r_tm') is not None]
    if data.get('r') is not None:
        if any(per_polarization):
            raise ValidationError('give either r or r_te and r_tm, not both', 'r')
        return []
    if all(per_polarization):
        return []
    return ['r (or both r_te and r_tm)']

