import logging
import re
from pathlib import Path
from typing import Dict, List, Union

from casimir_sdk.constants import EV
from casimir_sdk.exceptions import ConfigError

__all__ = [
    'LENGTH_UNITS',
    'FREQUENCY_UNITS',
    'parse_length',
    'parse_frequency',
    'format_length',
    'format_frequency',
    'parse_key_values',
    'read_key_value_file',
    'merge',
]

logger = logging.getLogger(__name__)

LENGTH_UNITS = {'nm': 1e-9, 'um': 1e-6, 'm': 1.0}
FREQUENCY_UNITS = {'eV': EV, 'rad_s': 1.0}

_QUANTITY = re.compile(r'^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*([A-Za-z_]*)\s*$')
_KEY = re.compile(r'^[a-z][a-z0-9_]*$')
# First line of every output file, see Recorder.header_lines
_OUTPUT_HEADER = re.compile(r'^# casimir-sdk \d+\.\d+\S*$')


def _parse_quantity(value: Union[str, float], units: Dict[str, float], example: str) -> float:
    if not isinstance(value, str):
        raise ConfigError(f'{value!r} has no unit', remedy=f'append a unit, e.g. {example}')
    match = _QUANTITY.match(value)
    if match is None:
        raise ConfigError(f"'{value}' is not a number with a unit", remedy=f'write it like {example}')
    number, unit = match.groups()
    if not unit:
        raise ConfigError(f"'{value}' has no unit", remedy=f'append a unit, e.g. {example}')
    if unit not in units:
        raise ConfigError(f"Unknown unit '{unit}' in '{value}'",
                          remedy=f"use one of {', '.join(units)}, e.g. {example}")
    return float(number) * units[unit]


def parse_length(value: Union[str, float]) -> float:
    """
    Length in metres from a string with one of the suffixes nm, um or m, e.g. '100nm' -> 1e-07.

    Raises:
        ConfigError: missing or unknown unit.
    """
    return _parse_quantity(value, LENGTH_UNITS, '100nm')


def parse_frequency(value: Union[str, float]) -> float:
    """
    Angular frequency in rad/s from a string with the suffix eV or rad_s, e.g. '9eV' or '7.5e14rad_s'.
    """
    return _parse_quantity(value, FREQUENCY_UNITS, '9eV')


def format_length(value: float) -> str:
    """Exact string form accepted by parse_length."""
    return f'{float(value)!r}m'


def format_frequency(value: float) -> str:
    return f'{float(value)!r}rad_s'


def parse_key_values(lines: List[str], source: str = '<config>') -> Dict[str, str]:
    """
    Parse ``key = value`` lines. Blank lines and lines starting with '#' are skipped, keys may be written with '-'.

    Raises:
        ConfigError: a line without '=', an invalid key or a key given twice.
    """
    values = {}
    for number, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        key, sep, value = line.partition('=')
        key = key.strip().replace('-', '_')
        if not sep or not _KEY.match(key):
            raise ConfigError(f'{source}:{number}: expected "key = value", got "{line}"',
                              remedy='write one "key = value" pair per line, comments start with #')
        if key in values:
            raise ConfigError(f"{source}:{number}: '{key}' is set twice", remedy='remove one of the lines')
        values[key] = value.strip()
    return values


def read_key_value_file(path: Union[str, Path]) -> Dict[str, str]:
    """
    Read a config file. Output files written by the CLI are accepted as well: when the first line is exactly
    ``# casimir-sdk <version>``, the ``# key = value`` comment block below it is the parameter set of the run that
    produced them. In any other file comment lines are skipped.
    """
    path = Path(path)
    with path.open('r', encoding='utf-8') as f:
        lines = f.read().splitlines()

    if lines and _OUTPUT_HEADER.match(lines[0]):
        header = []
        for line in lines[1:]:
            if not line.startswith('#'):
                break
            header.append(line[1:])
        logger.debug(f'{path}: reading the parameter header of an output file ({len(header)} lines)')
        lines = header
    return parse_key_values(lines, source=str(path))


def merge(source: dict, destination: dict) -> dict:
    """
    Merge ``source`` into ``destination`` (nested dictionaries are merged key by key, everything else is replaced)
    and return ``destination``.

    .. code-block:: python

        merge({'a': '200nm'}, {'a': '100nm', 'model': 'drude'})
        # {'a': '200nm', 'model': 'drude'}
    """
    for key, value in source.items():
        if isinstance(value, dict):
            node = destination.setdefault(key, {})
            merge(value, node)
        else:
            destination[key] = value
    return destination
