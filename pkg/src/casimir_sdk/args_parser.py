import argparse
import logging
import re
from typing import Any, Dict, List, Optional, Sequence, Tuple

from marshmallow import ValidationError

from casimir_sdk.classes.enum import Method, OutputFormat, WindowMode
from casimir_sdk.classes.run_config import COMMANDS, MODELS, RunConfig, RunConfigSchema
from casimir_sdk.exceptions import EXIT_USAGE, EXIT_VALIDATION, ConfigError
from casimir_sdk.logger import set_logging_level
from casimir_sdk.utils import merge, read_key_value_file

__all__ = ['ArgsParser', 'parse_config', 'SEED_DEFAULTS', 'DEFAULTS', 'MODEL_DEFAULTS']

logger = logging.getLogger(__name__)

# Gold plates 100 nm apart and the hydrogen-switchable mirror window
SEED_DEFAULTS = {
    'model': 'drude',
    'omega_p': '9eV',
    'nu': '0.035eV',
    'a': '100nm',
    'omega1': '7.5e14rad_s',
    'omega2': '9.4e15rad_s',
    'delta': '1',
    'mode': 'sharp',
}

DEFAULTS = {
    'xi_min': '0',
    'xi_points': '501',
    'r_min': '0',
    'r_max': '1',
    'r_points': '101',
    'a_min': '10nm',
    'a_max': '1um',
    'a_points': '9',
    'omega_min': '1e13rad_s',
    'omega_max': '3e16rad_s',
    'points': '201',
    'grid': 'linear',
    's': '10',
    'mode': 'sharp',
    'method': 'imag',
    'windowed_plates': 'both',
    'p_nodes': '16',
    'rtol': '1e-6',
    'format': 'csv',
}

# Gold: plasma frequency and relaxation rate used whenever a Drude or plasma model is chosen without them
MODEL_DEFAULTS = {
    'drude': {'omega_p': '9eV', 'nu': '0.035eV'},
    'plasma': {'omega_p': '9eV'},
}

# The window commands run on the gold / switchable-mirror set unless told otherwise
_WINDOW_COMMANDS = ('window-diff', 'window-shape')

# Material parameters only filled in for the models that use them
_MODEL_KEYS = {'omega_p': ('drude', 'plasma'), 'nu': ('drude',), 'eps': ('eps',), 'table': ('table',)}

# Options every command accepts, they do not end up in RunConfig except format and output
_CONTROL_KEYS = ('config', 'seed_defaults', 'log_level', 'verbose')

_NEGATIVE_VALUE = re.compile(r'^-\.?\d')


def _checkRange(minVal, maxVal=None):
    def checkFn(value):
        try:
            ivalue = int(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f'{value} is not an integer')
        if minVal <= ivalue and (maxVal is None or ivalue <= maxVal):
            return ivalue
        bound = f'>= {minVal}' if maxVal is None else f'in range {minVal}..{maxVal}'
        raise argparse.ArgumentTypeError(f'{value} is an invalid int value, must be {bound}')

    return checkFn


def _commaSeparated(cast=float):
    def _fun(option: str):
        try:
            return [cast(item) for item in option.split(',') if item.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f'{option} is not a comma separated list of numbers')

    return _fun


def _checkEnum(enum):
    def _fun(value: str):
        try:
            return enum.parse(value)
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e))

    return _fun


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as ConfigError instead of exiting the interpreter."""

    def error(self, message):
        raise ConfigError(message, remedy=f"run '{self.prog} --help' for the available options",
                          exit_code=EXIT_USAGE)


def _attach_negative_values(argv: Sequence[str]) -> List[str]:
    """
    '--a -5nm' -> '--a=-5nm', so negative quantities reach validation instead of being taken for options.
    """
    argv = list(argv)
    joined = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if (token.startswith('--') and '=' not in token and i + 1 < len(argv)
                and _NEGATIVE_VALUE.match(argv[i + 1])):
            joined.append(f'{token}={argv[i + 1]}')
            i += 2
            continue
        joined.append(token)
        i += 1
    return joined


class ArgsParser:
    """
    Command line of the ``casimir_sdk`` console script. Every option is SUPPRESSed by default, so the parsed
    dictionary holds exactly the options given on the command line.
    """

    @staticmethod
    def _common() -> argparse.ArgumentParser:
        parser = _ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
        parser.add_argument('--config', type=str,
                            help='Read parameters from a "key = value" file (or from the header of an output file)')
        parser.add_argument('--seed-defaults', action='store_true',
                            help='Fill unset parameters with gold (Drude 9 eV, 35 meV) at 100 nm and the '
                                 '7.5e14-9.4e15 rad/s window')
        parser.add_argument('--log-level', type=str.upper, choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                            help='Logging level. Default: WARNING')
        parser.add_argument('-v', '--verbose', action='store_true', help='Shortcut for --log-level INFO')
        parser.add_argument('-o', '--output', type=str, help='Output file. Default: stdout')
        parser.add_argument('--format', type=_checkEnum(OutputFormat), help='csv or jsonl. Default: csv')
        return parser

    @staticmethod
    def _add_material(parser: argparse.ArgumentParser, models: Sequence[str]):
        parser.add_argument('--model', type=str, choices=list(models), help='Plate material')
        if 'drude' in models or 'plasma' in models:
            parser.add_argument('--omega-p', type=str, help='Plasma frequency, e.g. 9eV')
        if 'drude' in models:
            parser.add_argument('--nu', type=str, help='Drude relaxation frequency, e.g. 0.035eV')
        if 'eps' in models:
            parser.add_argument('--eps', type=float, help='Constant permittivity of model eps')
        if 'table' in models:
            parser.add_argument('--table', type=str, help='Optical table in eV (columns: energy, eps\', eps\'\')')
        if 'const-r' in models:
            ArgsParser._add_reflection(parser)

    @staticmethod
    def _add_reflection(parser: argparse.ArgumentParser):
        parser.add_argument('--r', type=str, help='Reflection coefficient of both polarizations, e.g. 0.9 or 0.8+0.1j')
        parser.add_argument('--r-te', type=str, help='TE reflection coefficient')
        parser.add_argument('--r-tm', type=str, help='TM reflection coefficient')

    @staticmethod
    def _add_frequency_grid(parser: argparse.ArgumentParser):
        parser.add_argument('--omega-min', type=str, help='Lowest frequency, e.g. 1e13rad_s')
        parser.add_argument('--omega-max', type=str, help='Highest frequency, e.g. 3e16rad_s')
        parser.add_argument('--points', type=_checkRange(2), help='Number of frequencies')
        parser.add_argument('--grid', type=str, choices=['linear', 'log'], help='Frequency spacing')

    @staticmethod
    def _add_window(parser: argparse.ArgumentParser):
        parser.add_argument('--omega1', type=str, help='Lower window edge, e.g. 7.5e14rad_s')
        parser.add_argument('--omega2', type=str, help='Upper window edge, e.g. 9.4e15rad_s')
        parser.add_argument('--delta', type=_commaSeparated(), help='Relative reduction(s) of chi, e.g. 0.5,1')
        parser.add_argument('--s', type=_commaSeparated(), help='Edge sharpness value(s) in units of c/a, e.g. 5,10')
        parser.add_argument('--mode', type=_checkEnum(WindowMode), help='sharp or smooth')

    @staticmethod
    def _add_quadrature(parser: argparse.ArgumentParser, method: bool = True):
        if method:
            parser.add_argument('--method', type=_checkEnum(Method), help='real, imag or closed. Default: imag')
        parser.add_argument('--p-nodes', type=_checkRange(16), help='Gauss order of the p-panels')
        parser.add_argument('--rtol', type=float, help='Relative tolerance of the Lifshitz integrals')
        parser.add_argument('--omega-cutoff', type=str, help='Upper limit of real-frequency integrals, e.g. 1e17rad_s')

    @staticmethod
    def build() -> Tuple[argparse.ArgumentParser, Dict[str, Tuple[str, ...]]]:
        """
        Returns:
            The parser and, per command, the parameter keys it accepts.
        """
        common = ArgsParser._common()
        parser = _ArgumentParser(prog='casimir_sdk', description='Casimir pressure between parallel plates.',
                                 parents=[common], argument_default=argparse.SUPPRESS)
        subparsers = parser.add_subparsers(dest='command', parser_class=_ArgumentParser)

        def _command(name: str, help: str) -> argparse.ArgumentParser:
            return subparsers.add_parser(name, help=help, parents=[common], argument_default=argparse.SUPPRESS)

        sub = _command('spectrum-const-r', 'Pressure spectrum for constant reflection coefficients')
        ArgsParser._add_reflection(sub)
        sub.add_argument('--a', type=str, help='Plate separation, adds the omega column, e.g. 100nm')
        sub.add_argument('--xi-min', type=float, help='Lowest xi = 2 w a / c. Default: 0')
        sub.add_argument('--xi-max', type=float, help='Highest xi')
        sub.add_argument('--xi-points', type=_checkRange(2), help='Number of xi values')

        sub = _command('pressure-const-r-sweep', 'Closed-form pressure and free energy as a function of real r')
        sub.add_argument('--a', type=str, help='Plate separation, e.g. 100nm')
        sub.add_argument('--r-min', type=float, help='Smallest r. Default: 0')
        sub.add_argument('--r-max', type=float, help='Largest r. Default: 1')
        sub.add_argument('--r-points', type=_checkRange(2), help='Number of r values')

        sub = _command('effective-r', 'Constant reflection coefficients reproducing the pressure of a material')
        ArgsParser._add_material(sub, ('drude', 'plasma', 'table', 'eps'))
        sub.add_argument('--a-min', type=str, help='Smallest separation, e.g. 10nm')
        sub.add_argument('--a-max', type=str, help='Largest separation, e.g. 1um')
        sub.add_argument('--a-points', type=_checkRange(1), help='Number of separations (log spaced)')
        ArgsParser._add_quadrature(sub, method=False)

        sub = _command('spectrum-material', 'Pressure spectrum of dielectric plates at real frequencies')
        ArgsParser._add_material(sub, ('drude', 'plasma', 'table', 'eps', 'const-r'))
        sub.add_argument('--a', type=str, help='Plate separation, e.g. 100nm')
        ArgsParser._add_frequency_grid(sub)
        ArgsParser._add_quadrature(sub, method=False)

        sub = _command('window-shape', 'Window factor phi(w)')
        sub.add_argument('--a', type=str, help='Plate separation, sets the unit of s, e.g. 100nm')
        ArgsParser._add_window(sub)
        ArgsParser._add_frequency_grid(sub)

        sub = _command('window-diff', 'Pressure change caused by a transparency window')
        ArgsParser._add_material(sub, ('drude', 'plasma', 'table'))
        sub.add_argument('--a', type=str, help='Plate separation, e.g. 100nm')
        ArgsParser._add_window(sub)
        sub.add_argument('--windowed-plates', type=str, choices=['both', 'one'], help='Plates with the window')
        ArgsParser._add_quadrature(sub)

        sub = _command('pressure', 'Casimir pressure of one configuration')
        ArgsParser._add_material(sub, MODELS)
        sub.add_argument('--a', type=str, help='Plate separation, e.g. 100nm')
        ArgsParser._add_quadrature(sub)

        common_keys = {action.dest for action in common._actions}
        command_keys = {}
        for name, subparser in subparsers.choices.items():
            keys = [action.dest for action in subparser._actions if action.dest not in common_keys | {'help'}]
            command_keys[name] = tuple(keys) + ('format', 'output')
        return parser, command_keys

    @staticmethod
    def parseArgs(argv: Sequence[str]) -> Dict[str, Any]:
        """
        Parse ``argv`` into a dictionary with the given options only (dashes in option names become underscores).

        Raises:
            ConfigError: unknown option, bad value or no arguments at all (exit code 2).
        """
        parser, _ = ArgsParser.build()
        if not argv:
            raise ConfigError('no command given', remedy=parser.format_usage().strip(), exit_code=EXIT_USAGE)
        args = vars(parser.parse_args(_attach_negative_values(argv)))
        return {key: value for key, value in args.items() if value is not None}

    @staticmethod
    def usage() -> str:
        return ArgsParser.build()[0].format_help()


def _flatten_messages(messages, prefix: str = '') -> List[str]:
    if isinstance(messages, dict):
        lines = []
        for key, value in messages.items():
            name = '' if key == '_schema' else f'{prefix}{key}'
            lines += _flatten_messages(value, f'{name}: ' if name else '')
        return lines
    if isinstance(messages, (list, tuple)):
        return [line for message in messages for line in _flatten_messages(message, prefix)]
    return [f'{prefix}{messages}']


def _fill_defaults(values: Dict[str, Any], keys: Sequence[str], seed: bool):
    model = values.get('model', SEED_DEFAULTS['model'] if seed and 'model' in keys else None)
    material = MODEL_DEFAULTS.get(model, {})
    for key in keys:
        if key in values:
            continue
        if key in _MODEL_KEYS and model not in _MODEL_KEYS[key]:
            continue
        if seed and key in SEED_DEFAULTS:
            values[key] = SEED_DEFAULTS[key]
        elif key in material:
            values[key] = material[key]
        elif key in DEFAULTS:
            values[key] = DEFAULTS[key]


def parse_config(argv: Sequence[str], file: Optional[str] = None) -> RunConfig:
    """
    Build the RunConfig of one run from command-line arguments and an optional key-value config file.

    Values from ``file`` and from ``--config`` are read first, flags override them. With ``--seed-defaults`` (and
    always for the window commands) unset gold/window parameters are filled in. A Drude or plasma model without
    omega_p / nu gets the gold values of MODEL_DEFAULTS, remaining gaps come from DEFAULTS. Applies ``--log-level`` /
    ``-v``.

    Raises:
        ConfigError: usage errors (exit code 2) or invalid values (exit code 3), always with a one-line remedy.
    """
    flags = ArgsParser.parseArgs(argv)
    if 'log_level' in flags:
        set_logging_level(flags['log_level'])
    elif flags.get('verbose'):
        set_logging_level('INFO')

    file_values = {}
    for path in (file, flags.get('config')):
        if path is not None:
            merge(read_key_value_file(path), file_values)

    command = flags.pop('command', None) or file_values.pop('command', None)
    file_values.pop('command', None)
    if command is None:
        raise ConfigError('no command given', remedy=f"choose one of {', '.join(COMMANDS)}", exit_code=EXIT_USAGE)
    if command not in COMMANDS:
        raise ConfigError(f"unknown command '{command}'", remedy=f"choose one of {', '.join(COMMANDS)}",
                          exit_code=EXIT_USAGE)

    _, command_keys = ArgsParser.build()
    keys = command_keys[command]
    schema_keys = set(RunConfigSchema().fields)
    for key in file_values:
        if key in schema_keys and key not in keys:
            raise ConfigError(f"'{key}' does not apply to {command}",
                              remedy=f"remove it, '{command}' accepts {', '.join(sorted(keys))}", exit_code=EXIT_USAGE)

    values = {}
    merge(file_values, values)
    merge({key: value for key, value in flags.items() if key not in _CONTROL_KEYS}, values)
    _fill_defaults(values, keys, seed=flags.get('seed_defaults', False) or command in _WINDOW_COMMANDS)
    values['command'] = command

    try:
        config = RunConfigSchema().load(values)
    except ValidationError as e:
        messages = e.messages if isinstance(e.messages, dict) else {'_schema': e.messages}
        unknown = [key for key, value in messages.items() if value == ['Unknown field.']]
        if unknown:
            raise ConfigError(f"unknown key(s) {', '.join(sorted(unknown))}",
                              remedy=f"check the spelling, '{command}' accepts {', '.join(sorted(keys))}",
                              exit_code=EXIT_USAGE) from None
        lines = _flatten_messages(messages)
        remedy = ('pass the missing values as flags or in --config, or use --seed-defaults'
                  if any('missing required' in line for line in lines) else f"see 'casimir_sdk {command} --help'")
        raise ConfigError('; '.join(lines), remedy=remedy, exit_code=EXIT_VALIDATION) from None

    logger.info(f'{command}: {config.parameters()}')
    return config
