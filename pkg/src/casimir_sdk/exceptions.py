from typing import Optional

__all__ = [
    'CasimirError',
    'PolylogDomainError',
    'PolylogDivergenceError',
    'RangeError',
    'ModelDomainError',
    'UnsupportedModelError',
    'SingularInterfaceError',
    'ResonanceError',
    'AccuracyError',
    'TableParseError',
    'TableValidationError',
    'ConfigError',
]

EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_NUMERICAL = 4
EXIT_IO = 5


class CasimirError(Exception):
    """
    Base class of every error raised by casimir_sdk. The CLI maps ``exit_code`` to the process exit status.
    """
    exit_code = EXIT_NUMERICAL


class PolylogDomainError(CasimirError, ValueError):
    """Argument outside the closed unit disc, or polylog order outside 1..4."""


class PolylogDivergenceError(CasimirError, ArithmeticError):
    """Li_1(z) evaluated at its logarithmic singularity z = 1."""


class RangeError(CasimirError, ValueError):
    """
    Value outside the range an inverse or an interpolation is defined on. Raised e.g. when a computed pressure
    exceeds the perfect-mirror bound.
    """


class ModelDomainError(CasimirError, ValueError):
    exit_code = EXIT_VALIDATION


class UnsupportedModelError(CasimirError, TypeError):
    exit_code = EXIT_VALIDATION


class SingularInterfaceError(CasimirError, ArithmeticError):
    pass


class ResonanceError(CasimirError, ArithmeticError):
    """Lifshitz denominator 1 - r^2 exp(2ipwa/c) vanished at a quadrature node."""


class AccuracyError(CasimirError, ArithmeticError):
    """
    Quadrature did not reach the requested tolerance. The best available estimate is kept on the exception.
    """

    def __init__(self, message: str, estimate: float = float('nan'), error: float = float('nan')):
        super().__init__(f'{message} (estimate {estimate:.6e}, error {error:.3e})')
        self.estimate = estimate
        self.error = error


class TableParseError(CasimirError, ValueError):
    exit_code = EXIT_VALIDATION

    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f'line {line_number}: {message}'
        super().__init__(message)
        self.line_number = line_number


class TableValidationError(CasimirError, ValueError):
    exit_code = EXIT_VALIDATION

    def __init__(self, message: str, row: Optional[int] = None):
        if row is not None:
            message = f'row {row}: {message}'
        super().__init__(message)
        self.row = row


class ConfigError(CasimirError, ValueError):
    """
    Invalid command line or config file. ``remedy`` is a one-line hint printed by the CLI.
    """
    exit_code = EXIT_VALIDATION

    def __init__(self, message: str, remedy: str = '', exit_code: Optional[int] = None):
        super().__init__(message)
        self.remedy = remedy
        if exit_code is not None:
            self.exit_code = exit_code
