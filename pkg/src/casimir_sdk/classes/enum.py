from enum import IntEnum
from typing import Dict, Union


class _ParsableEnum(IntEnum):
    """
    IntEnum that can be parsed from its (case insensitive) name or from one of the aliases in ``_aliases``.
    """

    @classmethod
    def _aliases(cls) -> Dict[str, str]:
        return {}

    @classmethod
    def parse(cls, value: Union[str, 'IntEnum']):
        if isinstance(value, cls):
            return value

        key = str(value).strip().lower().replace('-', '_')
        key = cls._aliases().get(key, key)
        for member in cls:
            if member.name.lower() == key:
                return member

        choices = ', '.join(member.name.lower() for member in cls)
        raise ValueError(f"Unknown {cls.__name__} '{value}'! Options (case insensitive): {choices}")

    def __str__(self):
        return self.name.lower()


class Polarization(_ParsableEnum):
    """
    Field polarization. Each polarization has its own Fresnel coefficient.
    """
    TE = 0  # transverse electric
    TM = 1  # transverse magnetic


class Branch(_ParsableEnum):
    """
    Part of the Lifshitz integration contour a point p belongs to.
    """
    PROPAGATING = 0  # p real in (0, 1]
    EVANESCENT = 1  # p = iq, q > 0
    IMAG_AXIS = 2  # p real >= 1, used together with an imaginary frequency

    @classmethod
    def _aliases(cls) -> Dict[str, str]:
        return {'pw': 'propagating', 'ew': 'evanescent', 'imag': 'imag_axis'}


class WindowMode(_ParsableEnum):
    SHARP = 0  # unit step edges
    SMOOTH = 1  # arctan edges of sharpness s


class Method(_ParsableEnum):
    REAL_FREQUENCY = 0
    IMAG_FREQUENCY = 1
    CLOSED_FORM = 2

    @classmethod
    def _aliases(cls) -> Dict[str, str]:
        return {'real': 'real_frequency', 'imag': 'imag_frequency', 'closed': 'closed_form'}


class Extrapolation(_ParsableEnum):
    """
    How a tabulated permittivity is continued outside its frequency range.
    """
    NONE = 0  # queries outside the table raise RangeError
    DRUDE = 1  # Drude tail fitted to the two lowest samples
    POWER_LAW = 2  # eps' -> 1 as w^-2, eps'' ~ w^-3


class OutputFormat(_ParsableEnum):
    CSV = 0
    JSONL = 1

    @classmethod
    def _aliases(cls) -> Dict[str, str]:
        return {'json_lines': 'jsonl', 'json': 'jsonl'}
