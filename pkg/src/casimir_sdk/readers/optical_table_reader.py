import io
import logging
import os
import re
from pathlib import Path
from typing import BinaryIO, Iterable, List, NamedTuple, Optional, Tuple, Union

import numpy as np

from casimir_sdk.exceptions import TableParseError
from casimir_sdk.readers.abstract_reader import AbstractReader

logger = logging.getLogger(__name__)

_UNITS_HEADER = re.compile(r'^#\s*units\s*[:=]\s*(\S+)\s*$', re.IGNORECASE)
_SEPARATOR = re.compile(r'\s*,\s*|\s+')


class OpticalTable(NamedTuple):
    omega_ev: np.ndarray
    eps_re: np.ndarray
    eps_im: np.ndarray


class OpticalTableReader(AbstractReader):
    """
    Reads an optical table: 7-bit ASCII text, one sample per line,

        # units: eV
        # omega_eV  eps_re  eps_im
        0.10  -8099.1  2319.4
        0.12, -5631.0, 1342.7

    Lines starting with '#' are comments, the ``units`` comment is mandatory and must say eV. Columns are separated by
    whitespace or a comma. Validation of the values (ordering, passivity) is left to the model built from the table.
    """

    def __init__(self, source: Union[bytes, str, os.PathLike, BinaryIO]):
        self._owned: Optional[BinaryIO] = None
        if isinstance(source, (bytes, bytearray)):
            self._stream = io.BytesIO(bytes(source))
        elif isinstance(source, (str, os.PathLike)):
            self._owned = open(Path(source), 'rb')
            self._stream = self._owned
        else:
            self._stream = source

    def _lines(self) -> Iterable[Tuple[int, str]]:
        for line_number, raw in enumerate(self._stream, start=1):
            try:
                yield line_number, raw.decode('ascii').strip()
            except UnicodeDecodeError:
                raise TableParseError('non-ASCII content', line_number=line_number) from None

    def read(self) -> OpticalTable:
        units = None
        rows: List[List[float]] = []
        for line_number, line in self._lines():
            if not line:
                continue
            if line.startswith('#'):
                match = _UNITS_HEADER.match(line)
                if match:
                    units = match.group(1)
                    if units.lower() != 'ev':
                        raise TableParseError(f"unsupported frequency unit '{units}', expected eV", line_number)
                continue
            if units is None:
                raise TableParseError("data before the '# units: eV' header", line_number)

            fields = _SEPARATOR.split(line)
            if len(fields) != 3:
                raise TableParseError(f'expected 3 columns (omega_eV, eps_re, eps_im), got {len(fields)}', line_number)
            try:
                rows.append([float(value) for value in fields])
            except ValueError:
                raise TableParseError(f"cannot parse '{line}' as numbers", line_number) from None

        if units is None:
            raise TableParseError("missing '# units: eV' header")
        if not rows:
            raise TableParseError('table contains no data rows')

        logger.debug(f'Read optical table with {len(rows)} samples')
        data = np.array(rows, dtype=float)
        return OpticalTable(omega_ev=data[:, 0], eps_re=data[:, 1], eps_im=data[:, 2])

    def close(self):
        if self._owned is not None:
            self._owned.close()
            self._owned = None


def format_table_rows(omega_ev, eps_re, eps_im, header: Iterable[str] = ()) -> str:
    """
    Inverse of OpticalTableReader.read(): the table as text, with the units header first.
    """
    lines = ['# units: eV', *header, '# omega_eV eps_re eps_im']
    lines += [f'{w:.12e} {re_:.12e} {im_:.12e}' for w, re_, im_ in zip(omega_ev, eps_re, eps_im)]
    return '\n'.join(lines) + '\n'
