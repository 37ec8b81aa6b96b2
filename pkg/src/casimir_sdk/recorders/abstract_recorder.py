import logging
import os
import sys
import tempfile
from abc import ABC, abstractmethod
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

__all__ = ['Recorder', 'format_value']

logger = logging.getLogger(__name__)


def format_value(value: Any) -> str:
    """
    Text form of one output value. Floats use a fixed 13 significant digits so reruns are byte-identical.
    """
    if value is None:
        return ''
    if isinstance(value, Enum):
        return str(value)
    if isinstance(value, float):
        return '%.12e' % value
    return str(value)


class Recorder(ABC):
    """
    Writes the rows of one command to a file (or to stdout when ``path`` is None).

    Rows go to a temporary sibling of ``path`` that replaces ``path`` on a successful ``close()``. ``abort()`` removes
    it, so a failed run never leaves a partial file behind. Used as a context manager, an exception aborts.
    """

    def __init__(self, path: Optional[Union[str, Path]], command: str, parameters: Dict[str, str],
                 columns: Sequence[str], version: str):
        self.path = Path(path) if path is not None else None
        self.command = command
        self.parameters = dict(parameters)
        self.columns = list(columns)
        self.version = version
        self.rows = 0
        self._tmp_path = None
        self._closed = False

        if self.path is None:
            self._file = sys.stdout
        else:
            handle = tempfile.NamedTemporaryFile('w', dir=self.path.parent or Path('.'), prefix=f'.{self.path.name}.',
                                                 suffix='.tmp', delete=False, encoding='utf-8', newline='')
            self._file = handle
            self._tmp_path = Path(handle.name)
        self._write_header()

    def header_lines(self) -> List[str]:
        """
        '# casimir-sdk <version>', '# command = ...' and one '# key = value' line per parameter, sorted by key.
        """
        lines = [f'# casimir-sdk {self.version}', f'# command = {self.command}']
        lines += [f'# {key} = {self.parameters[key]}' for key in sorted(self.parameters)]
        return lines

    @abstractmethod
    def _write_header(self):
        raise NotImplementedError()

    @abstractmethod
    def write(self, row: Dict[str, Any]):
        """
        Write one record. ``row`` has to provide every column, extra keys are an error.
        """
        raise NotImplementedError()

    def _check_row(self, row: Dict[str, Any]):
        if set(row) != set(self.columns):
            raise ValueError(f'Row keys {sorted(row)} do not match the columns {self.columns}')

    def close(self):
        if self._closed:
            return
        self._closed = True
        self._file.flush()
        if self._tmp_path is None:
            return
        self._file.close()
        os.replace(self._tmp_path, self.path)
        logger.info(f'Wrote {self.rows} row(s) to {self.path}')

    def abort(self):
        if self._closed:
            return
        self._closed = True
        if self._tmp_path is None:
            self._file.flush()
            return
        self._file.close()
        try:
            self._tmp_path.unlink()
        except FileNotFoundError:
            pass
        logger.debug(f'Removed partial output {self._tmp_path}')

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type is None:
            self.close()
        else:
            self.abort()
