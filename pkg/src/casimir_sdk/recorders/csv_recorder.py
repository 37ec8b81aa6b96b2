import csv
from typing import Any, Dict

from .abstract_recorder import Recorder, format_value


class CsvRecorder(Recorder):
    """
    Comment header followed by a CSV table with one column per entry of ``columns``.
    """

    def _write_header(self):
        for line in self.header_lines():
            self._file.write(line + '\n')
        self._writer = csv.writer(self._file, lineterminator='\n')
        self._writer.writerow(self.columns)

    def write(self, row: Dict[str, Any]):
        self._check_row(row)
        self._writer.writerow([format_value(row[column]) for column in self.columns])
        self.rows += 1
