import json
import math
from enum import Enum
from typing import Any, Dict

from .abstract_recorder import Recorder


def _json_value(value: Any):
    if isinstance(value, Enum):
        return str(value)
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


class JsonLinesRecorder(Recorder):
    """
    Same comment header as the CSV output, then one JSON object per row with keys in column order.
    """

    def _write_header(self):
        for line in self.header_lines():
            self._file.write(line + '\n')

    def write(self, row: Dict[str, Any]):
        self._check_row(row)
        record = {column: _json_value(row[column]) for column in self.columns}
        self._file.write(json.dumps(record) + '\n')
        self.rows += 1
