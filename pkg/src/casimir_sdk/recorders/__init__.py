from .abstract_recorder import Recorder, format_value
from .csv_recorder import CsvRecorder
from .jsonl_recorder import JsonLinesRecorder
