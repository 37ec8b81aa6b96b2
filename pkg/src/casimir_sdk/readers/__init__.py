from .abstract_reader import AbstractReader
from .optical_table_reader import OpticalTable, OpticalTableReader, format_table_rows
