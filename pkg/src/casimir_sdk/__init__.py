__version__ = '0.1.0'

from casimir_sdk.args_parser import ArgsParser, parse_config
from casimir_sdk.classes import *
from casimir_sdk.dielectric import *
from casimir_sdk.exceptions import *
from casimir_sdk.lifshitz import *
from casimir_sdk.logger import set_logging_level
from casimir_sdk.polylog import eval_polylog, inverse_polylog4, polylog_array, polylogs
from casimir_sdk.reflection import *
from casimir_sdk.runner import execute
from casimir_sdk.spectrum import *
