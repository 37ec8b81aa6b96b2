import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

DATA = Path(__file__).parent / 'data'


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: long-running acceptance test (minutes)')


@pytest.fixture
def data_dir() -> Path:
    return DATA
