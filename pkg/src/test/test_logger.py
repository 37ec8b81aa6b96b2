import logging
import unittest

import pytest

from casimir_sdk.args_parser import parse_config
from casimir_sdk.logger import LOGGER_NAME, set_logging_level


class TestLogger(unittest.TestCase):

    def setUp(self):
        self.package = logging.getLogger(LOGGER_NAME)
        self.previous = self.package.level
        self.root_level = logging.getLogger().level

    def tearDown(self):
        self.package.setLevel(self.previous)

    def test_level_names(self):
        self.assertEqual(set_logging_level('debug'), logging.DEBUG)
        self.assertEqual(self.package.level, logging.DEBUG)
        self.assertEqual(set_logging_level(' Error '), logging.ERROR)
        self.assertEqual(set_logging_level(logging.INFO), logging.INFO)
        self.assertTrue(logging.getLogger('casimir_sdk.lifshitz').isEnabledFor(logging.INFO))

    def test_root_logger_untouched(self):
        set_logging_level('DEBUG')
        self.assertEqual(logging.getLogger().level, self.root_level)

    def test_unknown_level(self):
        with self.assertRaises(ValueError):
            set_logging_level('LOUD')
        with self.assertRaises(ValueError):
            set_logging_level('NOTSET')

    def test_command_line_level(self):
        parse_config(['pressure', '--model', 'ideal', '--a', '100nm', '--log-level', 'error'])
        self.assertEqual(self.package.level, logging.ERROR)
        parse_config(['pressure', '--model', 'ideal', '--a', '100nm', '-v'])
        self.assertEqual(self.package.level, logging.INFO)


def test_messages_reach_root_handlers(caplog):
    previous = logging.getLogger(LOGGER_NAME).level
    try:
        set_logging_level('INFO')
        with caplog.at_level(logging.INFO, logger=LOGGER_NAME):
            logging.getLogger('casimir_sdk.spectrum').info('integrating')
        assert [record.name for record in caplog.records] == ['casimir_sdk.spectrum']
    finally:
        logging.getLogger(LOGGER_NAME).setLevel(previous)


def test_unknown_level_names_the_choices():
    with pytest.raises(ValueError, match='DEBUG, INFO, WARNING, ERROR'):
        set_logging_level('trace')
