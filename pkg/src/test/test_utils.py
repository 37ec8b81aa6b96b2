import tempfile
import unittest
from pathlib import Path

from casimir_sdk import utils
from casimir_sdk.constants import EV
from casimir_sdk.exceptions import ConfigError


class TestUtils(unittest.TestCase):

    ################################
    # Test unit-bearing quantities #
    ################################

    def test_parse_length(self):
        self.assertAlmostEqual(utils.parse_length('100nm'), 1e-7, delta=1e-22)
        self.assertAlmostEqual(utils.parse_length('1.5um'), 1.5e-6, delta=1e-21)
        self.assertEqual(utils.parse_length('2e-7m'), 2e-7)
        self.assertEqual(utils.parse_length(' 3 m '), 3.0)

    def test_parse_frequency(self):
        self.assertEqual(utils.parse_frequency('9eV'), 9 * EV)
        self.assertEqual(utils.parse_frequency('7.5e14rad_s'), 7.5e14)
        self.assertEqual(utils.parse_frequency('-1rad_s'), -1.0)

    def test_missing_unit(self):
        for value in ('100', 100.0):
            with self.assertRaises(ConfigError) as context:
                utils.parse_length(value)
            self.assertIn('100nm', context.exception.remedy)

    def test_unknown_unit(self):
        with self.assertRaises(ConfigError) as context:
            utils.parse_frequency('5THz')
        self.assertIn('eV', context.exception.remedy)
        with self.assertRaises(ConfigError):
            utils.parse_length('abc nm')

    def test_format_round_trip(self):
        for value in (1e-7, 3.3e-9, 0.1 + 0.2):
            self.assertEqual(utils.parse_length(utils.format_length(value)), value)
        self.assertEqual(utils.parse_frequency(utils.format_frequency(9 * EV)), 9 * EV)

    ######################
    # Test config files #
    ######################

    def test_key_values(self):
        values = utils.parse_key_values(['# comment', '', 'omega-p = 9eV', 'delta=0,0.5 ', '  a = 100nm'])
        self.assertEqual(values, {'omega_p': '9eV', 'delta': '0,0.5', 'a': '100nm'})

    def test_duplicate_key(self):
        with self.assertRaises(ConfigError) as context:
            utils.parse_key_values(['a = 1nm', 'a = 2nm'], source='run.cfg')
        self.assertIn('run.cfg:2', str(context.exception))

    def test_invalid_line(self):
        for line in ('just text', '= 5', '1a = 5'):
            with self.assertRaises(ConfigError):
                utils.parse_key_values([line])

    def test_read_output_header(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'out.csv'
            path.write_text('# casimir-sdk 0.1.0\n# command = pressure\n# a = 1e-07m\n# model = ideal\n'
                            'method,value_pa\nclosed_form,-13.0\n')
            self.assertEqual(utils.read_key_value_file(path), {'command': 'pressure', 'a': '1e-07m', 'model': 'ideal'})

    def test_read_config_file(self):
        values = utils.read_key_value_file(Path(__file__).parent / 'data' / 'window_diff.cfg')
        self.assertEqual(values['command'], 'window-diff')
        self.assertEqual(values['omega_p'], '9eV')
        self.assertEqual(len(values), 10)

    def test_config_file_starting_with_comment(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'run.cfg'
            for first in ('# casimir-sdk settings', '# casimir-sdk', '# casimir-sdk 0.1.0 copied by hand', '#'):
                path.write_text(f'{first}\ncommand = pressure\n# separation\na = 100nm\n')
                self.assertEqual(utils.read_key_value_file(path), {'command': 'pressure', 'a': '100nm'}, msg=first)

    ###########################
    # Test dictionary merging #
    ###########################

    def test_merge(self):
        destination = {'a': '100nm', 'nested': {'x': 1, 'y': 2}}
        result = utils.merge({'a': '200nm', 'nested': {'y': 3}, 'b': 1}, destination)
        self.assertIs(result, destination)
        self.assertEqual(result, {'a': '200nm', 'nested': {'x': 1, 'y': 3}, 'b': 1})
