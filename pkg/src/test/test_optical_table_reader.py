import io
import unittest
from pathlib import Path

import numpy as np
import pytest

from casimir_sdk.constants import EV
from casimir_sdk.dielectric import GOLD_DRUDE, load_optical_table, synthesize_optical_table
from casimir_sdk.exceptions import TableParseError, TableValidationError
from casimir_sdk.readers import OpticalTableReader, format_table_rows

DATA = Path(__file__).parent / 'data'

TABLE = b"""# units: eV
# omega_eV eps_re eps_im
0.10  -8099.1  2319.4

0.12, -5631.0, 1342.7
"""


def _read(text: bytes):
    with OpticalTableReader(text) as reader:
        return reader.read()


class TestOpticalTableReader(unittest.TestCase):

    def test_read(self):
        table = _read(TABLE)
        np.testing.assert_array_equal(table.omega_ev, [0.10, 0.12])
        np.testing.assert_array_equal(table.eps_re, [-8099.1, -5631.0])
        np.testing.assert_array_equal(table.eps_im, [2319.4, 1342.7])

    def test_read_stream(self):
        table = _read(io.BytesIO(TABLE).read())
        self.assertEqual(len(table.omega_ev), 2)
        with OpticalTableReader(io.BytesIO(TABLE)) as reader:
            self.assertEqual(len(reader.read().eps_im), 2)

    def test_read_file(self):
        with OpticalTableReader(DATA / 'gold_drude_ev.txt') as reader:
            table = reader.read()
        self.assertEqual(len(table.omega_ev), 10)
        self.assertEqual(table.omega_ev[-1], 50.0)

    ##########
    # Errors #
    ##########

    def test_missing_header(self):
        with self.assertRaises(TableParseError) as context:
            _read(b'# omega eps_re eps_im\n')
        self.assertIn('units', str(context.exception))

    def test_data_before_header(self):
        with self.assertRaises(TableParseError) as context:
            _read(b'0.1 -8099.1 2319.4\n# units: eV\n')
        self.assertEqual(context.exception.line_number, 1)

    def test_wrong_unit(self):
        with self.assertRaises(TableParseError) as context:
            _read(b'# units: nm\n')
        self.assertEqual(context.exception.line_number, 1)

    def test_column_count(self):
        with self.assertRaises(TableParseError) as context:
            _read(b'# units: eV\n0.1 -8099.1 2319.4\n0.2 -2000.0\n')
        self.assertEqual(context.exception.line_number, 3)

    def test_not_a_number(self):
        with self.assertRaises(TableParseError) as context:
            _read(b'# units: eV\n\n0.1 -8099.1 abc\n')
        self.assertEqual(context.exception.line_number, 3)

    def test_non_ascii(self):
        with self.assertRaises(TableParseError) as context:
            _read('# units: eV\n# ω in eV\n'.encode('utf-8'))
        self.assertEqual(context.exception.line_number, 2)

    def test_empty(self):
        for text in (b'', b'# units: eV\n\n'):
            with self.assertRaises(TableParseError):
                _read(text)


class TestLoadOpticalTable(unittest.TestCase):

    def test_units(self):
        model = load_optical_table(DATA / 'gold_drude_ev.txt')
        self.assertEqual(len(model), 10)
        self.assertAlmostEqual(model.omega[0], 0.05 * EV, delta=1e-12 * EV)

    def test_sample_file_is_close_to_gold(self):
        model = load_optical_table(str(DATA / 'gold_drude_ev.txt'))
        np.testing.assert_allclose(model.real_axis(model.omega), GOLD_DRUDE.real_axis(model.omega), rtol=1e-3)

    def test_decreasing_rows(self):
        omega = np.geomspace(0.05, 50.0, 10)
        eps = GOLD_DRUDE.real_axis(omega * EV)
        omega[[5, 6]] = omega[[6, 5]]
        with self.assertRaises(TableValidationError) as context:
            load_optical_table(format_table_rows(omega, eps.real, eps.imag).encode())
        self.assertEqual(context.exception.row, 7)

    def test_too_few_rows(self):
        with self.assertRaises(TableValidationError):
            load_optical_table(TABLE)

    def test_synthesized_header(self):
        text = synthesize_optical_table(GOLD_DRUDE, np.geomspace(1e13, 1e17, 12))
        lines = text.splitlines()
        self.assertEqual(lines[0], '# units: eV')
        self.assertIn('DrudeModel', lines[1])
        self.assertEqual(len(lines), 3 + 12)


@pytest.mark.parametrize('separator', [' ', '\t', ',', ' , '])
def test_separators(separator):
    text = '# units: eV\n' + separator.join(['0.5', '-321.4', '22.57']) + '\n'
    table = _read(text.encode('ascii'))
    assert table.eps_re[0] == pytest.approx(-321.4)
