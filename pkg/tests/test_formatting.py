from fractions import Fraction

import ujson

from weylcones.formatting import (
    decimal_text,
    dump_json,
    format_report,
    format_report_csv,
    format_report_text,
    format_table,
    rational_text,
)
from weylcones.models import Estimate, ExperimentSpec, Family, Quantity, Report


def _report(passed=True):
    spec = ExperimentSpec(quantity=Quantity.UJ, family=Family.A, n=3, d=2, j=1, trials=100, seed=7)
    estimate = Estimate.with_target(0.17, 0.01, 100, Fraction(1, 6))
    return Report(spec=spec, estimate=estimate, passed=passed, provenance={'revision': 'abc'})


def test_rational_text():
    assert rational_text(5) == '5'
    assert rational_text(Fraction(-3, 4)) == '-3/4'
    assert rational_text(Fraction(6, 3)) == '2'


def test_decimal_text_rounds_to_twelve_digits():
    assert decimal_text(Fraction(1, 3)) == '0.333333333333'
    assert decimal_text(Fraction(2, 3)) == '0.666666666667'
    assert decimal_text(Fraction(2, 3), digits=3) == '0.667'
    assert decimal_text(7) == '7'


def test_table_text():
    text = format_table({'cones': 24, 'E U_1': Fraction(1, 6)}, 'text')
    assert text == 'cones = 24\nE U_1 = 1/6 (0.166666666667)\n'


def test_table_csv():
    text = format_table({'cones': 24, 'E U_1': Fraction(1, 6)}, 'csv')
    assert text.splitlines() == ['label,exact,decimal', 'cones,24,24', 'E U_1,1/6,0.166666666667']


def test_table_json():
    payload = ujson.loads(format_table({'cones': 24}, 'json', {'family': 'A', 'n': 4, 'd': 3}))
    assert payload['schema'] == 1
    assert payload['family'] == 'A'
    assert payload['values']['cones'] == {'exact': '24', 'decimal': '24'}


def test_dump_json_is_byte_stable():
    a = dump_json({'b': Fraction(1, 2), 'a': [1, 2]})
    b = dump_json({'a': [1, 2], 'b': Fraction(1, 2)})
    assert a == b
    assert a.endswith('\n')
    assert ujson.loads(a)['b']['exact'] == '1/2'


def test_report_json():
    payload = ujson.loads(format_report(_report()))
    assert payload['schema'] == 1
    assert payload['passed'] is True
    assert payload['spec']['quantity'] == 'Uj'
    assert payload['estimate']['target']['exact'] == '1/6'
    assert payload['provenance'] == {'revision': 'abc'}


def test_report_text():
    text = format_report_text(_report(passed=False))
    assert 'quantity = Uj, family = A, n = 3, d = 2, j = 1' in text
    assert 'target = 1/6' in text
    assert text.rstrip().endswith('FAIL')


def test_report_csv():
    lines = format_report_csv([_report(), _report(passed=False)]).splitlines()
    assert lines[0].startswith('quantity,family,n,d,k,j,mean')
    assert lines[1].startswith('Uj,A,3,2,,1,')
    assert lines[1].endswith(',1') and lines[2].endswith(',0')
