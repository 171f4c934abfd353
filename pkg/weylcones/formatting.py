"""
Output formatting
- exact rationals as "p/q" plus a fixed-precision decimal
- formula tables as text, csv or json
- reports and geometry as byte-stable json
"""
import csv
import io
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Dict, Iterable, List, Tuple

import ujson

from . import config

# ============================================================
# Numbers
# ============================================================


def rational_text(x) -> str:
    """'p/q', or 'p' for integers"""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f'{x.numerator}/{x.denominator}'


def decimal_text(x, digits: int = None) -> str:
    """Decimal expansion rounded to a fixed number of significant digits"""
    digits = config.SIGNIFICANT_DIGITS if digits is None else digits
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    with localcontext() as ctx:
        ctx.prec = digits
        value = Decimal(x.numerator) / Decimal(x.denominator)
    return format(value, f'.{digits}g')


def _is_exact(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def _cell(value) -> Dict[str, str]:
    return {'exact': rational_text(value), 'decimal': decimal_text(value)}


# ============================================================
# Tables
# ============================================================

def table_rows(table: Dict[str, object]) -> List[Tuple[str, str, str]]:
    """(label, exact, decimal) in table order"""
    rows = []
    for label, value in table.items():
        if _is_exact(value):
            rows.append((label, rational_text(value), decimal_text(value)))
        else:
            rows.append((label, str(value), str(value)))
    return rows


def format_table_text(table: Dict[str, object]) -> str:
    """One 'label = exact' line per entry, the decimal appended for non-integers"""
    lines = []
    for label, exact, decimal in table_rows(table):
        lines.append(f'{label} = {exact}' if exact == decimal else f'{label} = {exact} ({decimal})')
    return '\n'.join(lines) + '\n'


def format_table_csv(table: Dict[str, object]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(['label', 'exact', 'decimal'])
    writer.writerows(table_rows(table))
    return buffer.getvalue()


def format_table_json(table: Dict[str, object], header: Dict[str, object] = None) -> str:
    payload = dict(header or {})
    payload['schema'] = config.SCHEMA_VERSION
    payload['values'] = {label: _cell(value) if _is_exact(value) else value for label, value in table.items()}
    return dump_json(payload)


def format_table(table: Dict[str, object], fmt: str, header: Dict[str, object] = None) -> str:
    if fmt == 'json':
        return format_table_json(table, header)
    if fmt == 'csv':
        return format_table_csv(table)
    return format_table_text(table)


# ============================================================
# JSON
# ============================================================

def _plain(value):
    """Recursively replace rationals by their exact/decimal pair"""
    if isinstance(value, Fraction):
        return _cell(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def dump_json(payload) -> str:
    """Sorted keys, fixed indent: identical input gives identical bytes"""
    return ujson.dumps(_plain(payload), sort_keys=True, indent=2, ensure_ascii=False) + '\n'


def format_report(report) -> str:
    """Report model as versioned json"""
    data = {
        'schema': report.schema_version,
        'spec': report.spec.model_dump(mode='json'),
        'estimate': dict(report.estimate),
        'passed': report.passed,
        'provenance': dict(report.provenance),
    }
    return dump_json(data)


def format_report_text(report) -> str:
    est = report.estimate
    spec = report.spec
    parts = [f'quantity = {spec.quantity.value}', f'family = {spec.family.value}', f'n = {spec.n}', f'd = {spec.d}']
    if spec.k is not None:
        parts.append(f'k = {spec.k}')
    if spec.j is not None:
        parts.append(f'j = {spec.j}')
    lines = [', '.join(parts), f'mean = {est.mean:.6g} +- {est.stderr:.3g} ({est.trials} trials)']
    if est.target is not None:
        lines.append(f'target = {rational_text(est.target)} ({decimal_text(est.target)})')
    if est.z_score is not None:
        lines.append(f'z = {est.z_score:.3f}')
    lines.append('PASS' if report.passed else 'FAIL')
    return '\n'.join(lines) + '\n'


def format_report_csv(reports: Iterable) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(['quantity', 'family', 'n', 'd', 'k', 'j', 'mean', 'stderr', 'trials', 'target', 'z', 'passed'])
    for r in reports:
        est, spec = r.estimate, r.spec
        writer.writerow([
            spec.quantity.value, spec.family.value, spec.n, spec.d,
            '' if spec.k is None else spec.k, '' if spec.j is None else spec.j,
            repr(est.mean), repr(est.stderr), est.trials,
            '' if est.target is None else rational_text(est.target),
            '' if est.z_score is None else repr(est.z_score),
            int(r.passed),
        ])
    return buffer.getvalue()
