#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT

import csv
import io
import json
import math

import pytest

from ncdim import xml_utils
from ncdim.charts import mobius_chart, sierpinski_polygon
from ncdim.ifs import *
from ncdim.report import *
from ncdim.svg import SVG
from ncdim.utils import DomainError


@pytest.fixture
def results():
    results = Results('zeta', 'unit', 3)
    results.within('close enough', 1.0005, 1.0, 1e-3)
    results.at_most('small', 2e-13, 1e-12)
    results.table('terms', ('level', 'term', 'converges'), [[0, 0.5, True], [1, math.inf, False]])
    results.data['series'] = {'ratio': 0.25 + 0.5j}
    return results


def _levels(root):
    return [len(g) for g in root if xml_utils.local_name(g) == 'g']


def test_checks(results):
    assert results.passed
    assert not results.failures
    assert not results.check('failing', 5, False, target=0)
    assert not results.passed
    assert [c['name'] for c in results.failures] == ['failing']
    assert not results.within('far', 2.0, 1.0, 0.5)


def test_tables_must_be_rectangular(results):
    with pytest.raises(AssertionError):
        results.table('broken', ('a', 'b'), [[1, 2], [3]])


def test_json_report(results):
    text = report_json(results)
    assert text.endswith('\n')
    report = json.loads(text)
    assert report['kind'] == 'zeta'
    assert report['seed'] == 3
    assert report['passed'] is True
    assert report['tables']['terms']['rows'][1] == [1, 'inf', False]
    assert report['data']['series']['ratio'] == [0.25, 0.5]
    assert report_json(results) == text


def test_csv_tables(results):
    rows = list(csv.reader(io.StringIO(table_csv(results.tables['terms']))))
    assert rows == [['level', 'term', 'converges'], ['0', '0.5', 'true'], ['1', 'inf', 'false']]


def test_csv_keeps_full_precision():
    text = table_csv({'columns': ['x', 'y'], 'rows': [[1.0 / 3.0, None], [[1, 2], True]]})
    assert text.splitlines()[1:] == [repr(1.0 / 3.0) + ',', '1 2,true']


def test_markdown_report(results):
    text = report_markdown(results)
    assert text.startswith('# unit')
    assert '**PASS**' in text
    assert '| close enough | 1.0005 | 1 | 0.001 | yes |' in text
    assert '## terms' in text
    assert '| level | term | converges |' in text

    results.check('failing', 1, False)
    assert '**FAIL**' in report_markdown(results)


def test_emit_report(results, tmp_path):
    written = emit_report(results, tmp_path / 'out')
    assert sorted(p.name for p in written) == ['report.json', 'report.md', 'terms.csv']
    assert json.loads((tmp_path / 'out' / 'report.json').read_text(encoding='utf-8'))['name'] == 'unit'

    written = emit_report(results, tmp_path / 'json-only', formats=['json'])
    assert [p.name for p in written] == ['report.json']


def test_svg_coordinates():
    svg = SVG(0j, 1 + 1j, width=100.0, margin=0.0)
    assert svg.point(0j) == ('0.000000', '100.000000')
    assert svg.point(1 + 1j) == ('100.000000', '0.000000')
    assert svg.length(0.5) == '50.000000'
    poly = svg.polygon([0j, 1 + 0j, 1j], class_='tri', stroke_width='2')
    assert poly.get('class') == 'tri'
    assert poly.get('stroke-width') == '2'
    assert str(svg).startswith('<svg')
    with pytest.raises(DomainError):
        SVG(0j, 1 + 0j)


def test_sierpinski_attractor_figure():
    figure = attractor_figure(sierpinski_ifs(), SIERPINSKI_VERTICES, 2)
    assert polygon_counts(figure) == [1, 3, 9]
    words = [p.get('data-word') for g in figure.root for p in g]
    assert words[:5] == ['∅', '1', '2', '3', '1.1']
    assert polygon_counts(attractor_figure(sierpinski_ifs(), SIERPINSKI_VERTICES, 0)) == [1]


def test_square_attractor_figure():
    figure = attractor_figure(square_ifs(), SQUARE_VERTICES, 1)
    assert polygon_counts(figure) == [1, 4]
    assert 'square' in figure.root.get('class')


def test_emit_attractor_svg(tmp_path):
    path = tmp_path / 'attractor.svg'
    counts = emit_attractor_svg(path, sierpinski_ifs(), SIERPINSKI_VERTICES, 2)
    assert counts == [1, 3, 9]
    root = xml_utils.read(path)
    assert xml_utils.local_name(root) == 'svg'
    assert _levels(root) == [1, 3, 9]


def test_emit_chart_svg(tmp_path):
    chart = mobius_chart(sierpinski_polygon(), sierpinski_ifs(), Word((1,)))
    path = tmp_path / 'chart.svg'
    emit_chart_svg(path, chart)
    root = xml_utils.read(path)
    arcs = [e for e in root.iter() if e.get('data-arc') is not None]
    assert [e.get('data-arc') for e in arcs] == ['0', '1', '2']
    assert root.get('class') == 'chart'
