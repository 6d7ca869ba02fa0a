#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT
"""
Run results and the artifacts written from them (JSON, CSV, markdown and SVG).
"""

import csv
import io
import json

import jinja2

from . import paths, xml_utils
from .charts import MobiusChart
from .ifs import *
from .svg import SVG
from .utils import *

# =======================================================================================================================
# RESULTS
# =======================================================================================================================


class Results(object):
    """
    Everything one experiment measured. Checks carry their tolerance and verdict; tables are written
    to CSV as well as embedded in the JSON report.
    """

    def __init__(self, kind: str, name: str, seed: int):
        self.kind = kind
        self.name = name
        self.seed = seed
        self.checks = []
        self.tables = dict()
        self.data = dict()
        self.figures = []

    def check(self, name: str, value, passed: bool, tolerance=None, target=None):
        self.checks.append(
            {
                r'name': name,
                r'value': value,
                r'target': target,
                r'tolerance': tolerance,
                r'passed': bool(passed),
            }
        )
        return bool(passed)

    def within(self, name: str, value: float, target: float, tolerance: float):
        passed = abs(float(value) - float(target)) <= tolerance
        return self.check(name, value, passed, tolerance=tolerance, target=target)

    def at_most(self, name: str, value: float, tolerance: float):
        return self.check(name, value, float(value) <= tolerance, tolerance=tolerance)

    def table(self, name: str, columns, rows):
        columns = list(columns)
        rows = [list(r) for r in rows]
        for r in rows:
            assert len(r) == len(columns)
        self.tables[name] = {r'columns': columns, r'rows': rows}

    @property
    def passed(self) -> bool:
        return all(c[r'passed'] for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c[r'passed']]

    def to_dict(self):
        return {
            r'kind': self.kind,
            r'name': self.name,
            r'seed': self.seed,
            r'passed': self.passed,
            r'checks': self.checks,
            r'tables': self.tables,
            r'data': self.data,
        }


# =======================================================================================================================
# JSON / CSV / MARKDOWN
# =======================================================================================================================


def report_json(results: Results) -> str:
    return json.dumps(to_jsonable(results.to_dict()), indent=2, sort_keys=True) + '\n'


def table_csv(table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(table[r'columns'])
    for row in to_jsonable(table[r'rows']):
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _cell(val) -> str:
    if isinstance(val, float):
        return repr(val)
    if isinstance(val, bool):
        return r'true' if val else r'false'
    if isinstance(val, list):
        return r' '.join(_cell(v) for v in val)
    if val is None:
        return r''
    return str(val)


def _format_number(val, digits=6):
    if isinstance(val, bool):
        return r'yes' if val else r'no'
    if isinstance(val, (float, np.floating)):
        return rf'{float(val):.{digits}g}'
    if isinstance(val, (list, tuple)):
        return r', '.join(_format_number(v, digits) for v in val)
    if val is None:
        return r''
    return str(val)


def _markdown_environment() -> jinja2.Environment:
    env = jinja2.Environment(
        loader=jinja2.FileSystemLoader(str(paths.TEMPLATES)),
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    env.filters[r'num'] = _format_number
    return env


def report_markdown(results: Results) -> str:
    env = _markdown_environment()
    return env.get_template(r'report.md.j2').render(
        results=results, checks=to_jsonable(results.checks), tables=to_jsonable(results.tables)
    )


def emit_report(results: Results, output_dir: Path, formats=(r'json', r'csv', r'md'), logger=None):
    """Writes report.json, one CSV per table and report.md into output_dir. Returns the written paths."""
    output_dir = coerce_path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    written = []

    def write(name, text):
        path = Path(output_dir, name)
        try:
            with open(path, r'w', encoding=r'utf-8', newline='\n') as f:
                f.write(text)
        except OSError as err:
            raise Error(rf'could not write {path}: {err}')
        log(logger, rf'Wrote {path}')
        written.append(path)

    if r'json' in formats:
        write(r'report.json', report_json(results))
    if r'csv' in formats:
        for name, table in sorted(results.tables.items()):
            write(rf'{name}.csv', table_csv(table))
    if r'md' in formats:
        write(r'report.md', report_markdown(results))
    return written


# =======================================================================================================================
# SVG FIGURES
# =======================================================================================================================

LEVEL_COLOURS = (r'#1f77b4', r'#ff7f0e', r'#2ca02c', r'#d62728', r'#9467bd', r'#8c564b', r'#e377c2', r'#7f7f7f')


def _extent(points):
    points = np.asarray(points, dtype=complex).reshape(-1)
    return complex(points.real.min(), points.imag.min()), complex(points.real.max(), points.imag.max())


def attractor_figure(ifs: IfsSystem, vertices, depth: int, budget: int = DEFAULT_WORD_BUDGET) -> SVG:
    """One polygon F_w(E₀) per word w with |w| <= depth, grouped by level."""
    vertices = np.asarray([coerce_complex(v) for v in vertices], dtype=complex)
    sample = sample_attractor(ifs, vertices, depth, budget=budget)
    polygons = sample.points.reshape(len(sample.words), len(vertices))

    svg = SVG(*_extent(vertices), root_classes=[r'attractor', ifs.name] if ifs.name else r'attractor')
    groups = dict()
    for w, poly in zip(sample.words, polygons):
        if w.level not in groups:
            groups[w.level] = svg.group(
                class_=rf'level-{w.level}',
                fill=r'none',
                stroke=LEVEL_COLOURS[w.level % len(LEVEL_COLOURS)],
                stroke_width=rf'{max(0.4, 2.0 - 0.4 * w.level):g}',
            )
        svg.polygon(poly, parent=groups[w.level], data_word=str(w))
    return svg


def polygon_counts(svg: SVG) -> typing.List[int]:
    """Polygons drawn per level in an attractor figure."""
    return [len(g) for g in svg.root if xml_utils.local_name(g) == r'g']


def emit_attractor_svg(
    path: Path, ifs: IfsSystem, vertices, depth: int, budget: int = DEFAULT_WORD_BUDGET, logger=None
) -> typing.List[int]:
    """Writes the attractor figure; returns the number of polygons drawn per level."""
    svg = attractor_figure(ifs, vertices, depth, budget)
    svg.write(path, logger=logger)
    return polygon_counts(svg)


def chart_figure(chart: MobiusChart) -> SVG:
    """The circle C_m, its arc endpoints, and the polygon they are sent to."""
    r = chart.radius
    ends = r * np.exp(1j * chart.thetas)
    lower, upper = _extent(np.concatenate((ends, chart.vertices, [complex(-r, -r), complex(r, r)])))
    svg = SVG(lower, upper, root_classes=r'chart')

    svg.circle(0j, r, fill=r'none', stroke=r'#7f7f7f', stroke_width=r'1')
    svg.polygon(chart.vertices, fill=r'none', stroke=r'#1f77b4', stroke_width=r'1.5')
    endpoints = svg.group(class_=r'arc-endpoints', fill=r'#d62728')
    links = svg.group(class_=r'links', stroke=r'#bbbbbb', stroke_dasharray=r'4 3')
    for j, (e, v) in enumerate(zip(ends, chart.vertices)):
        svg.line(e, v, parent=links)
        svg.circle(e, 0.025 * r, parent=endpoints, data_arc=j)
        svg.text(e, rf'{j}', parent=endpoints, font_size=r'10')
    return svg


def emit_chart_svg(path: Path, chart: MobiusChart, logger=None):
    chart_figure(chart).write(path, logger=logger)


__all__ = [
    'Results',
    'report_json',
    'table_csv',
    'report_markdown',
    'emit_report',
    'attractor_figure',
    'polygon_counts',
    'emit_attractor_svg',
    'chart_figure',
    'emit_chart_svg',
]
