#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT

import json
import math

import numpy as np
import pytest

from ncdim import paths
from ncdim.charts import continuity_defect, mobius_chart
from ncdim.ifs import Word, enumerate_words
from ncdim.project import *
from ncdim.schemas import SchemaError
from ncdim.utils import ConfigError, GeometryError


def _config(kind, parameters=None, **extra):
    config = {'kind': kind}
    if parameters is not None:
        config['parameters'] = parameters
    config.update(extra)
    return config


SIERPINSKI = [{'preset': 'sierpinski'}]


@pytest.mark.parametrize('path', sorted(paths.CONFIGS.glob('*.toml')), ids=lambda p: p.stem)
def test_bundled_configs_load(path):
    config = load_config(path)
    assert config.kind in KINDS
    assert config.name == path.stem


def test_bundled_configs_are_found_by_name():
    assert find_config('zeta') == (paths.CONFIGS / 'zeta.toml').resolve()
    with pytest.raises(ConfigError):
        find_config('no-such-config')


def test_defaults_are_filled_in():
    config = RunConfig(_config('verify-bergman'))
    assert config.parameters['n'] == [1, 2]
    assert config.parameters['margin'] == config.parameters['max_degree']
    assert config.name == 'verify-bergman'
    assert config.seed == 0
    assert config.output.formats == list(FORMATS)


def test_unknown_keys_are_rejected():
    with pytest.raises(ConfigError, match='colour'):
        RunConfig(_config('zeta', colour='red', system=SIERPINSKI))
    with pytest.raises(ConfigError, match=r'parameters\.levles'):
        RunConfig(_config('zeta', {'levles': 4}, system=SIERPINSKI))


def test_unknown_kinds_are_rejected():
    with pytest.raises(SchemaError):
        RunConfig(_config('render'))


def test_inadmissible_ell_reports_the_bound():
    with pytest.raises(ConfigError, match=r'2\.709511'):
        RunConfig(_config('dimension-fractal', {'ell': 1.5}, system=SIERPINSKI))
    with pytest.raises(ConfigError, match=r'2\.709511'):
        RunConfig(_config('dimension-fractal', {'ell': [3, 2]}, system=SIERPINSKI))


def test_fractal_ratio_must_exceed_one_over_n():
    with pytest.raises(ConfigError, match='cN'):
        RunConfig(_config('dimension-fractal', {'c': 0.3, 'N': 3}))
    with pytest.raises(ConfigError):
        RunConfig(_config('dimension-fractal', {'c': 0.5}))


def test_cutoffs_have_a_floor():
    with pytest.raises((ConfigError, SchemaError)):
        RunConfig(_config('verify-bergman', {'K': 4}))
    with pytest.raises(ConfigError, match='hardy_K'):
        RunConfig(_config('conditions', {'hardy_K': 4}, system=SIERPINSKI))


def test_margins_are_checked():
    with pytest.raises(ConfigError, match='margin'):
        RunConfig(_config('verify-bergman', {'n': 1, 'K': 8, 'max_degree': 4, 'margin': 5}))
    with pytest.raises(ConfigError, match='margin'):
        RunConfig(_config('verify-hardy', {'max_degree': 3, 'margin': 2}, system=SIERPINSKI))


def test_zeta_exponents_must_converge():
    with pytest.raises(ConfigError, match='exceed 2'):
        RunConfig(_config('zeta', {'family': 'bergman', 'n': 1, 's': [1.5, 3.0]}))
    with pytest.raises(ConfigError, match='exceed 1'):
        RunConfig(_config('zeta', {'s': 1.0}, system=SIERPINSKI))
    config = RunConfig(_config('zeta', {'family': 'bergman', 'n': 1, 's': 2.5}))
    assert config.parameters['s'] == [2.5]


def test_custom_systems():
    system = {
        'name': 'halves',
        'maps': [{'a': [0.5, 0.0]}, {'a': [0.5, 0.0], 'b': [0.5, 0.0]}],
        'osc_candidate': {'disk': {'center': [0.5, 0.0], 'radius': 0.5}},
    }
    config = RunConfig(_config('zeta', {'family': 'disk'}, system=[system]))
    assert config.ratio_and_count() == (0.5, 2)
    assert config.system().name == 'halves'
    with pytest.raises(ConfigError, match='vertices'):
        config.system(require_polygon=True)


UNIT_TRIANGLE = [[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3.0) / 2.0]]


def _unit_triangle_system():
    maps = [{'a': [0.5, 0.0], 'b': [x / 2.0, y / 2.0]} for x, y in UNIT_TRIANGLE]
    system = {'name': 'unit-triangle', 'maps': maps, 'vertices': UNIT_TRIANGLE}
    system['osc_candidate'] = {'polygon': UNIT_TRIANGLE}
    return RunConfig(_config('attractor', system=[system])).system(require_polygon=True)


def test_custom_vertices_carry_the_maps_along():
    system = _unit_triangle_system()
    scale = 2.0 * math.pi / 3.0
    assert system.polygon.scale == pytest.approx(scale, rel=1e-14)

    raw = [complex(x, y) for x, y in UNIT_TRIANGLE]
    chart = mobius_chart(system.polygon, system.ifs, Word((2,)))
    expected = [scale * (0.5 * z + 0.5 * raw[1]) for z in raw]
    assert np.allclose(chart.vertices, expected, rtol=0.0, atol=1e-12)
    assert chart.vertices[2] == pytest.approx(complex(math.pi / 2.0, 0.9068996821171089), abs=1e-12)
    assert np.allclose(system.ifs.osc_candidate.vertices, system.polygon.vertices, rtol=0.0, atol=1e-12)


def test_custom_vertices_match_the_preset_charts():
    custom = _unit_triangle_system()
    preset = RunConfig(_config('attractor', system=SIERPINSKI)).system(require_polygon=True)
    assert np.allclose(custom.polygon.vertices, preset.polygon.vertices, rtol=0.0, atol=1e-12)
    for level in range(3):
        for w in enumerate_words(3, level):
            ours = mobius_chart(custom.polygon, custom.ifs, w)
            theirs = mobius_chart(preset.polygon, preset.ifs, w)
            assert np.allclose(ours.vertices, theirs.vertices, rtol=0.0, atol=1e-12)
            assert continuity_defect(ours) < 1e-12


def test_preset_and_maps_are_exclusive():
    system = {'preset': 'sierpinski', 'maps': [{'a': [0.5, 0.0]}]}
    with pytest.raises(ConfigError, match='mutually exclusive'):
        RunConfig(_config('attractor', system=[system]))


def test_bad_generator_polygons():
    system = {'preset': 'sierpinski', 'vertices': [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]}
    with pytest.raises((ConfigError, GeometryError), match='counterclockwise'):
        RunConfig(_config('attractor', system=[system]))


def test_attractor_needs_a_system():
    with pytest.raises(ConfigError, match=r'\[\[system\]\]'):
        RunConfig(_config('attractor'))


def test_output_formats():
    config = RunConfig(_config('dimension-bergman', output={'formats': ['md', 'JSON']}))
    assert config.output.formats == ['json', 'md']
    with pytest.raises(ConfigError, match='pdf'):
        RunConfig(_config('dimension-bergman', output={'formats': 'pdf'}))


def test_json_configs(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text(json.dumps(_config('dimension-bergman', {'lambda_max': 500.0}, seed=7)), encoding='utf-8')
    config = load_config(path)
    assert config.parameters['lambda_max'] == 500.0
    assert config.seed == 7
    assert config.name == 'run'


def test_malformed_files(tmp_path):
    path = tmp_path / 'broken.toml'
    path.write_text("kind = 'zeta\n", encoding='utf-8')
    with pytest.raises(ConfigError, match='broken.toml'):
        load_config(path)


def test_context(tmp_path):
    out = tmp_path / 'out'
    context = Context('bergman-dimension', output_dir=out, threads=2, seed=11)
    assert out.is_dir()
    assert context.kind == 'dimension-bergman'
    assert context.seed == 11
    assert 1 <= context.threads <= 2
    assert context.rng(3, 4).integers(0, 1 << 30) == context.rng(3, 4).integers(0, 1 << 30)
    assert context.rng(3, 4).integers(0, 1 << 30) != context.rng(4, 3).integers(0, 1 << 30)


def test_context_seed_comes_from_the_config(tmp_path):
    context = Context('sierpinski-dimension', output_dir=tmp_path)
    assert context.seed == 0
    assert not context.treat_warnings_as_errors
