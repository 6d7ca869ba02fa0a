#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT

import math

import numpy as np
import pytest

from ncdim.ifs import *
from ncdim.utils import ConfigError, DomainError, ResourceError


def test_empty_word_composes_to_identity():
    f = compose_word(sierpinski_ifs(), Word())
    assert f.a == 1.0
    assert f.b == 0.0


def test_compose_two_homotheties_by_hand():
    ifs = sierpinski_ifs()
    p1 = SIERPINSKI_VERTICES[0]
    f = compose_word(ifs, Word((1, 1)))
    assert abs(f.a - 0.25) <= 1e-15
    assert abs(f.b - 0.75 * p1) <= 1e-15

    p2 = SIERPINSKI_VERTICES[1]
    f = compose_word(ifs, Word((2, 2)))
    assert abs(f.b - 0.75 * p2) <= 1e-14


def test_composition_is_associative(rng):
    ifs = square_ifs()
    for _ in range(50):
        u = Word(tuple(rng.integers(1, 5, size=rng.integers(0, 4))))
        v = Word(tuple(rng.integers(1, 5, size=rng.integers(0, 4))))
        whole = compose_word(ifs, u + v)
        parts = compose_word(ifs, u).compose(compose_word(ifs, v))
        assert abs(whole.a - parts.a) <= 1e-12
        assert abs(whole.b - parts.b) <= 1e-12
        assert abs(whole.ratio - 0.5 ** len(u + v)) <= 1e-15


def test_word_letters_are_validated():
    with pytest.raises(DomainError):
        Word((0, 1))
    with pytest.raises(DomainError):
        compose_word(sierpinski_ifs(), Word((4,)))
    assert str(Word()) == '∅'
    assert str(Word((1, 3, 2))) == '1.3.2'


def test_enumerate_words():
    assert list(enumerate_words(3, 0)) == [Word()]
    assert [w.letters for w in enumerate_words(2, 2)] == [(1, 1), (1, 2), (2, 1), (2, 2)]
    assert len(list(enumerate_words(3, 4))) == 81
    with pytest.raises(DomainError):
        enumerate_words(0, 1)
    with pytest.raises(ResourceError):
        enumerate_words(3, 20, budget=1000)


def test_ratio_mismatch_is_rejected():
    with pytest.raises(DomainError):
        IfsSystem(maps=(Similarity(0.5), Similarity(0.25, 1.0)))
    with pytest.raises(DomainError):
        IfsSystem(maps=(Similarity(1.5),))


def test_hausdorff_dimension():
    assert abs(hausdorff_dimension(sierpinski_ifs()) - 1.5849625007) <= 1e-9
    assert hausdorff_dimension(IfsSystem(maps=(Similarity(0.3),))) == 0.0
    third = IfsSystem(maps=tuple(Similarity.homothety(p, 1.0 / 3.0) for p in (0.0, 1.0, 2.0)))
    assert abs(hausdorff_dimension(third) - 1.0) <= 1e-12
    assert hausdorff_dimension(square_ifs()) == pytest.approx(2.0)


def _equal_ratio_system(c, N):
    return IfsSystem(maps=tuple(Similarity(c, float(k)) for k in range(N)))


def test_hausdorff_dimension_grows_with_the_number_of_maps():
    for c in (0.2, 0.5, 0.8):
        dims = [hausdorff_dimension(_equal_ratio_system(c, N)) for N in range(1, 9)]
        assert dims[0] == 0.0
        assert all(b > a for a, b in zip(dims, dims[1:]))


def test_hausdorff_dimension_grows_with_the_ratio():
    for N in (2, 3, 5):
        dims = [hausdorff_dimension(_equal_ratio_system(c, N)) for c in np.linspace(0.05, 0.95, 19)]
        assert all(b > a for a, b in zip(dims, dims[1:]))


def test_conjugating_by_a_scale(rng):
    ifs = sierpinski_ifs()
    scaled = ifs.scaled(3.0)
    assert scaled.ratio == ifs.ratio
    assert scaled.name == ifs.name
    z = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    for f, g in zip(ifs.maps, scaled.maps):
        assert np.allclose(g(3.0 * z), 3.0 * f(z), atol=1e-14)
    assert np.allclose(scaled.osc_candidate.vertices, 3.0 * np.array(ifs.osc_candidate.vertices), atol=1e-14)
    disk = DiskCandidate(1.0 + 1.0j, 0.5).scaled(2.0)
    assert disk.center == 2.0 + 2.0j and disk.radius == 1.0


def test_sierpinski_maps_fix_their_vertex():
    ifs = sierpinski_ifs()
    for f, p in zip(ifs.maps, SIERPINSKI_VERTICES):
        assert abs(f(p) - p) <= 1e-15


def test_sample_attractor_depth_zero_is_unchanged():
    sample = sample_attractor(sierpinski_ifs(), SIERPINSKI_VERTICES, 0)
    assert np.array_equal(sample.points, np.asarray(SIERPINSKI_VERTICES))
    assert sample.words == (Word(),)


def test_sample_attractor_depth_one():
    ifs = sierpinski_ifs()
    sample = sample_attractor(ifs, SIERPINSKI_VERTICES, 1)
    assert len(sample) == 12
    assert list(sample.levels).count(1) == 9
    corners = sample.points[sample.levels == 1].reshape(3, 3)
    for k, triangle in enumerate(corners):
        expected = (np.asarray(SIERPINSKI_VERTICES) + SIERPINSKI_VERTICES[k]) / 2.0
        assert np.allclose(triangle, expected, atol=1e-15)


def test_sample_attractor_stays_in_the_hull():
    hull = PolygonCandidate(SIERPINSKI_VERTICES)
    sample = sample_attractor(sierpinski_ifs(), [sum(SIERPINSKI_VERTICES) / 3.0], 4)
    assert np.all(hull.contains(sample.points))


def test_open_set_condition_for_sierpinski():
    report = check_open_set_condition(sierpinski_ifs(), samples=500, rng=np.random.default_rng(1))
    assert report.ok
    assert report.containment_violations == 0
    assert set(report.overlaps) == {(1, 2), (1, 3), (2, 3)}


def test_open_set_condition_detects_overlaps():
    V = PolygonCandidate(SIERPINSKI_VERTICES)
    f = Similarity.homothety(SIERPINSKI_VERTICES[0], 0.5)
    twins = IfsSystem(maps=(f, f), osc_candidate=V)
    assert check_open_set_condition(twins, samples=200).overlaps[(1, 2)]

    disks = IfsSystem(
        maps=(Similarity(0.6, -0.3), Similarity(0.6, 0.7)), osc_candidate=DiskCandidate(0.5, 1.0)
    )
    report = check_open_set_condition(disks)
    assert report.exact
    assert report.overlaps[(1, 2)]


def test_open_set_condition_needs_a_candidate():
    with pytest.raises(ConfigError):
        check_open_set_condition(IfsSystem(maps=(Similarity(0.5),)))
