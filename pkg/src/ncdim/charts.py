#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT
"""
Polygonal generators and the piecewise-Möbius charts from the circles C_m onto their images.

Arcs are indexed from 0. Arc j of C_m runs from angle θ_j to θ_j + |L_j| and is mapped onto the
segment from vertex j to vertex j+1 (mod M).
"""

from dataclasses import dataclass, replace

from .ifs import *
from .utils import *

TWO_PI = 2.0 * math.pi

# =======================================================================================================================
# POLYGONS
# =======================================================================================================================


@dataclass(frozen=True, eq=False)
class Polygon(object):
    """A counterclockwise polygon scaled to perimeter 2π."""

    vertices: np.ndarray
    lengths: np.ndarray
    thetas: np.ndarray
    scale: float = 1.0
    """Factor applied to the raw vertices."""

    @property
    def M(self) -> int:
        return len(self.vertices)

    def __len__(self):
        return self.M

    @property
    def taus(self) -> np.ndarray:
        return np.tan(self.lengths / 2.0)

    def to_dict(self):
        return {
            r'vertices': [complex_pair(v) for v in self.vertices],
            r'lengths': self.lengths.tolist(),
            r'thetas': self.thetas.tolist(),
            r'scale': self.scale,
        }


def signed_area(vertices) -> float:
    v = np.asarray(vertices, dtype=complex)
    w = np.roll(v, -1)
    return 0.5 * float(np.sum(v.real * w.imag - w.real * v.imag))


def build_polygon(raw_vertices) -> Polygon:
    vertices = np.array([coerce_complex(v) for v in raw_vertices], dtype=complex)
    M = len(vertices)
    if M <= 2:
        raise DomainError(rf'a generator polygon needs more than two vertices (got {M})')
    for i in range(M):
        for j in range(i + 1, M):
            if vertices[i] == vertices[j]:
                raise GeometryError(rf'polygon vertices {i} and {j} coincide ({vertices[i]})')
    if signed_area(vertices) <= 0.0:
        raise GeometryError(r'polygon vertices must be listed counterclockwise')

    raw_lengths = np.abs(np.roll(vertices, -1) - vertices)
    scale = TWO_PI / float(np.sum(raw_lengths))
    vertices = vertices * scale
    lengths = raw_lengths * scale
    for j, L in enumerate(lengths):
        if not L < math.pi:
            raise GeometryError(rf'edge {j} has normalized length {L:.6f} >= π')
    thetas = np.concatenate(([0.0], np.cumsum(lengths)[:-1]))
    return Polygon(vertices=vertices, lengths=lengths, thetas=thetas, scale=scale)


def sierpinski_polygon() -> Polygon:
    return build_polygon(SIERPINSKI_VERTICES)


def square_polygon() -> Polygon:
    return build_polygon(SQUARE_VERTICES)


# =======================================================================================================================
# CHARTS
# =======================================================================================================================


def _check_t(t, lo_open=False, hi_open=False):
    t = np.asarray(t, dtype=float)
    bad = (t < 0.0) | (t > 1.0)
    if lo_open:
        bad |= t <= 0.0
    if hi_open:
        bad |= t >= 1.0
    if np.any(bad):
        rng = rf'{"(" if lo_open else "["}0, 1{")" if hi_open else "]"}'
        raise DomainError(rf'arc parameter t must lie in {rng}')
    return t


def _unwrap(val, like):
    return complex(val) if np.ndim(like) == 0 else val


@dataclass(frozen=True, eq=False)
class MobiusChart(object):
    """
    κ_w restricted to arc j is p_j + tan(t|L_j|/2) / (δ_j τ_j), t in [0, 1], where p_j are the
    vertex images F_w(p_j), δ_j the inverse chords and τ_j = tan(|L_j|/2).
    """

    word: Word
    radius: float
    vertices: np.ndarray
    deltas: np.ndarray
    taus: np.ndarray
    lengths: np.ndarray
    thetas: np.ndarray

    @property
    def level(self) -> int:
        return self.word.level

    @property
    def M(self) -> int:
        return len(self.vertices)

    def arc_bounds(self):
        """(start, end) angles of each arc."""
        return [(float(th), float(th + L)) for th, L in zip(self.thetas, self.lengths)]

    def evaluate(self, j: int, t):
        t = np.asarray(t, dtype=float)
        ratio = np.tan(t * self.lengths[j] / 2.0) / self.taus[j]
        return self.vertices[j] + ratio / self.deltas[j]

    def radial_derivative(self, j: int, t):
        e = np.exp(1j * np.asarray(t, dtype=float) * self.lengths[j])
        return (-2j / (self.deltas[j] * self.taus[j])) * e / (1.0 + e) ** 2

    def to_dict(self):
        return {
            r'word': str(self.word),
            r'level': self.level,
            r'radius': self.radius,
            r'vertices': [complex_pair(v) for v in self.vertices],
            r'deltas': [complex_pair(d) for d in self.deltas],
            r'taus': self.taus.tolist(),
            r'thetas': self.thetas.tolist(),
        }


@dataclass(frozen=True)
class IdentityChart(object):
    """κ(z) = z on the circle of the given radius, as a single arc."""

    radius: float = 1.0

    @property
    def M(self) -> int:
        return 1

    def arc_bounds(self):
        return [(0.0, TWO_PI)]

    def evaluate(self, j: int, t):
        return self.radius * np.exp(1j * TWO_PI * np.asarray(t, dtype=float))

    def radial_derivative(self, j: int, t):
        return self.evaluate(j, t)


def mobius_chart(poly: Polygon, ifs: IfsSystem, w: Word) -> MobiusChart:
    f = compose_word(ifs, w)
    vertices = f(poly.vertices)
    chords = np.roll(vertices, -1) - vertices
    for j, chord in enumerate(chords):
        if chord == 0:
            raise GeometryError(rf'word {w}: arc {j} has a zero chord')
    # the wrap arc uses tan((2π - θ_M)/2), i.e. its own half-length, like every other arc
    taus = np.tan(poly.lengths / 2.0)
    return MobiusChart(
        word=w,
        radius=ifs.ratio ** w.level,
        vertices=vertices,
        deltas=1.0 / chords,
        taus=taus,
        lengths=poly.lengths.copy(),
        thetas=poly.thetas.copy(),
    )


def perturb_vertex(chart: MobiusChart, j: int, offset: complex) -> MobiusChart:
    """Moves one vertex image while keeping the chords, breaking continuity at that vertex."""
    vertices = chart.vertices.copy()
    vertices[j] += offset
    return replace(chart, vertices=vertices)


def eval_kappa(chart: MobiusChart, j: int, t):
    if not 0 <= j < chart.M:
        raise DomainError(rf'arc index {j} out of range for a chart with {chart.M} arcs')
    t = _check_t(t)
    return _unwrap(chart.evaluate(j, t), t)


def locate(chart: MobiusChart, z):
    """Arc index and arc parameter of the point z = r e^{iφ} on the chart's circle."""
    phi = np.mod(np.angle(np.asarray(z, dtype=complex)), TWO_PI)
    j = np.clip(np.searchsorted(chart.thetas, phi, side=r'right') - 1, 0, chart.M - 1)
    t = np.clip((phi - chart.thetas[j]) / chart.lengths[j], 0.0, 1.0)
    return j, t


def eval_kappa_at(chart: MobiusChart, z):
    """κ evaluated at points z of C_m."""
    j, t = locate(chart, z)
    if np.ndim(j) == 0:
        return complex(chart.evaluate(int(j), t))
    out = np.empty(np.shape(j), dtype=complex)
    for arc in range(chart.M):
        mask = j == arc
        out[mask] = chart.evaluate(arc, t[mask])
    return out


def mobius_form(chart: MobiusChart, j: int, z):
    """The Möbius quotient whose restriction to arc j is κ_j."""
    p = chart.vertices[j]
    q = 1j / (chart.deltas[j] * chart.taus[j])
    w = chart.radius * np.exp(1j * chart.thetas[j])
    z = np.asarray(z, dtype=complex)
    return _unwrap(((p - q) * z + w * (p + q)) / (z + w), z)


def continuity_defect(chart: MobiusChart) -> float:
    M = chart.M
    return max(abs(complex(chart.evaluate(j, 1.0)) - complex(chart.evaluate((j + 1) % M, 0.0))) for j in range(M))


def radial_derivative_kappa(chart: MobiusChart, j: int, t):
    """R = z d/dz applied to κ_j, closed form; only defined inside the arc."""
    if not 0 <= j < chart.M:
        raise DomainError(rf'arc index {j} out of range for a chart with {chart.M} arcs')
    t = _check_t(t, lo_open=True, hi_open=True)
    return _unwrap(chart.radial_derivative(j, t), t)


def radial_derivative_bound(chart: MobiusChart, j: int) -> float:
    """Sup over arc j of |Rκ_j|: 2 |chord| / (τ_j k_j) with k_j = |1 + e^{i|L_j|}|²."""
    k = abs(1.0 + np.exp(1j * chart.lengths[j])) ** 2
    return float(2.0 / (abs(chart.deltas[j]) * chart.taus[j] * k))


__all__ = [
    'TWO_PI',
    'Polygon',
    'signed_area',
    'build_polygon',
    'sierpinski_polygon',
    'square_polygon',
    'MobiusChart',
    'IdentityChart',
    'mobius_chart',
    'perturb_vertex',
    'eval_kappa',
    'locate',
    'eval_kappa_at',
    'mobius_form',
    'continuity_defect',
    'radial_derivative_kappa',
    'radial_derivative_bound',
]
