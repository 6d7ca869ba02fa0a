#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT
"""
Equal-ratio contracting similarity systems on the complex plane, their words and attractors.
"""

import itertools
from dataclasses import dataclass, field

from .utils import *

DEFAULT_WORD_BUDGET = 1_000_000
"""Upper bound on the number of words any single enumeration or sampling pass may produce."""

RATIO_TOLERANCE = 1e-12

# =======================================================================================================================
# SIMILARITIES AND WORDS
# =======================================================================================================================


@dataclass(frozen=True)
class Similarity(object):
    """The map z -> a*z + b."""

    a: complex
    b: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, r'a', complex(self.a))
        object.__setattr__(self, r'b', complex(self.b))
        if not np.isfinite(self.a) or not np.isfinite(self.b):
            raise DomainError(rf'similarity coefficients must be finite (a={self.a}, b={self.b})')
        if abs(self.a) == 0.0:
            raise DomainError(r'similarity scale must be nonzero')

    @classmethod
    def identity(cls) -> 'Similarity':
        return cls(1.0 + 0j, 0j)

    @classmethod
    def homothety(cls, center: complex, ratio: float) -> 'Similarity':
        """Homothety of the given ratio fixing `center`."""
        center = complex(center)
        return cls(complex(ratio), center * (1.0 - ratio))

    @property
    def ratio(self) -> float:
        return abs(self.a)

    def __call__(self, z):
        return self.a * z + self.b

    def compose(self, inner: 'Similarity') -> 'Similarity':
        """self ∘ inner"""
        return Similarity(self.a * inner.a, self.a * inner.b + self.b)

    def inverse(self) -> 'Similarity':
        return Similarity(1.0 / self.a, -self.b / self.a)

    def scaled(self, factor: float) -> 'Similarity':
        """The same map in coordinates multiplied by factor: z -> factor * F(z / factor)."""
        return Similarity(self.a, self.b * factor)

    def to_dict(self):
        return {r'a': complex_pair(self.a), r'b': complex_pair(self.b)}


@dataclass(frozen=True, order=True)
class Word(object):
    """A finite word over the letters 1..N. The empty word labels the identity at level 0."""

    letters: typing.Tuple[int, ...] = ()

    def __post_init__(self):
        letters = tuple(int(l) for l in self.letters)
        for l in letters:
            if l < 1:
                raise DomainError(rf'word letters must be >= 1 (got {l})')
        object.__setattr__(self, r'letters', letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __add__(self, other: 'Word') -> 'Word':
        return Word(self.letters + tuple(other.letters))

    def __str__(self):
        if not self.letters:
            return r'∅'
        return r'.'.join(str(l) for l in self.letters)

    @property
    def level(self) -> int:
        return len(self.letters)

    def validate(self, n: int):
        for l in self.letters:
            if l > n:
                raise DomainError(rf"word {self}: letter {l} is not valid for a system of {n} maps")
        return self


# =======================================================================================================================
# OPEN SET CANDIDATES
# =======================================================================================================================


@dataclass(frozen=True)
class DiskCandidate(object):
    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, r'center', complex(self.center))
        if not self.radius > 0.0:
            raise DomainError(rf'open set candidate radius must be positive (got {self.radius})')

    def scaled(self, factor: float) -> 'DiskCandidate':
        return DiskCandidate(self.center * factor, self.radius * factor)

    def to_dict(self):
        return {r'disk': {r'center': complex_pair(self.center), r'radius': float(self.radius)}}


@dataclass(frozen=True)
class PolygonCandidate(object):
    vertices: typing.Tuple[complex, ...]

    def __post_init__(self):
        vertices = tuple(complex(v) for v in self.vertices)
        if len(vertices) < 3:
            raise DomainError(r'open set candidate polygon needs at least three vertices')
        object.__setattr__(self, r'vertices', vertices)

    def scaled(self, factor: float) -> 'PolygonCandidate':
        return PolygonCandidate(tuple(v * factor for v in self.vertices))

    def contains(self, points) -> np.ndarray:
        """Even-odd rule; points on the boundary are unspecified."""
        points = np.asarray(points, dtype=complex)
        x, y = points.real, points.imag
        inside = np.zeros(points.shape, dtype=bool)
        vs = self.vertices
        for i in range(len(vs)):
            x0, y0 = vs[i].real, vs[i].imag
            x1, y1 = vs[i - 1].real, vs[i - 1].imag
            crosses = (y0 > y) != (y1 > y)
            with np.errstate(divide=r'ignore', invalid=r'ignore'):
                x_at = (x1 - x0) * (y - y0) / (y1 - y0) + x0
            inside ^= crosses & (x < x_at)
        return inside

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Uniform rejection sampling of interior points."""
        vs = np.asarray(self.vertices)
        lo = complex(vs.real.min(), vs.imag.min())
        hi = complex(vs.real.max(), vs.imag.max())
        out = []
        total = 0
        while total < count:
            batch = lo.real + (hi.real - lo.real) * rng.random(2 * count) + 1j * (
                lo.imag + (hi.imag - lo.imag) * rng.random(2 * count)
            )
            batch = batch[self.contains(batch)]
            out.append(batch)
            total += len(batch)
        return np.concatenate(out)[:count]

    def to_dict(self):
        return {r'polygon': [complex_pair(v) for v in self.vertices]}


# =======================================================================================================================
# SYSTEMS
# =======================================================================================================================


@dataclass(frozen=True)
class IfsSystem(object):
    maps: typing.Tuple[Similarity, ...]
    osc_candidate: typing.Optional[typing.Union[DiskCandidate, PolygonCandidate]] = None
    name: str = r''
    ratio: float = field(init=False)

    def __post_init__(self):
        maps = tuple(self.maps)
        if not maps:
            raise DomainError(r'an iterated function system needs at least one map')
        object.__setattr__(self, r'maps', maps)
        c = maps[0].ratio
        if not 0.0 < c < 1.0:
            raise DomainError(rf'contraction ratio must lie in (0, 1) (got {c})')
        for i, f in enumerate(maps):
            if abs(f.ratio - c) > RATIO_TOLERANCE:
                raise DomainError(rf'map {i + 1} has ratio {f.ratio}, expected the common ratio {c}')
        object.__setattr__(self, r'ratio', c)

    @property
    def N(self) -> int:
        return len(self.maps)

    def __len__(self):
        return len(self.maps)

    def scaled(self, factor: float) -> 'IfsSystem':
        """The conjugate system (and candidate) in coordinates multiplied by factor."""
        candidate = None if self.osc_candidate is None else self.osc_candidate.scaled(factor)
        return IfsSystem(maps=tuple(f.scaled(factor) for f in self.maps), osc_candidate=candidate, name=self.name)

    def to_dict(self):
        out = {
            r'name': self.name,
            r'N': self.N,
            r'ratio': self.ratio,
            r'maps': [f.to_dict() for f in self.maps],
        }
        if self.osc_candidate is not None:
            out[r'osc_candidate'] = self.osc_candidate.to_dict()
        return out


def compose_word(ifs: IfsSystem, w: Word) -> Similarity:
    """F_w = F_{w1} ∘ F_{w2} ∘ ... ∘ F_{wm}; the empty word gives the identity."""
    w.validate(ifs.N)
    out = Similarity.identity()
    for letter in w.letters:
        out = out.compose(ifs.maps[letter - 1])
    return out


def _check_budget(count: int, budget: int, what: str):
    if budget is not None and count > budget:
        raise ResourceError(rf'{what} would produce {count} words, exceeding the budget of {budget}')


def enumerate_words(N: int, m: int, budget: int = DEFAULT_WORD_BUDGET):
    """All N^m words of length m in lexicographic order."""
    if N < 1:
        raise DomainError(rf'N must be >= 1 (got {N})')
    if m < 0:
        raise DomainError(rf'level must be >= 0 (got {m})')
    _check_budget(N**m, budget, rf'level {m} of a {N}-map system')
    return (Word(letters) for letters in itertools.product(range(1, N + 1), repeat=m))


def hausdorff_dimension(ifs: IfsSystem) -> float:
    return math.log(ifs.N) / math.log(1.0 / ifs.ratio)


# =======================================================================================================================
# ATTRACTOR SAMPLING
# =======================================================================================================================


@dataclass(frozen=True)
class AttractorSample(object):
    points: np.ndarray
    levels: np.ndarray
    words: typing.Tuple[Word, ...]
    word_index: np.ndarray
    """Index into `words` for each point."""

    def __len__(self):
        return len(self.points)


def sample_attractor(
    ifs: IfsSystem, generator, depth: int, budget: int = DEFAULT_WORD_BUDGET
) -> AttractorSample:
    """
    Images of the generator samples under every F_w with |w| <= depth, levels ascending and words
    lexicographic within a level.
    """
    if depth < 0:
        raise DomainError(rf'depth must be >= 0 (got {depth})')
    samples = np.asarray(list(generator), dtype=complex).reshape(-1)
    _check_budget(sum(ifs.N**m for m in range(depth + 1)), budget, rf'sampling to depth {depth}')

    points, levels, word_index, words = [], [], [], []
    for m in range(depth + 1):
        for w in enumerate_words(ifs.N, m, budget=budget):
            f = compose_word(ifs, w)
            points.append(f(samples))
            levels.append(np.full(len(samples), m, dtype=int))
            word_index.append(np.full(len(samples), len(words), dtype=int))
            words.append(w)
    return AttractorSample(
        points=np.concatenate(points),
        levels=np.concatenate(levels),
        words=tuple(words),
        word_index=np.concatenate(word_index),
    )


# =======================================================================================================================
# OPEN SET CONDITION
# =======================================================================================================================


@dataclass(frozen=True)
class OpenSetReport(object):
    overlaps: typing.Dict[typing.Tuple[int, int], bool]
    containment_violations: int
    exact: bool
    samples: int

    @property
    def ok(self) -> bool:
        return self.containment_violations == 0 and not any(self.overlaps.values())

    def to_dict(self):
        return {
            r'overlaps': {rf'{k}-{l}': v for (k, l), v in sorted(self.overlaps.items())},
            r'containment_violations': self.containment_violations,
            r'exact': self.exact,
            r'samples': self.samples,
            r'ok': self.ok,
        }


def check_open_set_condition(ifs: IfsSystem, samples: int = 2000, rng: np.random.Generator = None) -> OpenSetReport:
    """
    Advisory check of the open set condition against the system's candidate set V.
    Disk candidates are decided exactly; polygon candidates by sampling interior points.
    Map indices in the report are 1-based like word letters.
    """
    V = ifs.osc_candidate
    if V is None:
        raise ConfigError(r'the open set condition check needs an osc_candidate')
    pairs = list(itertools.combinations(range(ifs.N), 2))
    overlaps = dict()
    violations = 0

    if isinstance(V, DiskCandidate):
        r = ifs.ratio * V.radius
        centers = [f(V.center) for f in ifs.maps]
        for k, l in pairs:
            overlaps[(k + 1, l + 1)] = bool(abs(centers[k] - centers[l]) < 2.0 * r)
        for c in centers:
            if abs(c - V.center) + r > V.radius * (1.0 + 1e-12):
                violations += 1
        return OpenSetReport(overlaps=overlaps, containment_violations=violations, exact=True, samples=0)

    if rng is None:
        rng = np.random.default_rng(0)
    interior = V.sample(samples, rng)
    images = [f(interior) for f in ifs.maps]
    inverses = [f.inverse() for f in ifs.maps]
    for k, l in pairs:
        # F_k(x) in F_l(V) <=> F_l^{-1}(F_k(x)) in V
        overlaps[(k + 1, l + 1)] = bool(np.any(V.contains(inverses[l](images[k]))))
    for img in images:
        violations += int(np.count_nonzero(~V.contains(img)))
    return OpenSetReport(overlaps=overlaps, containment_violations=violations, exact=False, samples=samples)


# =======================================================================================================================
# PRESETS
# =======================================================================================================================

SIERPINSKI_VERTICES = (0j, 2.0 * math.pi / 3.0 + 0j, (2.0 * math.pi / 3.0) * complex(0.5, math.sqrt(3.0) / 2.0))
"""Counterclockwise equilateral triangle of perimeter 2π."""

SQUARE_VERTICES = (0j, math.pi / 2.0 + 0j, complex(math.pi / 2.0, math.pi / 2.0), complex(0.0, math.pi / 2.0))
"""Counterclockwise square of perimeter 2π."""


def sierpinski_ifs() -> IfsSystem:
    """The three homotheties of ratio 1/2 about the triangle's vertices."""
    return IfsSystem(
        maps=tuple(Similarity.homothety(p, 0.5) for p in SIERPINSKI_VERTICES),
        osc_candidate=PolygonCandidate(SIERPINSKI_VERTICES),
        name=r'sierpinski',
    )


def square_ifs() -> IfsSystem:
    """Quadrant contractions: homotheties of ratio 1/2 about the square's corners."""
    return IfsSystem(
        maps=tuple(Similarity.homothety(p, 0.5) for p in SQUARE_VERTICES),
        osc_candidate=PolygonCandidate(SQUARE_VERTICES),
        name=r'square',
    )


__all__ = [
    'DEFAULT_WORD_BUDGET',
    'Similarity',
    'Word',
    'DiskCandidate',
    'PolygonCandidate',
    'IfsSystem',
    'compose_word',
    'enumerate_words',
    'hausdorff_dimension',
    'AttractorSample',
    'sample_attractor',
    'OpenSetReport',
    'check_open_set_condition',
    'SIERPINSKI_VERTICES',
    'SQUARE_VERTICES',
    'sierpinski_ifs',
    'square_ifs',
]
