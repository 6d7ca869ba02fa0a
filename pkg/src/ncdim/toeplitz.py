#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT
"""
Finite sections of Hardy-space Toeplitz operators on the circles C_m, the diagonal Dirac operators
D = αR + β, commutators, and the operator norm.

The Hardy basis of H²(C_m) used throughout is e_j(z) = c^{-mj} z^j, which is orthonormal for the
normalized arc-length measure. In that basis the Toeplitz matrix of a symbol u is M_kj = û(k - j),
û being the Fourier coefficients of t -> u(c^m e^{it}).
"""

import functools
from dataclasses import dataclass, field

import scipy.linalg
from numpy.polynomial.legendre import leggauss
from scipy.special import comb

from .charts import *
from .ifs import *
from .utils import *

DEFAULT_ORDER = 32
"""Gauss-Legendre points per quadrature panel."""

MAX_HARMONICS = 4096

PANEL_PHASE = 8.0
"""Largest phase n*h any single panel has to resolve."""

HARMONIC_BATCH = 64

# =======================================================================================================================
# SYMBOLS
# =======================================================================================================================


def _power(base: str, k: int) -> str:
    return r'' if k == 0 else (base if k == 1 else rf'{base}^{k}')


class SymbolPolynomial(object):
    """A polynomial Σ c_ab κ^a conj(κ)^b in a chart and its conjugate."""

    def __init__(self, terms=None, label: str = None):
        self.terms = dict()
        for (a, b), coeff in (terms or dict()).items():
            a, b = int(a), int(b)
            if a < 0 or b < 0:
                raise DomainError(rf'symbol powers must be >= 0 (got {a}, {b})')
            coeff = complex(coeff)
            if coeff != 0:
                self.terms[(a, b)] = self.terms.get((a, b), 0j) + coeff
        self.label = label if label is not None else self.describe()

    @classmethod
    def monomial(cls, a: int, b: int, coeff: complex = 1.0) -> 'SymbolPolynomial':
        return cls({(a, b): coeff})

    @property
    def degree(self) -> int:
        return max((a + b for a, b in self.terms), default=0)

    def __bool__(self):
        return bool(self.terms)

    def __mul__(self, k) -> 'SymbolPolynomial':
        return SymbolPolynomial({key: k * c for key, c in self.terms.items()})

    __rmul__ = __mul__

    def conj(self) -> 'SymbolPolynomial':
        return SymbolPolynomial({(b, a): c.conjugate() for (a, b), c in self.terms.items()})

    def describe(self) -> str:
        if not self.terms:
            return r'0'
        parts = []
        for (a, b), c in sorted(self.terms.items()):
            mono = _power(r'κ', a) + _power(r'κ̄', b)
            coeff = r'' if c == 1 and mono else (rf'{c.real:g}' if c.imag == 0 else rf'({c.real:g}{c.imag:+g}i)')
            parts.append(coeff + mono if mono else coeff or r'1')
        return r' + '.join(parts)

    def evaluate(self, kappa):
        kappa = np.asarray(kappa, dtype=complex)
        out = np.zeros(kappa.shape, dtype=complex)
        kbar = np.conj(kappa)
        for (a, b), c in self.terms.items():
            out += c * kappa**a * kbar**b
        return out

    def radial_difference(self, kappa, rkappa):
        """(R - R̄) applied to the symbol, given κ and Rκ on an open arc."""
        kappa = np.asarray(kappa, dtype=complex)
        rkappa = np.asarray(rkappa, dtype=complex)
        kbar = np.conj(kappa)
        out = np.zeros(kappa.shape, dtype=complex)
        for (a, b), c in self.terms.items():
            if a:
                out += c * a * rkappa * kappa ** (a - 1) * kbar**b
            if b:
                out -= c * b * kappa**a * np.conj(rkappa) * kbar ** (b - 1)
        return out

    def to_dict(self):
        return {r'label': self.label, r'terms': [[a, b, complex_pair(c)] for (a, b), c in sorted(self.terms.items())]}


@dataclass(frozen=True, eq=False)
class SymbolCoefficients(object):
    """û(n) for n = -H..H, stored at index n + H."""

    harmonics: int
    values: np.ndarray
    source: str = r'quadrature'
    label: str = r''

    def __getitem__(self, n: int) -> complex:
        if abs(n) > self.harmonics:
            raise InsufficientHarmonicsError(rf'harmonic {n} requested from {self.harmonics} computed harmonics')
        return complex(self.values[n + self.harmonics])

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.harmonics, self.harmonics + 1)

    def conj(self) -> 'SymbolCoefficients':
        """Coefficients of the conjugate symbol: conj(û(-n))."""
        return SymbolCoefficients(self.harmonics, np.conj(self.values[::-1]), self.source, rf'conj({self.label})')

    @classmethod
    def zero(cls, harmonics: int, label=r'0') -> 'SymbolCoefficients':
        return cls(harmonics, np.zeros(2 * harmonics + 1, dtype=complex), r'closed-form', label)


@functools.lru_cache(maxsize=None)
def _gauss_legendre(order: int):
    return leggauss(order)


def quadrature_nodes(chart, harmonics: int, order: int = DEFAULT_ORDER):
    """
    Composite Gauss-Legendre nodes split at the chart's corner angles.
    Returns (phi, weights, arc, t): angles, weights summing to 2π, arc index and arc parameter.
    """
    x, w = _gauss_legendre(order)
    phis, weights, arcs, ts = [], [], [], []
    for j, (start, end) in enumerate(chart.arc_bounds()):
        length = end - start
        panels = max(1, int(math.ceil(max(harmonics, 1) * length / PANEL_PHASE)))
        edges = np.linspace(start, end, panels + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            half = 0.5 * (hi - lo)
            phi = lo + half * (x + 1.0)
            phis.append(phi)
            weights.append(half * w)
            arcs.append(np.full(order, j, dtype=int))
            ts.append((phi - start) / length)
    return np.concatenate(phis), np.concatenate(weights), np.concatenate(arcs), np.concatenate(ts)


def _integrate_harmonics(phi, weights, values, harmonics):
    wv = weights * values / (2.0 * math.pi)
    ns = np.arange(-harmonics, harmonics + 1)
    out = np.empty(len(ns), dtype=complex)
    for start in range(0, len(ns), HARMONIC_BATCH):
        batch = ns[start : start + HARMONIC_BATCH]
        out[start : start + len(batch)] = np.exp(-1j * np.outer(batch, phi)) @ wv
    return out


def _symbol_coefficients(chart, sampler, harmonics, order, budget, label):
    if harmonics < 0:
        raise DomainError(rf'harmonics must be >= 0 (got {harmonics})')
    if order < 4:
        raise DomainError(rf'quadrature order must be >= 4 (got {order})')
    if budget is not None and harmonics > budget:
        raise ResourceError(rf'{harmonics} harmonics requested, exceeding the budget of {budget}')
    phi, weights, arcs, ts = quadrature_nodes(chart, harmonics, order)
    values = np.empty(len(phi), dtype=complex)
    for j in range(chart.M):
        mask = arcs == j
        values[mask] = sampler(j, ts[mask])
    return SymbolCoefficients(harmonics, _integrate_harmonics(phi, weights, values, harmonics), r'quadrature', label)


def _as_symbol(symbol) -> SymbolPolynomial:
    if isinstance(symbol, SymbolPolynomial):
        return symbol
    a, b = symbol
    return SymbolPolynomial.monomial(a, b)


def fourier_coefficients(
    chart, symbol, harmonics: int, order: int = DEFAULT_ORDER, budget: int = MAX_HARMONICS
) -> SymbolCoefficients:
    """Fourier coefficients of u∘κ on the chart's circle; `symbol` is a SymbolPolynomial or powers (a, b)."""
    symbol = _as_symbol(symbol)
    return _symbol_coefficients(
        chart, lambda j, t: symbol.evaluate(chart.evaluate(j, t)), harmonics, order, budget, symbol.label
    )


def commutator_symbol(
    chart, a: int, b: int, harmonics: int, order: int = DEFAULT_ORDER, budget: int = MAX_HARMONICS
) -> SymbolCoefficients:
    """Fourier coefficients of (R - R̄)(κ^a κ̄^b), assembled arc by arc from the closed form of Rκ."""
    return symbol_commutator_coefficients(chart, SymbolPolynomial.monomial(a, b), harmonics, order, budget)


def symbol_commutator_coefficients(
    chart, symbol: SymbolPolynomial, harmonics: int, order: int = DEFAULT_ORDER, budget: int = MAX_HARMONICS
) -> SymbolCoefficients:
    label = rf'(R-R̄)({symbol.label})'
    if all(a + b == 0 for a, b in symbol.terms):
        return SymbolCoefficients.zero(harmonics, label)
    return _symbol_coefficients(
        chart,
        lambda j, t: symbol.radial_difference(chart.evaluate(j, t), chart.radial_derivative(j, t)),
        harmonics,
        order,
        budget,
        label,
    )


# =======================================================================================================================
# TRUNCATIONS
# =======================================================================================================================


@dataclass(frozen=True)
class HardyTruncation(object):
    """Span of e_0..e_K in H²(C_m), e_j(z) = radius^{-j} z^j."""

    level: int
    radius: float
    cutoff: int

    def __post_init__(self):
        if self.cutoff < 1:
            raise DomainError(rf'cutoff must be >= 1 (got {self.cutoff})')
        if not 0.0 < self.radius <= 1.0:
            raise DomainError(rf'radius must lie in (0, 1] (got {self.radius})')

    @classmethod
    def for_level(cls, ratio: float, level: int, cutoff: int) -> 'HardyTruncation':
        return cls(level=level, radius=ratio**level, cutoff=cutoff)

    @property
    def size(self) -> int:
        return self.cutoff + 1

    def basis(self, j: int, z):
        return (np.asarray(z, dtype=complex) / self.radius) ** j

    def kernel(self, z, w):
        """Truncated reproducing kernel Σ_k conj(e_k(z)) e_k(w)."""
        x = np.conj(np.asarray(z, dtype=complex)) * np.asarray(w, dtype=complex) / self.radius**2
        return sum(x**k for k in range(self.cutoff + 1))

    def basis_norms(self, samples: int = 256) -> np.ndarray:
        t = TWO_PI * np.arange(samples) / samples
        z = self.radius * np.exp(1j * t)
        return np.array([np.mean(np.abs(self.basis(j, z)) ** 2) for j in range(self.size)])


@dataclass(frozen=True, eq=False)
class ToeplitzTruncation(object):
    matrix: np.ndarray
    label: str
    level: int
    cutoff: int

    @property
    def shape(self):
        return self.matrix.shape


def toeplitz_matrix(coeffs: SymbolCoefficients, trunc: HardyTruncation) -> ToeplitzTruncation:
    K = trunc.cutoff
    if coeffs.harmonics < K:
        raise InsufficientHarmonicsError(
            rf'a cutoff of {K} needs at least {K} harmonics (only {coeffs.harmonics} available)'
        )
    H = coeffs.harmonics
    column = coeffs.values[H : H + K + 1]
    row = coeffs.values[H - K : H + 1][::-1]
    return ToeplitzTruncation(
        matrix=scipy.linalg.toeplitz(column, row), label=coeffs.label, level=trunc.level, cutoff=K
    )


# =======================================================================================================================
# DIRAC DIAGONALS
# =======================================================================================================================


@dataclass(frozen=True)
class DiracDiagonal(object):
    """
    The diagonal operator with eigenvalue α*j + β on degree j, j = 0..K.
    `rank` is the number of complex variables: degree j carries C(j + rank - 1, rank - 1) basis vectors.
    """

    alpha: float
    beta: float
    cutoff: int
    rank: int = 1

    @property
    def entries(self) -> np.ndarray:
        return self.alpha * np.arange(self.cutoff + 1, dtype=float) + self.beta

    @property
    def multiplicities(self) -> np.ndarray:
        return np.array([math.comb(j + self.rank - 1, self.rank - 1) for j in range(self.cutoff + 1)])

    @property
    def spectrum(self) -> np.ndarray:
        return np.repeat(self.entries, self.multiplicities)

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.spectrum)

    @property
    def smallest(self) -> float:
        return self.beta

    @property
    def inverse_norm(self) -> float:
        return 1.0 / self.beta

    def count(self, lam):
        """Number of eigenvalues <= lam, with multiplicity."""
        lam = np.asarray(lam, dtype=float)
        J = np.clip(np.floor((lam - self.beta) / self.alpha) + 1.0, 0.0, self.cutoff + 1.0)
        if self.rank == 1:
            return J
        return comb(J + self.rank - 1, self.rank)


def dirac_diagonal(alpha: float, beta: float, K: int, rank: int = 1) -> DiracDiagonal:
    alpha, beta = float(alpha), float(beta)
    if not (alpha > 0.0 and math.isfinite(alpha)):
        raise DomainError(rf'dirac weight alpha must be positive and finite (got {alpha})')
    if not (beta > 0.0 and math.isfinite(beta)):
        raise DomainError(rf'dirac offset beta must be positive and finite (got {beta})')
    if K < 0:
        raise DomainError(rf'cutoff must be >= 0 (got {K})')
    if rank < 1:
        raise DomainError(rf'rank must be >= 1 (got {rank})')
    return DiracDiagonal(alpha, beta, int(K), int(rank))


# =======================================================================================================================
# COMMUTATORS AND NORMS
# =======================================================================================================================


def _as_matrix(x) -> np.ndarray:
    if hasattr(x, r'matrix'):
        x = x.matrix
    return np.asarray(x)


def commutator(A, B) -> np.ndarray:
    A, B = _as_matrix(A), _as_matrix(B)
    if A.ndim != 2 or A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise DomainError(rf'commutator needs two square matrices of equal shape (got {A.shape} and {B.shape})')
    return A @ B - B @ A


def _power_iterate(M, x, tol, max_iter):
    x = x / np.linalg.norm(x)
    lam = 0.0
    change = math.inf
    for _ in range(max_iter):
        y = M @ x
        lam_new = float(np.vdot(y, y).real)
        if lam_new == 0.0:
            return 0.0, True, x
        g = M.conj().T @ y
        residual = float(np.linalg.norm(g - lam_new * x))
        change = abs(lam_new - lam)
        lam = lam_new
        x = g / np.linalg.norm(g)
        if residual <= tol * lam:
            return lam, True, x
    return lam, change <= tol * lam, x


def operator_norm(M, tol: float = 1e-10, max_iter: int = 10_000, rng: np.random.Generator = None) -> float:
    """
    Largest singular value by power iteration on M*M, started from the normalized all-ones vector and
    from one random vector. Converged when the eigen-residual of M*M drops below tol * λ.
    """
    M = _as_matrix(M)
    if not np.all(np.isfinite(M)):
        raise DomainError(r'operator_norm needs finite entries')
    if M.size == 0 or not np.any(M):
        return 0.0
    n = M.shape[1]
    if rng is None:
        rng = np.random.default_rng(0)
    starts = (np.ones(n, dtype=complex), rng.standard_normal(n) + 1j * rng.standard_normal(n))
    best = 0.0
    converged = False
    for start in starts:
        lam, ok, _ = _power_iterate(M, start, tol, max_iter)
        if lam >= best:
            best = lam
            converged = ok
    if not converged:
        raise NumericError(
            rf'power iteration did not converge in {max_iter} iterations (best estimate {math.sqrt(best)})',
            estimate=math.sqrt(best),
        )
    return math.sqrt(best)


# =======================================================================================================================
# IDENTITY CHECKS
# =======================================================================================================================


def radial_operator(K: int) -> np.ndarray:
    """R = z d/dz on e_0..e_K."""
    return np.diag(np.arange(K + 1, dtype=float))


def _central_block(matrix, margin):
    K = matrix.shape[0] - 1
    return matrix[margin : K - margin + 1, margin : K - margin + 1]


def verify_hardy_commutator(
    chart, a: int, b: int, trunc: HardyTruncation, margin: int, order: int = DEFAULT_ORDER
) -> float:
    """
    max |[R, T_u] - T_π| over the central block, u = κ^a κ̄^b and π = (R - R̄)u.
    Both sides are assembled independently: the left from the Toeplitz matrix of u, the right from
    quadrature of the closed-form radial derivative.
    """
    K = trunc.cutoff
    if margin < a + b:
        raise DomainError(rf'margin {margin} must be at least the symbol degree {a + b}')
    if 2 * margin > K:
        raise DomainError(rf'margin {margin} is too large for cutoff {K}')
    H = K + a + b
    T = toeplitz_matrix(fourier_coefficients(chart, (a, b), H, order), trunc)
    lhs = commutator(radial_operator(K), T.matrix)
    rhs = toeplitz_matrix(commutator_symbol(chart, a, b, H, order), trunc).matrix
    return float(np.max(np.abs(_central_block(lhs - rhs, margin))))


# =======================================================================================================================
# COMMUTATOR BOUND TABLES
# =======================================================================================================================


@dataclass(frozen=True)
class BoundRow(object):
    level: int
    alpha: float
    commutator_norm: float
    representation_norm: float
    words: int
    sampled: bool

    def to_dict(self):
        return {
            r'level': self.level,
            r'alpha': self.alpha,
            r'commutator_norm': self.commutator_norm,
            r'representation_norm': self.representation_norm,
            r'words': self.words,
            r'sampled': self.sampled,
        }


@dataclass(frozen=True)
class BoundTable(object):
    symbol: str
    cutoff: int
    rows: typing.Tuple[BoundRow, ...]

    @property
    def commutator_norms(self):
        return [r.commutator_norm for r in self.rows]

    @property
    def representation_norms(self):
        return [r.representation_norm for r in self.rows]

    @property
    def bounded(self) -> bool:
        """The measured norms do not grow: last level <= 1.5 x first level."""
        norms = self.commutator_norms
        if not norms:
            return True
        return all(math.isfinite(v) for v in norms) and norms[-1] <= 1.5 * norms[0] + 1e-12

    def to_dict(self):
        return {
            r'symbol': self.symbol,
            r'cutoff': self.cutoff,
            r'rows': [r.to_dict() for r in self.rows],
            r'bounded': self.bounded,
        }


def level_words(N: int, m: int, max_words: int, rng: np.random.Generator):
    """All words of level m, or a sorted random sample of at most max_words of them."""
    if N**m <= max_words:
        return list(enumerate_words(N, m, budget=None)), False
    letters = rng.integers(1, N + 1, size=(max_words, m))
    return sorted({Word(tuple(int(l) for l in row)) for row in letters}), True


def _word_norms(task):
    poly, ifs, symbol, K, alpha, order, seed, level, index, w = task
    chart = mobius_chart(poly, ifs, w)
    trunc = HardyTruncation.for_level(ifs.ratio, level, K)
    T = toeplitz_matrix(fourier_coefficients(chart, symbol, K, order), trunc)
    rng = np.random.default_rng([seed, level, index])
    comm = operator_norm(alpha * commutator(radial_operator(K), T.matrix), rng=rng)
    rep = operator_norm(T.matrix, rng=rng)
    return comm, rep


def commutator_bound_table(
    poly: Polygon,
    ifs: IfsSystem,
    p: SymbolPolynomial,
    levels,
    K: int,
    alpha: typing.Callable[[int], float],
    max_words: int = 256,
    seed: int = 0,
    order: int = DEFAULT_ORDER,
    mapper=map,
) -> BoundTable:
    """
    Per level m: the maxima over words of ‖[α_m R, T_{p∘κ_w}]‖ and ‖T_{p∘κ_w}‖.
    Levels with more than `max_words` words are subsampled (flagged in the row).
    `mapper` may be an executor's map; results are reduced in word order.
    """
    rows = []
    for m in levels:
        words, sampled = level_words(ifs.N, m, max_words, np.random.default_rng([seed, m]))
        a_m = float(alpha(m))
        tasks = [(poly, ifs, p, K, a_m, order, seed, m, i, w) for i, w in enumerate(words)]
        norms = list(mapper(_word_norms, tasks))
        rows.append(
            BoundRow(
                level=int(m),
                alpha=a_m,
                commutator_norm=max(c for c, _ in norms),
                representation_norm=max(r for _, r in norms),
                words=len(words),
                sampled=sampled,
            )
        )
    return BoundTable(symbol=p.label, cutoff=K, rows=tuple(rows))


__all__ = [
    'DEFAULT_ORDER',
    'MAX_HARMONICS',
    'SymbolPolynomial',
    'SymbolCoefficients',
    'quadrature_nodes',
    'fourier_coefficients',
    'commutator_symbol',
    'symbol_commutator_coefficients',
    'HardyTruncation',
    'ToeplitzTruncation',
    'toeplitz_matrix',
    'DiracDiagonal',
    'dirac_diagonal',
    'commutator',
    'operator_norm',
    'radial_operator',
    'verify_hardy_commutator',
    'BoundRow',
    'BoundTable',
    'level_words',
    'commutator_bound_table',
]
