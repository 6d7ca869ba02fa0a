#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT
"""
Weighted Bergman spaces A²_m on the unit ball of C^n and on the shrinking disks of the disk-based
fractal construction.

Every operator here is a finite section in an orthonormal monomial basis, ordered by total degree
(grade) and, within a grade, by descending lexicographic order of the multi-index. Images that would
leave the top grade are dropped.
"""

import itertools
from dataclasses import dataclass

from scipy.special import gammaln

from .toeplitz import *
from .utils import *

DEFAULT_BASIS_BUDGET = 5000
"""Largest number of basis vectors a dense ball operator may be built on."""

LOG_OVERFLOW = math.log(1e300)

# =======================================================================================================================
# BASES
# =======================================================================================================================


@dataclass(frozen=True, eq=False)
class BallBasis(object):
    n: int
    m: float
    K: int
    indices: typing.Tuple[typing.Tuple[int, ...], ...]
    grades: np.ndarray
    log_constants: np.ndarray
    """log of ((|α|+m+n)! / ((m+n)! α!))^{1/2}, via the gamma function so that real m works too."""

    def __post_init__(self):
        object.__setattr__(self, r'_positions', {a: i for i, a in enumerate(self.indices)})

    @property
    def size(self) -> int:
        return len(self.indices)

    def __len__(self):
        return self.size

    def index(self, alpha) -> int:
        return self._positions[tuple(alpha)]

    def __contains__(self, alpha):
        return tuple(alpha) in self._positions

    @property
    def constants(self) -> np.ndarray:
        return np.exp(self.log_constants)

    def grade_mask(self, lo: int, hi: int) -> np.ndarray:
        return (self.grades >= lo) & (self.grades <= hi)


def _multi_indices(n: int, grade: int):
    """Multi-indices of the given grade, descending lexicographic."""
    return [a for a in itertools.product(range(grade, -1, -1), repeat=n) if sum(a) == grade]


def ball_basis(n: int, m: float, K: int, budget: int = DEFAULT_BASIS_BUDGET) -> BallBasis:
    if n < 1:
        raise DomainError(rf'complex dimension n must be >= 1 (got {n})')
    if not m > -1.0:
        raise DomainError(rf'weight exponent m must be > -1 (got {m})')
    if K < 1:
        raise DomainError(rf'cutoff K must be >= 1 (got {K})')
    count = math.comb(K + n, n)
    if budget is not None and count > budget:
        raise ResourceError(rf'a basis of {count} monomials (n={n}, K={K}) exceeds the budget of {budget}')

    indices = []
    for g in range(K + 1):
        indices.extend(_multi_indices(n, g))
    alphas = np.array(indices, dtype=float).reshape(len(indices), n)
    grades = alphas.sum(axis=1).astype(int)
    log_constants = 0.5 * (
        gammaln(grades + m + n + 1.0) - gammaln(m + n + 1.0) - gammaln(alphas + 1.0).sum(axis=1)
    )
    return BallBasis(n=n, m=float(m), K=K, indices=tuple(indices), grades=grades, log_constants=log_constants)


# =======================================================================================================================
# OPERATORS
# =======================================================================================================================


@dataclass(frozen=True, eq=False)
class BallOperator(object):
    matrix: np.ndarray
    basis: BallBasis
    label: str = r''
    truncated: bool = False
    """Some images left the top grade and were dropped."""

    @property
    def shape(self):
        return self.matrix.shape


def _check_coordinate(basis: BallBasis, j: int):
    if not 0 <= j < basis.n:
        raise DomainError(rf'coordinate {j} out of range for n={basis.n}')


def _raising(basis: BallBasis, j: int, weight) -> np.ndarray:
    out = np.zeros((basis.size, basis.size))
    for col, alpha in enumerate(basis.indices):
        if basis.grades[col] == basis.K:
            continue
        target = list(alpha)
        target[j] += 1
        out[basis.index(target), col] = weight(alpha)
    return out


def shift(basis: BallBasis, j: int) -> BallOperator:
    """The isometry S_j: u_α -> u_{α+1_j}."""
    _check_coordinate(basis, j)
    return BallOperator(_raising(basis, j, lambda a: 1.0), basis, rf'S{j}', truncated=True)


def number_operator(basis: BallBasis, j: int = None) -> BallOperator:
    """R_j (multiplicity of z_j), or R = Σ R_j when j is None."""
    if j is None:
        return BallOperator(np.diag(basis.grades.astype(float)), basis, r'R')
    _check_coordinate(basis, j)
    return BallOperator(np.diag([float(a[j]) for a in basis.indices]), basis, rf'R{j}')


def toeplitz_zj(basis: BallBasis, j: int) -> BallOperator:
    """T_{z_j} = S_j ((R_j + 1) / (R + m + n + 1))^{1/2}."""
    _check_coordinate(basis, j)
    extra = basis.m + basis.n + 1.0
    return BallOperator(
        _raising(basis, j, lambda a: math.sqrt((a[j] + 1.0) / (sum(a) + extra))),
        basis,
        rf'T[z{j}]',
        truncated=True,
    )


def inverse_toeplitz_r(basis: BallBasis) -> BallOperator:
    """(T_{-r})^{-1} = (R + m + n + 1) / (m + 1), r(z) = |z|² - 1."""
    entries = (basis.grades + basis.m + basis.n + 1.0) / (basis.m + 1.0)
    return BallOperator(np.diag(entries), basis, r'T[-r]^-1')


def _powers(alpha, n: int) -> typing.Tuple[int, ...]:
    if isinstance(alpha, (int, np.integer)):
        alpha = (int(alpha),)
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != n:
        raise DomainError(rf'multi-index {alpha} does not have {n} entries')
    if any(a < 0 for a in alpha):
        raise DomainError(rf'multi-index {alpha} has negative entries')
    return alpha


def toeplitz_monomial(basis: BallBasis, alpha, beta) -> BallOperator:
    """T_{z^α z̄^β} = (Π_j T*_{z_j}^{β_j}) (Π_j T_{z_j}^{α_j})."""
    alpha = _powers(alpha, basis.n)
    beta = _powers(beta, basis.n)
    if 2 * (sum(alpha) + sum(beta)) > basis.K:
        raise DomainError(
            rf'symbol degree {sum(alpha) + sum(beta)} exceeds half the cutoff K={basis.K}; edge effects would dominate'
        )
    out = np.eye(basis.size)
    for j in range(basis.n):
        if alpha[j]:
            T = toeplitz_zj(basis, j).matrix
            out = np.linalg.matrix_power(T, alpha[j]) @ out
    for j in range(basis.n):
        if beta[j]:
            T = toeplitz_zj(basis, j).matrix
            out = np.linalg.matrix_power(T.T, beta[j]) @ out
    return BallOperator(out, basis, rf'T[z^{alpha} zbar^{beta}]', truncated=bool(sum(alpha)))


def ball_polynomial(p, n: int) -> typing.Dict[typing.Tuple[typing.Tuple[int, ...], typing.Tuple[int, ...]], complex]:
    """Normalizes {(α, β): coeff}; in one variable α and β may be plain integers."""
    out = dict()
    for (alpha, beta), coeff in dict(p).items():
        key = (_powers(alpha, n), _powers(beta, n))
        out[key] = out.get(key, 0j) + complex(coeff)
    return {k: v for k, v in out.items() if v != 0}


def polynomial_degree(p) -> int:
    return max((sum(a) + sum(b) for a, b in p), default=0)


def toeplitz_polynomial(basis: BallBasis, p) -> BallOperator:
    p = ball_polynomial(p, basis.n)
    out = np.zeros((basis.size, basis.size), dtype=complex)
    for (alpha, beta), coeff in sorted(p.items()):
        out += coeff * toeplitz_monomial(basis, alpha, beta).matrix
    return BallOperator(out, basis, r'T[p]', truncated=True)


def radial_difference(p):
    """(R - R̄) on symbols: p_{αβ} -> p_{αβ} (|α| - |β|), dropping vanished terms."""
    out = dict()
    for (alpha, beta), coeff in dict(p).items():
        a = (alpha,) if isinstance(alpha, (int, np.integer)) else tuple(alpha)
        b = (beta,) if isinstance(beta, (int, np.integer)) else tuple(beta)
        factor = sum(a) - sum(b)
        if factor != 0 and coeff != 0:
            out[(a, b)] = coeff * factor
    return out


def _interior_residual(basis: BallBasis, difference: np.ndarray, margin: int) -> float:
    mask = basis.grade_mask(margin, basis.K - margin)
    block = difference[np.ix_(mask, mask)]
    return float(np.max(np.abs(block))) if block.size else 0.0


def _check_margin(basis: BallBasis, p, margin: int):
    degree = polynomial_degree(p)
    if margin < degree:
        raise DomainError(rf'margin {margin} must be at least the symbol degree {degree}')
    if 2 * margin > basis.K:
        raise DomainError(rf'margin {margin} is too large for cutoff K={basis.K}')


def verify_bergman_commutator(basis: BallBasis, p, margin: int) -> float:
    """max |[T_{-r}^{-1}, T_p] - T_{(R-R̄)p} / (m+1)| over grades margin..K-margin."""
    p = ball_polynomial(p, basis.n)
    _check_margin(basis, p, margin)
    lhs = commutator(inverse_toeplitz_r(basis), toeplitz_polynomial(basis, p))
    rhs = toeplitz_polynomial(basis, radial_difference(p)).matrix / (basis.m + 1.0)
    return _interior_residual(basis, lhs - rhs, margin)


def ball_dirac(basis: BallBasis, alpha_weight: float) -> DiracDiagonal:
    """α_weight (T_{-r})^{-1} as a graded diagonal: entries α_weight (k + m + n + 1) / (m + 1)."""
    if not alpha_weight > 0.0:
        raise DomainError(rf'dirac weight must be positive (got {alpha_weight})')
    scale = alpha_weight / (basis.m + 1.0)
    return dirac_diagonal(scale, scale * (basis.m + basis.n + 1.0), basis.K, rank=basis.n)


# =======================================================================================================================
# SHRINKING DISKS
# =======================================================================================================================


def disk_fractal_dirac(c: float, N: int, m: int, K: int, logger=None) -> DiracDiagonal:
    """D = c^{-2m} (R + N^m + 2) / (N^m + 1) on the disk of radius c^m with weight exponent N^m."""
    if not 0.0 < c < 1.0:
        raise DomainError(rf'contraction ratio must lie in (0, 1) (got {c})')
    if c * c * N <= 1.0:
        msg = rf'c²N = {c * c * N:g} <= 1; the disk-based triple has no finite spectral dimension'
        log(logger, msg, logging.WARNING)
    weight = float(N) ** m
    scale = c ** (-2.0 * m)
    return dirac_diagonal(scale / (weight + 1.0), scale * (weight + 2.0) / (weight + 1.0), K)


@dataclass(frozen=True, eq=False)
class NormalizationConstants(object):
    log_values: np.ndarray

    @property
    def values(self) -> np.ndarray:
        with np.errstate(over=r'ignore'):
            return np.where(self.log_values <= LOG_OVERFLOW, np.exp(np.minimum(self.log_values, LOG_OVERFLOW)), np.inf)

    def __len__(self):
        return len(self.log_values)


def disk_fractal_basis_constants(c: float, N: int, m: int, K: int) -> NormalizationConstants:
    """c^{-m(N^m+j+1)} ((N^m+j+1)! / (N^m! j! π))^{1/2} for j = 0..K, kept in log space."""
    if not 0.0 < c < 1.0:
        raise DomainError(rf'contraction ratio must lie in (0, 1) (got {c})')
    if K < 0:
        raise DomainError(rf'cutoff must be >= 0 (got {K})')
    weight = float(N) ** m
    j = np.arange(K + 1, dtype=float)
    logs = -m * (weight + j + 1.0) * math.log(c) + 0.5 * (
        gammaln(weight + j + 2.0) - gammaln(weight + 1.0) - gammaln(j + 1.0) - math.log(math.pi)
    )
    return NormalizationConstants(log_values=logs)


def disk_toeplitz_monomial(c: float, N: int, m: int, K: int, a: int, b: int) -> BallOperator:
    """T_{z^a z̄^b} on the disk of radius c^m: c^{m(a+b)} times the unit-disk operator of weight N^m."""
    basis = ball_basis(1, float(N) ** m, K)
    T = toeplitz_monomial(basis, (a,), (b,))
    return BallOperator(c ** (m * (a + b)) * T.matrix, basis, rf'T[z^{a} zbar^{b}] on B_{m}', T.truncated)


def verify_disk_commutator(c: float, N: int, m: int, K: int, p, margin: int) -> float:
    """max |[D, T_p] - α' T_{(R-R̄)p}| over interior grades of the shrinking disk."""
    p = ball_polynomial(p, 1)
    basis = ball_basis(1, float(N) ** m, K)
    _check_margin(basis, p, margin)
    dirac = disk_fractal_dirac(c, N, m, K)

    def disk_operator(q):
        out = np.zeros((basis.size, basis.size), dtype=complex)
        for ((a,), (b,)), coeff in sorted(q.items()):
            out += coeff * disk_toeplitz_monomial(c, N, m, K, a, b).matrix
        return out

    lhs = commutator(dirac, disk_operator(p))
    rhs = dirac.alpha * disk_operator(radial_difference(p))
    return _interior_residual(basis, lhs - rhs, margin)


__all__ = [
    'DEFAULT_BASIS_BUDGET',
    'LOG_OVERFLOW',
    'BallBasis',
    'ball_basis',
    'BallOperator',
    'shift',
    'number_operator',
    'toeplitz_zj',
    'inverse_toeplitz_r',
    'toeplitz_monomial',
    'ball_polynomial',
    'polynomial_degree',
    'toeplitz_polynomial',
    'radial_difference',
    'verify_bergman_commutator',
    'ball_dirac',
    'disk_fractal_dirac',
    'NormalizationConstants',
    'disk_fractal_basis_constants',
    'disk_toeplitz_monomial',
    'verify_disk_commutator',
]
