#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT
"""
Spectral zeta series of the integrated (direct sum) triples, spectral dimension estimators and the
integrability checks on norm and resolvent tables.
"""

from dataclasses import dataclass, field

import scipy.optimize
import scipy.special
import scipy.stats
from numpy.polynomial import polynomial as npoly

from .bergman import *
from .toeplitz import *
from .utils import *

ASYMPTOTIC_OFFSET = 1e6
"""Hurwitz sums with offsets above this use their asymptotic expansion."""

DEFAULT_RATIO_LEVEL = 12

MIN_COUNT = 1000

MAX_SPECTRUM_LEVELS = 20_000

LOG_FLOAT_MAX = math.log(sys.float_info.max)

# =======================================================================================================================
# HURWITZ SUMS
# =======================================================================================================================


def _log_hurwitz(s: float, log_x: float) -> float:
    """log Σ_{j>=0} (j + x)^{-s}, s > 1."""
    if log_x > math.log(ASYMPTOTIC_OFFSET):
        # Euler-Maclaurin: x^{1-s}/(s-1) (1 + (s-1)/(2x) + s(s-1)/(12x²))
        inv = math.exp(-log_x)
        correction = (s - 1.0) * inv / 2.0 + s * (s - 1.0) * inv * inv / 12.0
        return (1.0 - s) * log_x - math.log(s - 1.0) + math.log1p(correction)
    val = float(scipy.special.zeta(s, math.exp(log_x)))
    if not val > 0.0:
        return (1.0 - s) * log_x - math.log(s - 1.0)
    return math.log(val)


def polynomial_hurwitz(roots, scale: float, s: float, start: float) -> float:
    """Σ_{u = start, start+1, ...} Π_i (u - r_i) / scale · u^{-s}; needs s > len(roots) + 1."""
    roots = list(roots)
    if s <= len(roots) + 1:
        return math.inf
    coeffs = npoly.polyfromroots(roots) if roots else np.array([1.0])
    terms = [float(c) * float(scipy.special.zeta(s - k, start)) for k, c in enumerate(coeffs)]
    return math.fsum(terms) / scale


# =======================================================================================================================
# SERIES
# =======================================================================================================================


def ell_lower_bound(c: float, N: int) -> float:
    """log N / log(cN): the weight exponent ℓ must exceed this."""
    if not 0.0 < c < 1.0:
        raise DomainError(rf'contraction ratio must lie in (0, 1) (got {c})')
    if c * N <= 1.0:
        raise DomainError(rf'cN = {c * N:g} must exceed 1')
    return math.log(N) / math.log(c * N)


def check_ell(c: float, N: int, ell: float) -> float:
    bound = ell_lower_bound(c, N)
    if not ell > bound:
        raise DomainError(rf'ℓ = {ell:g} is not admissible: it must exceed log N / log(cN) = {bound:.6f}')
    return bound


def _exp(x: float) -> float:
    """exp(x), saturating to inf instead of raising."""
    return math.exp(x) if x < LOG_FLOAT_MAX else math.inf


def log_fractal_weights(c: float, N: int, ell: float, m: int):
    """(log α_m, log β_m) with α_m = c^{-ℓm} N^{-m(ℓ-1)} and β_m = c^{-ℓm}."""
    log_beta = -ell * m * math.log(c)
    return log_beta - m * (ell - 1.0) * math.log(N), log_beta


def fractal_weights(c: float, N: int, ell: float, m: int):
    """(α_m, β_m); either saturates to inf (or 0) once it leaves the float range."""
    log_alpha, log_beta = log_fractal_weights(c, N, ell, m)
    return _exp(log_alpha), _exp(log_beta)


@dataclass(frozen=True)
class SpectrumBlock(object):
    level: int
    dirac: DiracDiagonal
    copies: float = 1.0

    def count(self, lam):
        return self.copies * self.dirac.count(lam)


@dataclass(frozen=True, eq=False)
class ZetaSeries(object):
    """
    Σ_m copies^m Σ_j mult(j) (α_m j + β_m)^{-s}: the spectral zeta function of a direct sum of diagonal
    Dirac operators, level by level. Weights are carried as logarithms so that steep families stay finite.
    """

    family: str
    parameters: typing.Dict[str, float]
    copies: float
    log_weights: typing.Callable[[int], typing.Tuple[float, float]]
    rank: int = 1
    geometric: bool = True
    log_ratio_limit: typing.Optional[typing.Callable[[float], float]] = None

    def weights(self, m: int) -> typing.Tuple[float, float]:
        log_alpha, log_beta = self.log_weights(m)
        return _exp(log_alpha), _exp(log_beta)

    def ratio_limit(self, s: float) -> typing.Optional[float]:
        """lim a_{m+1}(s) / a_m(s), or None for series whose terms are not eventually geometric."""
        if self.log_ratio_limit is None:
            return None
        return _exp(self.log_ratio_limit(s))

    def log_term(self, m: int, s: float) -> float:
        log_alpha, log_beta = self.log_weights(m)
        if self.rank == 1:
            if s <= 1.0:
                return math.inf
            inner = _log_hurwitz(s, log_beta - log_alpha)
        else:
            x = math.exp(log_beta - log_alpha)
            val = polynomial_hurwitz([x - i for i in range(1, self.rank)], math.factorial(self.rank - 1), s, x)
            if math.isinf(val):
                return math.inf
            if not val > 0.0:
                raise NumericError(rf'{self.family} level {m}: cancellation in the inner sum at s={s}', estimate=val)
            inner = math.log(val)
        return m * math.log(self.copies) - s * log_alpha + inner

    def term(self, m: int, s: float) -> float:
        return _exp(self.log_term(m, s))

    def ratio(self, s: float, level: int = DEFAULT_RATIO_LEVEL) -> float:
        """a_{level+1}(s) / a_level(s)."""
        return _exp(self.log_term(level + 1, s) - self.log_term(level, s))

    def dirac(self, m: int, K: int) -> DiracDiagonal:
        alpha, beta = self.weights(m)
        return dirac_diagonal(alpha, beta, K, rank=self.rank)

    def spectra(self, lambda_max: float, max_levels: int = MAX_SPECTRUM_LEVELS) -> typing.List[SpectrumBlock]:
        """Every level holding an eigenvalue <= lambda_max, each truncated just above lambda_max."""
        blocks = []
        log_lambda = math.log(lambda_max)
        for m in range(max_levels + 1):
            log_alpha, log_beta = self.log_weights(m)
            if log_beta > log_lambda:
                return blocks
            alpha, beta = _exp(log_alpha), _exp(log_beta)
            K = int(math.floor((lambda_max - beta) / alpha)) + 1
            blocks.append(SpectrumBlock(level=m, dirac=self.dirac(m, K), copies=float(self.copies) ** m))
        raise ResourceError(rf'{self.family}: eigenvalues up to {lambda_max:g} need more than {max_levels} levels')

    def to_dict(self):
        return {r'family': self.family, r'parameters': dict(self.parameters), r'rank': self.rank}


def fractal_series(c: float, N: int, ell: float) -> ZetaSeries:
    check_ell(c, N, ell)
    return ZetaSeries(
        family=r'fractal',
        parameters={r'c': c, r'N': N, r'ell': ell},
        copies=float(N),
        log_weights=lambda m: log_fractal_weights(c, N, ell, m),
        log_ratio_limit=lambda s: ell * (s * math.log(c) + math.log(N)),
    )


def disk_fractal_series(c: float, N: int) -> ZetaSeries:
    if not 0.0 < c < 1.0:
        raise DomainError(rf'contraction ratio must lie in (0, 1) (got {c})')

    def log_weights(m):
        # α_m = c^{-2m} / (N^m + 1), β_m = c^{-2m} (N^m + 2) / (N^m + 1)
        log_scale = -2.0 * m * math.log(c)
        log_denominator = float(np.logaddexp(m * math.log(N), 0.0))
        return log_scale - log_denominator, log_scale + math.log1p(math.exp(-log_denominator))

    return ZetaSeries(
        family=r'disk',
        parameters={r'c': c, r'N': N},
        copies=float(N),
        log_weights=log_weights,
        log_ratio_limit=lambda s: 2.0 * (s * math.log(c) + math.log(N)),
    )


def bergman_series(n: int) -> ZetaSeries:
    """Levels are weight exponents m; α_m (T_{-r})^{-1} with α_m = m + 1 has eigenvalue k + m + n + 1."""
    if n < 1:
        raise DomainError(rf'complex dimension n must be >= 1 (got {n})')
    return ZetaSeries(
        family=r'bergman',
        parameters={r'n': n},
        copies=1.0,
        log_weights=lambda m: (0.0, math.log(m + n + 1)),
        rank=n,
        geometric=False,
    )


def fractal_zeta_log_terms(c: float, N: int, ell: float, s: float, levels, J_cut: int = 64) -> np.ndarray:
    """
    Logarithms of the per-level terms N^m α_m^{-s} Σ_j (j + β_m/α_m)^{-s}: the first J_cut inner terms
    summed explicitly, the rest by the midpoint integral (x + J_cut - 1/2)^{1-s} / (s - 1).
    """
    check_ell(c, N, ell)
    if not s > 1.0:
        raise DomainError(rf'the inner sums diverge for s <= 1 (got s={s})')
    if J_cut < 1:
        raise DomainError(rf'J_cut must be >= 1 (got {J_cut})')
    out = []
    j = np.arange(J_cut, dtype=float)
    for m in levels:
        log_alpha, log_beta = log_fractal_weights(c, N, ell, m)
        log_x = log_beta - log_alpha
        inv_x = math.exp(-log_x)
        # x^{-s} is factored out of both parts so that huge offsets stay representable
        explicit = math.fsum(np.power(1.0 + j * inv_x, -s))
        log_tail = log_x + (1.0 - s) * math.log1p((J_cut - 0.5) * inv_x) - math.log(s - 1.0)
        log_inner = -s * log_x + float(np.logaddexp(math.log(explicit), log_tail))
        out.append(m * math.log(N) - s * log_alpha + log_inner)
    return np.array(out)


def fractal_zeta_terms(c: float, N: int, ell: float, s: float, levels, J_cut: int = 64) -> np.ndarray:
    with np.errstate(over=r'ignore'):
        return np.exp(fractal_zeta_log_terms(c, N, ell, s, levels, J_cut))


# =======================================================================================================================
# BERGMAN ZETA SUMS
# =======================================================================================================================


@dataclass(frozen=True)
class PartialSum(object):
    explicit: float
    tail_bound: float

    @property
    def upper(self) -> float:
        return self.explicit + self.tail_bound

    def brackets(self, value: float) -> bool:
        return self.explicit <= value <= self.upper

    def to_dict(self):
        return {r'explicit': self.explicit, r'tail_bound': self.tail_bound, r'upper': self.upper}


def _bergman_tail(n: int, s: float, M: int) -> float:
    """Σ_{m>M} Σ_k C(k+n-1, n-1) (k+m+n+1)^{-s} = Σ_{t>=M+n+2} C(t-M-2, n) t^{-s}."""
    return polynomial_hurwitz([M + 2 + i for i in range(n)], math.factorial(n), s, M + n + 2)


def bergman_zeta(n: int, s: float) -> float:
    """Σ_m Σ_k C(k+n-1, n-1) (k+m+n+1)^{-s}; infinite for s <= n + 1."""
    if n < 1:
        raise DomainError(rf'complex dimension n must be >= 1 (got {n})')
    return _bergman_tail(n, s, -1)


def _power_tail_bound(p: float, start: float) -> float:
    """Σ_{t>=start} t^{-p} <= start^{-p} + start^{1-p}/(p-1), for p > 1."""
    return start ** (-p) + start ** (1.0 - p) / (p - 1.0)


def _bergman_remainder_bound(n: int, s: float, start: int) -> float:
    # C(k+n-1, n-1) <= t^{n-1}/(n-1)! with t = k+m+n+1, then two integral comparisons
    sigma = s - n + 1.0
    inner = _power_tail_bound(sigma, start) + _power_tail_bound(sigma - 1.0, start) / (sigma - 1.0)
    return inner / math.factorial(n - 1)


def bergman_zeta_partial(n: int, s: float, M: int, K: int) -> PartialSum:
    """
    The sum over levels m <= M and grades k <= K, together with an upper bound on everything it leaves out.

    The explicit part is summed along the diagonals t = k + m + n + 1, so it costs O(M + K) rather than O(M K).
    It is nondecreasing in both cutoffs. The bound is infinite for s <= n + 1.
    """
    if n < 1:
        raise DomainError(rf'complex dimension n must be >= 1 (got {n})')
    if not s > 0.0:
        raise DomainError(rf's must be positive (got {s})')
    if M < 0 or K < 0:
        raise DomainError(rf'cutoffs must be >= 0 (got M={M}, K={K})')

    # prefix[j] = Σ_{k<=j} C(k+n-1, n-1) = C(j+n, n); exact while it stays below 2^53
    k = np.arange(K + 1, dtype=float)
    mult = np.ones(K + 1)
    for i in range(1, n):
        mult = mult * (k + i) / i
    prefix = np.concatenate(([0.0], np.cumsum(mult)))

    t = np.arange(n + 1, M + K + n + 2, dtype=float)
    diag = t - (n + 1)
    hi = np.minimum(diag, K).astype(np.int64)
    lo = np.maximum(diag - M, 0).astype(np.int64)
    width = prefix[hi + 1] - prefix[lo]
    explicit = math.fsum(width * np.power(t, -s))

    if s <= n + 1:
        tail_bound = math.inf
    else:
        # levels beyond M (all grades), then grades beyond K (all levels)
        tail_bound = _bergman_remainder_bound(n, s, M + n + 2) + _bergman_remainder_bound(n, s, K + n + 2)
    return PartialSum(explicit=explicit, tail_bound=tail_bound)


# =======================================================================================================================
# DIMENSION ESTIMATES
# =======================================================================================================================


@dataclass(frozen=True)
class DimensionEstimate(object):
    value: float
    bracket: typing.Tuple[float, float]
    method: str
    diagnostics: typing.Dict[str, typing.Any] = field(default_factory=dict)

    def __post_init__(self):
        lo, hi = self.bracket
        if not lo <= self.value <= hi:
            raise NumericError(rf'estimate {self.value} lies outside its bracket {self.bracket}', estimate=self.value)

    def agrees_with(self, target: float, tol: float) -> bool:
        return abs(self.value - target) <= tol

    def to_dict(self):
        return {
            r'value': self.value,
            r'bracket': list(self.bracket),
            r'method': self.method,
            r'diagnostics': self.diagnostics,
        }


def estimate_abscissa(
    series: ZetaSeries,
    bracket: typing.Tuple[float, float],
    tol: float = 1e-6,
    level: int = DEFAULT_RATIO_LEVEL,
    lambda_max: float = None,
) -> DimensionEstimate:
    """
    Root of log(a_{level+1}(s) / a_level(s)) = 0 in the bracket: the abscissa of a series whose terms
    eventually behave like a geometric series. Series without geometric level ratios are handed to
    the counting estimator.
    """
    if not series.geometric:
        if lambda_max is None:
            raise DomainError(rf'{series.family}: a counting fit needs lambda_max')
        return counting_function_dimension(series.spectra(lambda_max), lambda_max)

    s_lo, s_hi = float(bracket[0]), float(bracket[1])
    if not s_lo < s_hi:
        raise DomainError(rf'invalid bracket ({s_lo}, {s_hi})')

    def f(s):
        return series.log_term(level + 1, s) - series.log_term(level, s)

    f_lo, f_hi = f(s_lo), f(s_hi)
    if not (f_lo > 0.0 > f_hi):
        raise DomainError(
            rf'bracket ({s_lo}, {s_hi}) does not straddle the abscissa: '
            + rf'ratios {_exp(f_lo):.6g} and {_exp(f_hi):.6g} (need > 1 and < 1)'
        )
    root = float(scipy.optimize.brentq(f, s_lo, s_hi, xtol=tol / 4.0))
    lo, hi = max(s_lo, root - tol / 2.0), min(s_hi, root + tol / 2.0)
    diagnostics = {
        r'level': level,
        r'ratio_low': _exp(f(lo)),
        r'ratio_high': _exp(f(hi)),
        r'verified': bool(f(lo) >= 0.0 >= f(hi)),
    }
    if series.log_ratio_limit is not None:
        diagnostics[r'limit_ratio_at_estimate'] = series.ratio_limit(root)
    return DimensionEstimate(value=root, bracket=(lo, hi), method=r'ratio-root', diagnostics=diagnostics)


def counting_function_dimension(
    spectra, lambda_max: float, window: typing.Tuple[float, float] = (0.01, 1.0), bins: int = 64
) -> DimensionEstimate:
    """
    Slope of log N(λ) against log λ over log-spaced points of the window (fractions of lambda_max),
    N(λ) counting eigenvalues <= λ with multiplicity across all blocks.
    """
    blocks = [b if isinstance(b, SpectrumBlock) else SpectrumBlock(level=0, dirac=b) for b in spectra]
    if not blocks:
        raise ResourceError(r'no spectra to count')
    lo, hi = window
    if not 0.0 < lo < hi <= 1.0:
        raise DomainError(rf'fit window must satisfy 0 < low < high <= 1 (got {window})')
    if bins < 3:
        raise DomainError(rf'at least three fit points are needed (got {bins})')

    def counts(lam):
        return sum(b.count(lam) for b in blocks)

    total = float(counts(lambda_max))
    if total < MIN_COUNT:
        raise ResourceError(
            rf'only {total:.0f} eigenvalues lie below {lambda_max:g}; the counting fit needs at least {MIN_COUNT}'
        )
    edges = np.linspace(math.log(lo * lambda_max), math.log(hi * lambda_max), bins + 1)
    log_lam = 0.5 * (edges[:-1] + edges[1:])
    N = np.asarray(counts(np.exp(log_lam)), dtype=float)
    if np.any(N <= 0.0):
        raise ResourceError(r'the fit window reaches below the smallest eigenvalue')
    fit = scipy.stats.linregress(log_lam, np.log(N))
    slope, err = float(fit.slope), float(fit.stderr)
    return DimensionEstimate(
        value=slope,
        bracket=(slope - 2.0 * err, slope + 2.0 * err),
        method=r'counting-fit',
        diagnostics={
            r'lambda_max': lambda_max,
            r'count': total,
            r'window': list(window),
            r'bins': bins,
            r'levels': len(blocks),
            r'stderr': err,
            r'r_squared': float(fit.rvalue) ** 2,
        },
    )


# =======================================================================================================================
# INTEGRABILITY CONDITIONS
# =======================================================================================================================


@dataclass(frozen=True)
class ResolventDecay(object):
    values: typing.Tuple[float, ...]
    threshold: float
    decreasing: bool

    @property
    def passed(self) -> bool:
        return self.decreasing and bool(self.values) and self.values[-1] < self.threshold

    def to_dict(self):
        return {
            r'values': list(self.values),
            r'threshold': self.threshold,
            r'decreasing': self.decreasing,
            r'passed': self.passed,
        }


def resolvent_decay_check(family, threshold: float = 0.1) -> ResolventDecay:
    """
    ‖(1 + α_m² D_m²)^{-1/2}‖ per level for pairs (α_m, D_m), D_m a DiracDiagonal or its smallest
    eigenvalue. The map λ -> (1 + α²λ²)^{-1/2} decreases, so the norm is attained at λ_min.
    """
    values = []
    for alpha, d in family:
        lam = d.smallest if isinstance(d, DiracDiagonal) else float(d)
        if not lam > 0.0:
            raise DomainError(rf'spectra must be positive (got smallest eigenvalue {lam})')
        values.append(1.0 / math.sqrt(1.0 + (alpha * lam) ** 2))
    decreasing = len(values) > 1 and all(b < a for a, b in zip(values, values[1:]))
    return ResolventDecay(values=tuple(values), threshold=threshold, decreasing=decreasing)


@dataclass(frozen=True)
class UniformBound(object):
    norms: typing.Tuple[float, ...]
    sup: float
    increasing: bool
    bound: typing.Optional[float] = None

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.sup):
            return False
        if self.bound is not None:
            return self.sup <= self.bound + 1e-9
        return not self.increasing

    def to_dict(self):
        return {
            r'norms': list(self.norms),
            r'sup': self.sup,
            r'increasing': self.increasing,
            r'bound': self.bound,
            r'passed': self.passed,
        }


def uniform_bound_check(norms, bound: float = None) -> UniformBound:
    """
    Supremum of per-level norms. With a known bound the verdict is sup <= bound; otherwise a strictly
    increasing sequence is flagged as a failure.
    """
    norms = tuple(float(v) for v in norms)
    return UniformBound(
        norms=norms,
        sup=max(norms, default=0.0),
        increasing=is_strictly_increasing(norms),
        bound=None if bound is None else float(bound),
    )


__all__ = [
    'polynomial_hurwitz',
    'ell_lower_bound',
    'check_ell',
    'log_fractal_weights',
    'fractal_weights',
    'SpectrumBlock',
    'ZetaSeries',
    'fractal_series',
    'disk_fractal_series',
    'bergman_series',
    'fractal_zeta_log_terms',
    'fractal_zeta_terms',
    'PartialSum',
    'bergman_zeta',
    'bergman_zeta_partial',
    'DimensionEstimate',
    'estimate_abscissa',
    'counting_function_dimension',
    'ResolventDecay',
    'resolvent_decay_check',
    'UniformBound',
    'uniform_bound_check',
]
