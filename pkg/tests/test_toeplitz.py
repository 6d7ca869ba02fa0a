#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT

import math

import numpy as np
import pytest

from ncdim.charts import *
from ncdim.ifs import *
from ncdim.spectral import fractal_weights
from ncdim.toeplitz import *
from ncdim.utils import DomainError, InsufficientHarmonicsError


@pytest.fixture
def triangle():
    return sierpinski_polygon(), sierpinski_ifs()


def _unit_mask(H, n):
    out = np.zeros(2 * H + 1, dtype=bool)
    out[n + H] = True
    return out


def test_symbol_descriptions():
    assert SymbolPolynomial.monomial(1, 0).label == 'κ'
    assert SymbolPolynomial({(0, 0): 0.25, (1, 0): 1.0}).describe() == '0.25 + κ'
    assert SymbolPolynomial.monomial(2, 1).degree == 3
    assert not SymbolPolynomial()
    with pytest.raises(DomainError):
        SymbolPolynomial({(-1, 0): 1.0})


def test_constant_symbol_coefficients(triangle):
    chart = mobius_chart(*triangle, Word((2,)))
    coeffs = fourier_coefficients(chart, SymbolPolynomial({(0, 0): 1.0}), 8)
    assert abs(coeffs[0] - 1.0) <= 1e-13
    assert np.max(np.abs(coeffs.values[~_unit_mask(8, 0)])) <= 1e-13


def test_identity_chart_has_a_single_harmonic():
    r = 0.5**3
    coeffs = fourier_coefficients(IdentityChart(r), (1, 0), 6)
    assert abs(coeffs[1] - r) <= 1e-14
    assert np.max(np.abs(coeffs.values[~_unit_mask(6, 1)])) <= 1e-14
    with pytest.raises(InsufficientHarmonicsError):
        coeffs[7]


def test_quadrature_self_convergence(triangle):
    chart = mobius_chart(*triangle, Word())
    coarse = fourier_coefficients(chart, (1, 0), 16, order=32)
    fine = fourier_coefficients(chart, (1, 0), 16, order=128)
    assert np.max(np.abs(coarse.values - fine.values)) <= 1e-12


def test_quadrature_weights_sum_to_the_circle(triangle):
    _, weights, arcs, ts = quadrature_nodes(mobius_chart(*triangle, Word()), 20)
    assert abs(np.sum(weights) - TWO_PI) <= 1e-12
    assert set(arcs.tolist()) == {0, 1, 2}
    assert np.all((ts > 0.0) & (ts < 1.0))


def test_constant_symbol_gives_the_identity(triangle):
    chart = mobius_chart(*triangle, Word((1,)))
    trunc = HardyTruncation.for_level(0.5, 1, 10)
    T = toeplitz_matrix(fourier_coefficients(chart, SymbolPolynomial({(0, 0): 1.0}), 10), trunc)
    assert T.shape == (11, 11)
    assert np.allclose(T.matrix, np.eye(11), atol=1e-13)


def test_real_symbols_give_hermitian_matrices(triangle):
    chart = mobius_chart(*triangle, Word((3,)))
    trunc = HardyTruncation.for_level(0.5, 1, 12)
    T = toeplitz_matrix(fourier_coefficients(chart, (1, 1), 12), trunc).matrix
    assert np.max(np.abs(T - T.conj().T)) <= 1e-12


def test_toeplitz_matrices_are_contractive(triangle):
    chart = mobius_chart(*triangle, Word())
    trunc = HardyTruncation.for_level(0.5, 0, 24)
    T = toeplitz_matrix(fourier_coefficients(chart, (1, 0), 24), trunc)
    t = np.linspace(0.0, 1.0, 2001)
    sup = max(np.max(np.abs(eval_kappa(chart, j, t))) for j in range(chart.M))
    assert operator_norm(T) <= sup + 1e-10


def test_toeplitz_matrix_needs_enough_harmonics(triangle):
    chart = mobius_chart(*triangle, Word())
    with pytest.raises(InsufficientHarmonicsError):
        toeplitz_matrix(fourier_coefficients(chart, (1, 0), 4), HardyTruncation(0, 1.0, 8))


def test_hardy_basis_is_orthonormal():
    trunc = HardyTruncation.for_level(0.5, 3, 8)
    assert trunc.radius == 0.125
    assert np.allclose(trunc.basis_norms(), 1.0, atol=1e-12)
    with pytest.raises(DomainError):
        HardyTruncation(0, 1.0, 0)


def test_dirac_diagonal():
    d = dirac_diagonal(1.0, 1.0, 3)
    assert d.entries.tolist() == [1.0, 2.0, 3.0, 4.0]
    assert d.inverse_norm == 1.0
    assert d.count(2.5) == 2

    d = dirac_diagonal(1.0, 1.0, 3, rank=2)
    assert d.multiplicities.tolist() == [1, 2, 3, 4]
    assert len(d.spectrum) == 10
    assert d.count(2.5) == 3

    for alpha, beta in ((0.0, 1.0), (1.0, -1.0), (math.inf, 1.0)):
        with pytest.raises(DomainError):
            dirac_diagonal(alpha, beta, 3)


def test_fractal_weights():
    alpha, beta = fractal_weights(0.5, 3, 3.0, 2)
    assert alpha == pytest.approx(64.0 / 81.0, rel=1e-14)
    assert beta == pytest.approx(64.0, rel=1e-14)
    d = dirac_diagonal(alpha, beta, 4)
    assert d.inverse_norm == pytest.approx(0.5**6)


def test_commutator_identities(triangle, rng):
    A = rng.standard_normal((6, 6))
    assert not np.any(commutator(A, A))

    d = dirac_diagonal(0.5, 2.0, 5)
    T = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    expected = (d.entries[:, None] - d.entries[None, :]) * T
    assert np.allclose(commutator(d, T), expected, atol=1e-13)

    chart = mobius_chart(*triangle, Word())
    coeffs = fourier_coefficients(chart, (2, 1), 10)
    T = toeplitz_matrix(coeffs, HardyTruncation(0, 1.0, 10)).matrix
    C = commutator(radial_operator(10), T)
    for k in range(11):
        for j in range(11):
            assert abs(C[k, j] - (k - j) * coeffs[k - j]) <= 1e-12

    with pytest.raises(DomainError):
        commutator(np.eye(2), np.eye(3))


def test_commutator_symbol_on_the_identity_chart():
    r = 0.5**2
    chart = IdentityChart(r)
    z = commutator_symbol(chart, 1, 0, 5)
    assert abs(z[1] - r) <= 1e-14
    zbar = commutator_symbol(chart, 0, 1, 5)
    assert np.allclose(zbar.values, -z.conj().values, atol=1e-14)
    assert not np.any(commutator_symbol(chart, 0, 0, 5).values)


def test_commutator_symbol_of_the_modulus_squared(triangle):
    # (R - R̄)|κ|² is purely imaginary, so its coefficients satisfy û(-n) = -conj(û(n))
    chart = mobius_chart(*triangle, Word((1,)))
    coeffs = commutator_symbol(chart, 1, 1, 12)
    assert np.max(np.abs(coeffs.values[::-1] + np.conj(coeffs.values))) <= 1e-12


def test_operator_norm(rng):
    assert operator_norm(np.diag([1.0, 2.0, 3.0])) == pytest.approx(3.0, rel=1e-12)
    assert operator_norm(np.zeros((4, 4))) == 0.0

    u = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    v = rng.standard_normal(7)
    rank_one = np.outer(u, v.conj())
    assert operator_norm(rank_one) == pytest.approx(np.linalg.norm(u) * np.linalg.norm(v), rel=1e-10)

    M = rng.standard_normal((50, 50)) + 1j * rng.standard_normal((50, 50))
    assert operator_norm(M) == pytest.approx(np.linalg.norm(M, 2), rel=1e-9)

    with pytest.raises(DomainError):
        operator_norm(np.array([[1.0, np.nan], [0.0, 1.0]]))


def test_hardy_identity_on_the_identity_chart():
    trunc = HardyTruncation(0, 1.0, 16)
    assert verify_hardy_commutator(IdentityChart(1.0), 1, 0, trunc, 1) <= 1e-13


def test_hardy_identity_on_triangle_charts(triangle):
    poly, ifs = triangle
    chart = mobius_chart(poly, ifs, Word())
    assert verify_hardy_commutator(chart, 1, 0, HardyTruncation.for_level(0.5, 0, 64), 4) <= 1e-8

    chart = mobius_chart(poly, ifs, Word((1,)))
    assert verify_hardy_commutator(chart, 2, 1, HardyTruncation.for_level(0.5, 1, 64), 8) <= 1e-8


def test_hardy_identity_margins(triangle):
    chart = mobius_chart(*triangle, Word())
    with pytest.raises(DomainError):
        verify_hardy_commutator(chart, 2, 1, HardyTruncation(0, 1.0, 16), 2)
    with pytest.raises(DomainError):
        verify_hardy_commutator(chart, 1, 0, HardyTruncation(0, 1.0, 16), 9)


def test_level_words_subsamples_large_levels():
    words, sampled = level_words(3, 2, 16, np.random.default_rng(0))
    assert len(words) == 9 and not sampled
    words, sampled = level_words(3, 6, 10, np.random.default_rng(0))
    assert sampled
    assert 0 < len(words) <= 10
    assert words == sorted(words)


def _alpha(m):
    return fractal_weights(0.5, 3, 3.0, m)[0]


def test_bound_table_for_a_constant_symbol(triangle):
    table = commutator_bound_table(*triangle, SymbolPolynomial({(0, 0): 1.0}), [0, 1], 12, _alpha)
    assert all(v <= 1e-12 for v in table.commutator_norms)
    assert all(v == pytest.approx(1.0, rel=1e-10) for v in table.representation_norms)


def test_bound_table_is_bounded_and_linear(triangle):
    p = SymbolPolynomial.monomial(1, 0)
    table = commutator_bound_table(*triangle, p, [0, 1, 2, 3], 32, _alpha, max_words=27)
    assert [r.words for r in table.rows] == [1, 3, 9, 27]
    assert table.bounded
    assert table.to_dict()['bounded']

    doubled = commutator_bound_table(*triangle, 2 * p, [0, 1], 12, _alpha)
    single = commutator_bound_table(*triangle, p, [0, 1], 12, _alpha)
    for a, b in zip(doubled.rows, single.rows):
        assert a.commutator_norm == pytest.approx(2.0 * b.commutator_norm, rel=1e-8)
        assert a.representation_norm == pytest.approx(2.0 * b.representation_norm, rel=1e-8)


def _random_symbol(rng, max_degree=3, max_terms=4):
    powers = [(a, b) for a in range(max_degree + 1) for b in range(max_degree + 1 - a)]
    picks = rng.choice(len(powers), size=rng.integers(1, max_terms + 1), replace=False)
    return SymbolPolynomial({powers[i]: complex(*rng.standard_normal(2)) for i in picks})


def _sampled_sup(chart, symbol, samples=4001):
    t = np.linspace(0.0, 1.0, samples)
    return max(float(np.max(np.abs(symbol.evaluate(eval_kappa(chart, j, t))))) for j in range(chart.M))


@pytest.mark.parametrize('shape', ['triangle', 'square'])
@pytest.mark.parametrize('seed', range(100))
def test_random_symbols_are_contractive_and_adjoint(shape, seed):
    poly, ifs = (sierpinski_polygon(), sierpinski_ifs()) if shape == 'triangle' else (square_polygon(), square_ifs())
    rng = np.random.default_rng([seed, len(shape)])
    w = Word(tuple(rng.integers(1, ifs.N + 1, size=seed % 3)))
    chart = mobius_chart(poly, ifs, w)
    trunc = HardyTruncation.for_level(ifs.ratio, w.level, 16)
    p = _random_symbol(rng)

    T = toeplitz_matrix(fourier_coefficients(chart, p, 16), trunc).matrix
    assert operator_norm(T) <= _sampled_sup(chart, p) + 1e-9

    T_conj = toeplitz_matrix(fourier_coefficients(chart, p.conj(), 16), trunc).matrix
    assert np.max(np.abs(T_conj - T.conj().T)) <= 1e-12


def test_conjugate_symbols():
    p = SymbolPolynomial({(2, 1): 1.0 + 2.0j, (0, 0): 3.0})
    q = p.conj()
    assert q.terms == {(1, 2): 1.0 - 2.0j, (0, 0): 3.0}
    kappa = np.array([0.3 + 0.4j, -1.2j, 2.0])
    assert np.allclose(q.evaluate(kappa), np.conj(p.evaluate(kappa)), atol=1e-14)


def test_hardy_kernel_reproduces_the_truncation(rng):
    trunc = HardyTruncation.for_level(0.5, 2, 8)
    coeffs = rng.standard_normal(trunc.size) + 1j * rng.standard_normal(trunc.size)

    def f(z):
        return sum(c * trunc.basis(k, z) for k, c in enumerate(coeffs))

    z = trunc.radius * np.exp(1j * TWO_PI * np.arange(64) / 64)
    for w in (0.0, 0.3 * trunc.radius * np.exp(0.7j), trunc.radius * np.exp(2.1j)):
        assert np.mean(f(z) * np.conj(trunc.kernel(w, z))) == pytest.approx(complex(f(w)), abs=1e-12)
        assert trunc.kernel(z[3], w) == pytest.approx(np.conj(trunc.kernel(w, z[3])), abs=1e-12)
    assert np.allclose(trunc.kernel(z, z), trunc.size, atol=1e-12)
