#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT
"""
The 'actually do the thing' module: one function per experiment kind, and the orchestration around them.
"""

import concurrent.futures as futures
import functools
import itertools

import scipy.special
from colorama import Fore, Style

from .bergman import *
from .charts import *
from .ifs import *
from .project import MIN_CUTOFF, Context
from .report import *
from .spectral import *
from .toeplitz import *
from .utils import *
from .version import *

# =======================================================================================================================
# HELPERS
# =======================================================================================================================


def fan_out(context: Context, func, tasks) -> list:
    """
    Runs func over tasks on the context's thread pool. Results come back in task order regardless of the
    number of threads, so every reduction over them is deterministic.
    """
    tasks = list(tasks)
    threads = min(len(tasks), context.threads)
    if threads <= 1:
        return [func(t) for t in tasks]
    with futures.ThreadPoolExecutor(max_workers=threads) as executor:
        jobs = [executor.submit(func, t) for t in tasks]
        try:
            return [job.result() for job in jobs]
        except:
            try:
                executor.shutdown(wait=False, cancel_futures=True)
            except TypeError:
                executor.shutdown(wait=False)
            raise


def _mapper(context: Context):
    return lambda func, tasks: fan_out(context, func, tasks)


@functools.lru_cache(maxsize=64)
def _basis(n: int, m: float, K: int) -> BallBasis:
    return ball_basis(n, m, K)


def _ball_monomials(n: int, max_degree: int):
    """Every (α, β) pair of n-multi-indices with |α| + |β| <= max_degree, by degree then lexicographic."""
    pairs = [e for e in itertools.product(range(max_degree + 1), repeat=2 * n) if sum(e) <= max_degree]
    pairs.sort(key=lambda e: (sum(e), e))
    return [(tuple(e[:n]), tuple(e[n:])) for e in pairs]


def _disk_monomials(max_degree: int):
    return [(a, d - a) for d in range(max_degree + 1) for a in range(d, -1, -1)]


def _index_str(alpha) -> str:
    return r','.join(str(a) for a in alpha)


def _dimension_target(context: Context):
    c, N = context.config.ratio_and_count()
    return c, N, math.log(N) / math.log(1.0 / c)


# =======================================================================================================================
# VERIFY-BERGMAN
# =======================================================================================================================


def _bergman_case(task):
    n, m, K, alpha, beta, margin = task
    return verify_bergman_commutator(_basis(n, m, K), {(alpha, beta): 1.0}, margin)


def _disk_case(task):
    c, N, level, K, a, b, margin = task
    return verify_disk_commutator(c, N, level, K, {(a, b): 1.0}, margin)


def verify_bergman(context: Context) -> Results:
    p = context.parameters
    results = Results(context.kind, context.config.name, context.seed)
    cutoffs = p[r'K'] if len(p[r'K']) == len(p[r'n']) else p[r'K'] * len(p[r'n'])

    tasks = []
    for n, K in zip(p[r'n'], cutoffs):
        monomials = _ball_monomials(n, p[r'max_degree'])
        context.verbose(rf'n={n}, K={K}: {len(monomials)} monomials, basis of {math.comb(K + n, n)}')
        for m in p[r'm']:
            for alpha, beta in monomials:
                tasks.append((n, m, K, alpha, beta, p[r'margin']))
    residuals = fan_out(context, _bergman_case, tasks)

    rows = []
    worst = dict()
    for (n, m, K, alpha, beta, _), res in zip(tasks, residuals):
        rows.append([n, m, K, _index_str(alpha), _index_str(beta), res])
        worst[(n, m, K)] = max(worst.get((n, m, K), 0.0), res)
    results.table(r'bergman_residuals', (r'n', r'm', r'K', r'alpha', r'beta', r'residual'), rows)
    for (n, m, K), res in worst.items():
        results.at_most(rf'bergman commutator n={n} m={m:g} K={K}', res, p[r'tolerance'])

    if p[r'disk_levels']:
        c, N, K = p[r'disk_c'], p[r'disk_N'], p[r'disk_K']
        if c * c * N <= 1.0:
            context.warning(rf'disk_c² disk_N = {c * c * N:g} <= 1; the disk family has no finite spectral dimension')
        tasks = [
            (c, N, level, K, a, b, p[r'margin'])
            for level in p[r'disk_levels']
            for a, b in _disk_monomials(p[r'max_degree'])
        ]
        residuals = fan_out(context, _disk_case, tasks)
        rows = []
        worst = dict()
        for (_, _, level, _, a, b, _), res in zip(tasks, residuals):
            rows.append([level, a, b, res])
            worst[level] = max(worst.get(level, 0.0), res)
        results.table(r'disk_residuals', (r'level', r'a', r'b', r'residual'), rows)
        for level, res in worst.items():
            # entries of D grow like c^{-2m}; the tolerance is relative to the largest of them
            scale = float(disk_fractal_dirac(c, N, level, K).entries[-1])
            results.at_most(rf'disk commutator level={level}', res, p[r'tolerance'] * max(1.0, scale))

    results.data[r'config'] = context.config.to_dict()
    return results


# =======================================================================================================================
# VERIFY-HARDY
# =======================================================================================================================


def _hardy_case(task):
    poly, ifs, w, a, b, K, margin, order = task
    chart = mobius_chart(poly, ifs, w)
    trunc = HardyTruncation.for_level(ifs.ratio, w.level, K)
    return verify_hardy_commutator(chart, a, b, trunc, margin, order)


def verify_hardy(context: Context) -> Results:
    p = context.parameters
    results = Results(context.kind, context.config.name, context.seed)
    monomials = _disk_monomials(p[r'max_degree'])

    rows = []
    continuity_rows = []
    for system in context.config.systems:
        poly, ifs = system.polygon, system.ifs

        defects = []
        for level in range(p[r'continuity_level'] + 1):
            for w in enumerate_words(ifs.N, level):
                chart = mobius_chart(poly, ifs, w)
                defects.append(continuity_defect(chart))
                continuity_rows.append([system.name, str(w), defects[-1]])
        results.at_most(rf'{system.name}: chart continuity', max(defects), p[r'continuity_tolerance'])

        words = [w for level in range(p[r'max_level'] + 1) for w in enumerate_words(ifs.N, level)]
        tasks = [(poly, ifs, w, a, b, p[r'K'], p[r'margin'], p[r'order']) for w in words for a, b in monomials]
        context.verbose(rf'{system.name}: {len(words)} words x {len(monomials)} monomials')
        residuals = fan_out(context, _hardy_case, tasks)
        for (_, _, w, a, b, _, _, _), res in zip(tasks, residuals):
            rows.append([system.name, str(w), w.level, a, b, res])
        results.at_most(rf'{system.name}: hardy commutator K={p["K"]}', max(residuals), p[r'tolerance'])

        results.data.setdefault(r'hausdorff_dimension', dict())[system.name] = hausdorff_dimension(ifs)

    results.table(r'hardy_residuals', (r'system', r'word', r'level', r'a', r'b', r'residual'), rows)
    results.table(r'chart_continuity', (r'system', r'word', r'defect'), continuity_rows)
    results.data[r'config'] = context.config.to_dict()
    return results


# =======================================================================================================================
# DIMENSION-FRACTAL
# =======================================================================================================================


def _fractal_estimates(context: Context, results: Results, c: float, N: int, target: float):
    p = context.parameters
    rows = []

    # eigenvalues up to c^{-ℓ·count_levels} have to stay inside the float range
    counted = []
    for ell in p[r'ell']:
        log_lam = -ell * p[r'count_levels'] * math.log(c)
        if p[r'counting'] and log_lam > LOG_OVERFLOW:
            context.warning(rf'ℓ={ell:g}: eigenvalues up to e^{log_lam:.0f} leave the float range; no counting fit')
        counted.append(p[r'counting'] and log_lam <= LOG_OVERFLOW)

    def estimate(task):
        ell, count = task
        series = fractal_series(c, N, ell)
        est = estimate_abscissa(series, p[r'bracket'], tol=p[r'tolerance'], level=p[r'ratio_level'])
        fit = None
        if count:
            lam = math.exp(-ell * p[r'count_levels'] * math.log(c))
            fit = counting_function_dimension(
                series.spectra(lam), lam, window=(math.exp(4.0 * ell * math.log(c)), 1.0), bins=p[r'bins']
            )
        return est, fit

    estimates = fan_out(context, estimate, zip(p[r'ell'], counted))
    for ell, (est, fit) in zip(p[r'ell'], estimates):
        results.within(rf'abscissa ℓ={ell:g}', est.value, target, p[r'target_tolerance'])
        rows.append([r'hardy', ell, est.method, est.value, target, est.value - target])
        if fit is not None:
            results.within(rf'counting fit ℓ={ell:g}', fit.value, est.value, p[r'agreement_tolerance'])
            rows.append([r'hardy', ell, fit.method, fit.value, target, fit.value - target])
        results.data.setdefault(r'estimates', dict())[rf'{ell:g}'] = {
            r'abscissa': est,
            r'counting': fit,
            r'ell_lower_bound': ell_lower_bound(c, N),
        }

    # every single-circle triple has spectral dimension 1
    lam = 4096.0
    single = counting_function_dimension([fractal_series(c, N, p[r'ell'][0]).dirac(0, int(lam))], lam, bins=p[r'bins'])
    results.within(r'single circle dimension', single.value, 1.0, 0.05)
    results.data[r'single_circle'] = single
    return rows


def _disk_estimates(context: Context, results: Results, c: float, N: int, target: float):
    p = context.parameters
    if c * c * N <= 1.0:
        context.warning(rf'c²N = {c * c * N:g} <= 1; the disk family has no finite spectral dimension')
    series = disk_fractal_series(c, N)
    est = estimate_abscissa(series, p[r'bracket'], tol=p[r'tolerance'], level=p[r'ratio_level'])
    results.within(r'disk abscissa', est.value, target, p[r'target_tolerance'])
    rows = [[r'disk', 2.0, est.method, est.value, target, est.value - target]]
    fit = None
    if p[r'counting']:
        log_lam = -2.0 * p[r'count_levels'] * math.log(c)
        if log_lam > LOG_OVERFLOW:
            context.warning(rf'disk: eigenvalues up to e^{log_lam:.0f} leave the float range; no counting fit')
        else:
            lam = math.exp(log_lam)
            fit = counting_function_dimension(series.spectra(lam), lam, window=(c**8, 1.0), bins=p[r'bins'])
            results.within(r'disk counting fit', fit.value, est.value, p[r'agreement_tolerance'])
            rows.append([r'disk', 2.0, fit.method, fit.value, target, fit.value - target])
    results.data[r'estimates'] = {r'abscissa': est, r'counting': fit}
    return rows


def dimension_fractal(context: Context) -> Results:
    p = context.parameters
    results = Results(context.kind, context.config.name, context.seed)
    c, N, target = _dimension_target(context)
    context.verbose_value(r'hausdorff dimension', target)
    results.data[r'hausdorff_dimension'] = target
    if context.config.systems:
        results.data[r'system_dimension'] = hausdorff_dimension(context.config.system().ifs)

    if p[r'family'] == r'hardy':
        rows = _fractal_estimates(context, results, c, N, target)
    else:
        rows = _disk_estimates(context, results, c, N, target)
    results.table(r'estimates', (r'family', r'ell', r'method', r'value', r'target', r'error'), rows)
    results.data[r'config'] = context.config.to_dict()
    return results


# =======================================================================================================================
# DIMENSION-BERGMAN
# =======================================================================================================================


def dimension_bergman(context: Context) -> Results:
    p = context.parameters
    results = Results(context.kind, context.config.name, context.seed)
    n, lam = p[r'n'], p[r'lambda_max']

    series = bergman_series(n)
    spectra = series.spectra(lam)
    fit = counting_function_dimension(spectra, lam, window=p[r'window'], bins=p[r'bins'])
    results.within(r'counting dimension', fit.value, n + 1.0, p[r'tolerance'])
    results.data[r'counting'] = fit

    points = np.exp(np.linspace(math.log(p[r'window'][0] * lam), math.log(lam), 9))
    counts = [float(sum(b.count(x) for b in spectra)) for x in points]
    results.table(r'counting_function', (r'lambda', r'count'), [[float(x), k] for x, k in zip(points, counts)])

    s = p[r's']
    partial = bergman_zeta_partial(n, s, p[r'M'], p[r'K'])
    closed = bergman_zeta(n, s)
    oracle = closed
    if n == 1:
        oracle = float(scipy.special.zeta(s - 1.0) - scipy.special.zeta(s))
        results.within(rf'zeta closed form s={s:g}', closed, oracle, p[r'zeta_tolerance'])
    bracket = [partial.explicit, partial.upper]
    results.check(rf'zeta partial sum brackets s={s:g}', oracle, partial.brackets(oracle), target=bracket)
    results.within(rf'zeta partial sum s={s:g}', partial.explicit, oracle, p[r'zeta_tolerance'])
    results.table(
        r'zeta',
        (r'n', r's', r'explicit', r'tail_bound', r'upper', r'closed_form'),
        [[n, s, partial.explicit, partial.tail_bound, partial.upper, closed]],
    )
    results.data[r'config'] = context.config.to_dict()
    return results


# =======================================================================================================================
# ZETA
# =======================================================================================================================


def _zeta_series(context: Context):
    p = context.parameters
    family = p[r'family']
    if family == r'bergman':
        return bergman_series(p[r'n'])
    c, N = context.config.ratio_and_count()
    if family == r'disk':
        return disk_fractal_series(c, N)
    return fractal_series(c, N, p[r'ell'])


def zeta(context: Context) -> Results:
    p = context.parameters
    results = Results(context.kind, context.config.name, context.seed)
    series = _zeta_series(context)
    levels = list(range(p[r'levels'] + 1))

    def log_terms(s):
        return np.array([series.log_term(m, s) for m in levels])

    rows = []
    for s, logs in zip(p[r's'], fan_out(context, log_terms, p[r's'])):
        with np.errstate(over=r'ignore'):
            values = np.exp(logs)
        ratios = np.exp(np.diff(logs)) if np.all(np.isfinite(logs)) else np.full(len(logs) - 1, math.inf)

        midpoint = None
        if series.family == r'fractal':
            c, N = context.config.ratio_and_count()
            log_midpoint = fractal_zeta_log_terms(c, N, p[r'ell'], s, levels)
            deviation = float(np.max(np.abs(np.expm1(log_midpoint - logs))))
            results.at_most(rf'midpoint tail s={s:g}', deviation, 1e-5)
            with np.errstate(over=r'ignore'):
                midpoint = np.exp(log_midpoint)

        limit = series.ratio_limit(s)
        for m, v in enumerate(values):
            ratio = float(ratios[m]) if m < len(ratios) else None
            rows.append([s, m, float(v), None if midpoint is None else float(midpoint[m]), ratio, limit])

        if limit is not None:
            tail = ratios[p[r'ratio_from'] :]
            if len(tail):
                drift = float(np.max(np.abs(tail - limit) / limit))
                results.at_most(rf'term ratio s={s:g}', drift, p[r'ratio_tolerance'])
            results.data.setdefault(r'converges', dict())[rf'{s:g}'] = bool(limit < 1.0)
        else:
            n = series.parameters[r'n']
            partial = bergman_zeta_partial(n, s, p[r'levels'], 100_000)
            closed = bergman_zeta(n, s)
            results.check(
                rf'bergman zeta s={s:g}', closed, partial.brackets(closed), target=[partial.explicit, partial.upper]
            )

    results.table(r'zeta_terms', (r's', r'level', r'term', r'midpoint_term', r'ratio', r'limit_ratio'), rows)
    results.data[r'series'] = series
    results.data[r'config'] = context.config.to_dict()
    return results


# =======================================================================================================================
# ATTRACTOR
# =======================================================================================================================


def attractor(context: Context) -> Results:
    p = context.parameters
    results = Results(context.kind, context.config.name, context.seed)
    system = context.config.system(require_polygon=True)
    ifs = system.ifs
    write_svg = r'svg' in context.formats

    figure = attractor_figure(ifs, system.polygon.vertices, p[r'depth'], budget=p[r'budget'])
    counts = polygon_counts(figure)
    expected = [ifs.N**m for m in range(p[r'depth'] + 1)]
    results.check(r'polygons per level', counts, counts == expected, target=expected)
    results.table(r'attractor_levels', (r'level', r'polygons'), list(enumerate(counts)))
    if write_svg:
        figure.write(Path(context.output_dir, r'attractor.svg'), logger=context.verbose_logger)
        results.figures.append(r'attractor.svg')

    w = Word(tuple(p[r'chart_word']))
    w.validate(ifs.N)
    chart = mobius_chart(system.polygon, ifs, w)
    results.at_most(rf'chart {w} continuity', continuity_defect(chart), 1e-12)
    results.table(
        r'chart_arcs',
        (r'arc', r'theta', r'length', r'vertex', r'radial_derivative_bound'),
        [
            [j, float(chart.thetas[j]), float(chart.lengths[j]), chart.vertices[j], radial_derivative_bound(chart, j)]
            for j in range(chart.M)
        ],
    )
    if write_svg:
        emit_chart_svg(Path(context.output_dir, r'chart.svg'), chart, logger=context.verbose_logger)
        results.figures.append(r'chart.svg')

    osc = check_open_set_condition(ifs, samples=p[r'osc_samples'], rng=context.rng(0))
    results.check(r'open set condition', osc.containment_violations, osc.ok, target=0)
    if not osc.exact:
        context.verbose(rf'open set condition sampled at {osc.samples} points')

    results.data[r'hausdorff_dimension'] = hausdorff_dimension(ifs)
    results.data[r'open_set_condition'] = osc
    results.data[r'chart'] = chart
    results.data[r'figures'] = list(results.figures)
    results.data[r'config'] = context.config.to_dict()
    return results


# =======================================================================================================================
# CONDITIONS
# =======================================================================================================================


def _ball_symbol(terms, n: int):
    pad = (0,) * (n - 1)
    return {((a,) + pad, (b,) + pad): coeff for a, b, coeff in terms}


def _bergman_norms(task):
    n, m, K, terms, seed = task
    basis = _basis(n, float(m), K)
    rng = np.random.default_rng([seed, m])
    T = toeplitz_polynomial(basis, _ball_symbol(terms, n)).matrix
    comm = commutator(ball_dirac(basis, m + 1.0), T)
    return operator_norm(comm, rng=rng), operator_norm(T, rng=rng)


def _symbol_sup_on_polygon(symbol: SymbolPolynomial, vertices):
    """max |p| over the polygon, available in closed form when p is affine in κ and κ̄."""
    if symbol.degree > 1:
        return None
    return float(np.max(np.abs(symbol.evaluate(vertices))))


def conditions(context: Context) -> Results:
    p = context.parameters
    results = Results(context.kind, context.config.name, context.seed)
    system = context.config.system(require_polygon=True)
    ifs = system.ifs
    c, N, n = ifs.ratio, ifs.N, p[r'n']

    # resolvent decay
    bergman = [
        (m + 1.0, ball_dirac(_basis(n, float(m), p[r'bergman_K']), 1.0)) for m in range(p[r'bergman_levels'] + 1)
    ]
    fractal = [(1.0, fractal_series(c, N, p[r'ell']).dirac(m, MIN_CUTOFF)) for m in range(p[r'fractal_levels'] + 1)]
    disk = [(1.0, disk_fractal_dirac(p[r'disk_c'], p[r'disk_N'], m, MIN_CUTOFF)) for m in range(p[r'disk_levels'] + 1)]
    rows = []
    for family, pairs in ((r'bergman', bergman), (r'fractal', fractal), (r'disk', disk)):
        decay = resolvent_decay_check(pairs, threshold=p[r'threshold'])
        results.check(rf'{family} resolvent decay', decay.values[-1], decay.passed, tolerance=p[r'threshold'])
        rows.extend([family, m, v] for m, v in enumerate(decay.values))
        results.data.setdefault(r'resolvent_decay', dict())[family] = decay
    results.table(r'resolvent_decay', (r'family', r'level', r'norm'), rows)

    # bergman commutator and representation norms
    terms = p[r'bergman_symbol']
    tasks = [(n, m, p[r'bergman_K'], tuple(terms), context.seed) for m in range(p[r'bergman_levels'] + 1)]
    norms = fan_out(context, _bergman_norms, tasks)
    rep_bound = sum(abs(coeff) for _, _, coeff in terms)
    comm_bound = p.get(r'bergman_bound', sum(abs(coeff) * abs(a - b) for a, b, coeff in terms))
    comm = uniform_bound_check([cn for cn, _ in norms], bound=comm_bound)
    rep = uniform_bound_check([rn for _, rn in norms], bound=rep_bound)
    results.check(r'bergman commutator norms', comm.sup, comm.passed, tolerance=comm_bound)
    results.check(r'bergman representation norms', rep.sup, rep.passed, tolerance=rep_bound)
    results.table(
        r'bergman_norms',
        (r'level', r'commutator_norm', r'representation_norm'),
        [[m, cn, rn] for m, (cn, rn) in enumerate(norms)],
    )

    # hardy commutator and representation norms
    symbol = SymbolPolynomial({(a, b): coeff for a, b, coeff in p[r'hardy_symbol']})
    table = commutator_bound_table(
        system.polygon,
        ifs,
        symbol,
        range(p[r'hardy_levels'] + 1),
        p[r'hardy_K'],
        alpha=lambda m: fractal_weights(c, N, p[r'ell'], m)[0],
        max_words=p[r'max_words'],
        seed=context.seed,
        mapper=_mapper(context),
    )
    hardy_comm = uniform_bound_check(table.commutator_norms)
    sup = _symbol_sup_on_polygon(symbol, system.polygon.vertices)
    hardy_rep = uniform_bound_check(table.representation_norms, bound=sup)
    results.check(r'hardy commutator norms', hardy_comm.sup, hardy_comm.passed and table.bounded)
    results.check(r'hardy representation norms', hardy_rep.sup, hardy_rep.passed, tolerance=sup)
    results.table(
        r'hardy_norms',
        (r'level', r'alpha', r'commutator_norm', r'representation_norm', r'words', r'sampled'),
        [[r.level, r.alpha, r.commutator_norm, r.representation_norm, r.words, r.sampled] for r in table.rows],
    )

    results.data[r'bergman_norms'] = {r'commutator': comm, r'representation': rep}
    results.data[r'hardy_norms'] = {r'table': table, r'commutator': hardy_comm, r'representation': hardy_rep}
    results.data[r'config'] = context.config.to_dict()
    return results


# =======================================================================================================================
# RUN
# =======================================================================================================================

EXPERIMENTS = {
    r'verify-bergman': verify_bergman,
    r'verify-hardy': verify_hardy,
    r'dimension-fractal': dimension_fractal,
    r'dimension-bergman': dimension_bergman,
    r'zeta': zeta,
    r'attractor': attractor,
    r'conditions': conditions,
}


def run(
    config_path: Path = None,
    output_dir: Path = None,
    threads: int = None,
    seed: int = None,
    verbose: bool = False,
    logger=None,
    treat_warnings_as_errors: bool = None,
) -> Results:
    timer = lambda desc: ScopeTimer(desc, print_start=True, print_end=context.verbose_logger)

    with Context(
        config_path=config_path,
        output_dir=output_dir,
        threads=threads,
        seed=seed,
        verbose=verbose,
        logger=logger,
        treat_warnings_as_errors=treat_warnings_as_errors,
    ) as context:
        with timer(rf'Running {context.kind} experiment {context.config.name!r}') as t:
            results = EXPERIMENTS[context.kind](context)

        with timer(r'Writing report') as t:
            written = emit_report(results, context.output_dir, context.formats, logger=context.verbose_logger)
        context.verbose_value(r'written', [p.name for p in written] + results.figures)

        for check in results.checks:
            status = rf'{Fore.GREEN}pass{Style.RESET_ALL}' if check[r'passed'] else rf'{Fore.RED}FAIL{Style.RESET_ALL}'
            context.info(rf'  [{status}] {check["name"]}: {check["value"]}')

        failures = results.failures
        if failures:
            raise ContractViolation(
                rf'{len(failures)} of {len(results.checks)} checks failed: '
                + r', '.join(rf"'{c['name']}'" for c in failures)
            )
        context.info(rf'{Style.BRIGHT}{Fore.GREEN}all {len(results.checks)} checks passed{Style.RESET_ALL}')
        return results


__all__ = ['fan_out', 'EXPERIMENTS', 'run']
