#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT
"""
Run configs and the Context object passed around during one invocation.
"""

import json
import os

try:
    import tomllib as toml  # PEP 680
except ImportError:
    import tomli as toml

from colorama import Fore, Style

from . import paths
from .charts import *
from .ifs import *
from .schemas import *
from .spectral import ell_lower_bound
from .utils import *
from .version import *

KINDS = (
    r'verify-bergman',
    r'verify-hardy',
    r'dimension-fractal',
    r'dimension-bergman',
    r'zeta',
    r'attractor',
    r'conditions',
)

FORMATS = (r'json', r'csv', r'md', r'svg')

MIN_CUTOFF = 8


def assert_no_unexpected_keys(raw, validated, prefix=''):
    if isinstance(raw, list) and isinstance(validated, list):
        for i, (r, v) in enumerate(zip(raw, validated)):
            assert_no_unexpected_keys(r, v, prefix=rf'{prefix[:-1]}[{i}].' if prefix else rf'[{i}].')
        return validated
    if not isinstance(raw, dict) or not isinstance(validated, dict):
        return validated
    for key in raw:
        if key not in validated:
            raise ConfigError(rf"Unknown config property '{prefix}{key}'")
        assert_no_unexpected_keys(raw[key], validated[key], prefix=rf'{prefix}{key}.')
    return validated


def _symbol_terms(name):
    """[[a, b, coeff], ...] with coeff a number or an [re, im] pair."""

    def check(terms):
        for term in terms:
            if not isinstance(term, list) or len(term) != 3:
                return False
            a, b, coeff = term
            if isinstance(a, bool) or isinstance(b, bool) or not isinstance(a, int) or not isinstance(b, int):
                return False
            if a < 0 or b < 0:
                return False
            if isinstance(coeff, list):
                if len(coeff) != 2 or not all(isinstance(c, (int, float)) for c in coeff):
                    return False
            elif isinstance(coeff, bool) or not isinstance(coeff, (int, float)):
                return False
        return bool(terms)

    return And(
        list,
        check,
        Use(lambda terms: [(t[0], t[1], coerce_complex(t[2])) for t in terms]),
        error=rf'{name}: expected a non-empty array of [a, b, coeff] terms',
    )


def _bracket(name):
    return And(
        [Or(int, float)],
        lambda v: len(v) == 2 and v[0] < v[1],
        Use(lambda v: (float(v[0]), float(v[1]))),
        error=rf'{name}: expected [low, high] with low < high',
    )


# =======================================================================================================================
# SYSTEMS
# =======================================================================================================================

PRESETS = {
    r'sierpinski': (sierpinski_ifs, SIERPINSKI_VERTICES),
    r'square': (square_ifs, SQUARE_VERTICES),
}


class System(object):
    """One [[system]] entry: an IFS, optionally with a generator polygon and an open set candidate."""

    schema = {
        Optional(r'preset'): Or(*PRESETS.keys(), error=rf'preset: expected one of {", ".join(PRESETS.keys())}'),
        Optional(r'name'): Stripped(str, name=r'name'),
        Optional(r'maps'): [{r'a': ComplexPair(r'maps.a'), Optional(r'b'): ComplexPair(r'maps.b')}],
        Optional(r'vertices'): [ComplexPair(r'vertices')],
        Optional(r'osc_candidate'): Or(
            {r'disk': {r'center': ComplexPair(r'center'), r'radius': PositiveFloat(r'radius')}},
            {r'polygon': [ComplexPair(r'polygon')]},
            error=r'osc_candidate: expected {{ disk = {{ center, radius }} }} or {{ polygon = [...] }}',
        ),
    }

    def __init__(self, config, index=0):
        where = rf'system[{index}]'
        if r'preset' in config:
            if r'maps' in config:
                raise ConfigError(rf'{where}: preset and maps are mutually exclusive')
            factory, vertices = PRESETS[config[r'preset']]
            ifs = factory()
            self.vertices = tuple(config[r'vertices']) if r'vertices' in config else tuple(vertices)
        else:
            if r'maps' not in config:
                raise ConfigError(rf'{where}: expected either a preset or maps')
            maps = tuple(
                Similarity(coerce_complex(m[r'a']), coerce_complex(m.get(r'b', [0.0, 0.0]))) for m in config[r'maps']
            )
            ifs = IfsSystem(maps=maps, name=config.get(r'name', rf'system{index}'))
            self.vertices = tuple(config[r'vertices']) if r'vertices' in config else None

        candidate = ifs.osc_candidate
        if r'osc_candidate' in config:
            raw = config[r'osc_candidate']
            if r'disk' in raw:
                candidate = DiskCandidate(coerce_complex(raw[r'disk'][r'center']), raw[r'disk'][r'radius'])
            else:
                candidate = PolygonCandidate(tuple(coerce_complex(v) for v in raw[r'polygon']))
        self.ifs = IfsSystem(maps=ifs.maps, osc_candidate=candidate, name=config.get(r'name', ifs.name))
        self.name = self.ifs.name or rf'system{index}'

        self.polygon = None
        if self.vertices is not None:
            try:
                self.polygon = build_polygon(self.vertices)
            except DomainError as err:
                raise ConfigError(rf'{where}: {err}')
            # maps and candidate are written against the raw vertices; charts live on the perimeter-2π copy
            if abs(self.polygon.scale - 1.0) > 1e-12:
                self.ifs = self.ifs.scaled(self.polygon.scale)

    def require_polygon(self, kind):
        if self.polygon is None:
            raise ConfigError(rf"system '{self.name}': {kind} needs generator vertices")
        return self.polygon

    def to_dict(self):
        out = {r'name': self.name, r'ifs': self.ifs.to_dict()}
        if self.polygon is not None:
            out[r'polygon'] = self.polygon.to_dict()
        return out


# =======================================================================================================================
# PARAMETERS
# =======================================================================================================================


def _parameter_table():
    """Per experiment kind: (schema, defaults)."""
    hardy_symbol = [(0, 0, complex(0.25, 0.0)), (1, 0, complex(1.0, 0.0)), (0, 1, complex(0.0, 0.5))]
    return {
        r'verify-bergman': (
            {
                Optional(r'n'): IntOrArray(r'n', minimum=1),
                Optional(r'm'): NumberOrArray(r'm'),
                Optional(r'K'): IntOrArray(r'K', minimum=MIN_CUTOFF),
                Optional(r'max_degree'): NonNegativeInt(r'max_degree'),
                Optional(r'margin'): NonNegativeInt(r'margin'),
                Optional(r'tolerance'): PositiveFloat(r'tolerance'),
                Optional(r'disk_c'): PositiveFloat(r'disk_c'),
                Optional(r'disk_N'): PositiveInt(r'disk_N'),
                Optional(r'disk_levels'): IntOrArray(r'disk_levels'),
                Optional(r'disk_K'): int,
            },
            {
                r'n': [1, 2],
                r'm': [0.0, 1.0, 5.0],
                r'K': [40, 16],
                r'max_degree': 4,
                r'tolerance': 1e-12,
                r'disk_c': 0.7,
                r'disk_N': 3,
                r'disk_levels': [],
                r'disk_K': 40,
            },
        ),
        r'verify-hardy': (
            {
                Optional(r'max_level'): NonNegativeInt(r'max_level'),
                Optional(r'max_degree'): NonNegativeInt(r'max_degree'),
                Optional(r'K'): int,
                Optional(r'margin'): NonNegativeInt(r'margin'),
                Optional(r'tolerance'): PositiveFloat(r'tolerance'),
                Optional(r'order'): PositiveInt(r'order'),
                Optional(r'continuity_level'): NonNegativeInt(r'continuity_level'),
                Optional(r'continuity_tolerance'): PositiveFloat(r'continuity_tolerance'),
            },
            {
                r'max_level': 2,
                r'max_degree': 3,
                r'K': 64,
                r'margin': 8,
                r'tolerance': 1e-8,
                r'order': 32,
                r'continuity_level': 3,
                r'continuity_tolerance': 1e-12,
            },
        ),
        r'dimension-fractal': (
            {
                Optional(r'family'): Or(r'hardy', r'disk', error=r'family: expected hardy or disk'),
                Optional(r'ell'): NumberOrArray(r'ell'),
                Optional(r'c'): PositiveFloat(r'c'),
                Optional(r'N'): PositiveInt(r'N'),
                Optional(r'bracket'): _bracket(r'bracket'),
                Optional(r'tolerance'): PositiveFloat(r'tolerance'),
                Optional(r'ratio_level'): PositiveInt(r'ratio_level'),
                Optional(r'target_tolerance'): PositiveFloat(r'target_tolerance'),
                Optional(r'counting'): bool,
                Optional(r'count_levels'): PositiveInt(r'count_levels'),
                Optional(r'bins'): PositiveInt(r'bins'),
                Optional(r'agreement_tolerance'): PositiveFloat(r'agreement_tolerance'),
            },
            {
                r'family': r'hardy',
                r'ell': [3.0, 4.0],
                r'bracket': (1.01, 16.0),
                r'tolerance': 1e-6,
                r'ratio_level': 12,
                r'counting': True,
                r'bins': 64,
                r'agreement_tolerance': 0.1,
            },
        ),
        r'dimension-bergman': (
            {
                Optional(r'n'): PositiveInt(r'n'),
                Optional(r'lambda_max'): PositiveFloat(r'lambda_max'),
                Optional(r'window'): _bracket(r'window'),
                Optional(r'bins'): PositiveInt(r'bins'),
                Optional(r'tolerance'): PositiveFloat(r'tolerance'),
                Optional(r's'): PositiveFloat(r's'),
                Optional(r'M'): NonNegativeInt(r'M'),
                Optional(r'K'): int,
                Optional(r'zeta_tolerance'): PositiveFloat(r'zeta_tolerance'),
            },
            {
                r'n': 1,
                r'lambda_max': 2000.0,
                r'window': (0.01, 1.0),
                r'bins': 64,
                r'tolerance': 0.05,
                r's': 3.0,
                r'M': 2_000_000,
                r'K': 2_000_000,
                r'zeta_tolerance': 1e-6,
            },
        ),
        r'zeta': (
            {
                Optional(r'family'): Or(
                    r'fractal', r'disk', r'bergman', error=r'family: expected fractal, disk or bergman'
                ),
                Optional(r'ell'): PositiveFloat(r'ell'),
                Optional(r'n'): PositiveInt(r'n'),
                Optional(r'c'): PositiveFloat(r'c'),
                Optional(r'N'): PositiveInt(r'N'),
                Optional(r's'): NumberOrArray(r's'),
                Optional(r'levels'): NonNegativeInt(r'levels'),
                Optional(r'ratio_from'): NonNegativeInt(r'ratio_from'),
                Optional(r'ratio_tolerance'): PositiveFloat(r'ratio_tolerance'),
            },
            {
                r'family': r'fractal',
                r'ell': 3.0,
                r'n': 1,
                r's': [2.0, 3.0],
                r'levels': 10,
                r'ratio_from': 6,
                r'ratio_tolerance': 1e-4,
            },
        ),
        r'attractor': (
            {
                Optional(r'depth'): NonNegativeInt(r'depth'),
                Optional(r'budget'): PositiveInt(r'budget'),
                Optional(r'chart_word'): IntOrArray(r'chart_word', minimum=1),
                Optional(r'osc_samples'): PositiveInt(r'osc_samples'),
            },
            {
                r'depth': 2,
                r'budget': DEFAULT_WORD_BUDGET,
                r'chart_word': [1],
                r'osc_samples': 2000,
            },
        ),
        r'conditions': (
            {
                Optional(r'n'): PositiveInt(r'n'),
                Optional(r'bergman_levels'): NonNegativeInt(r'bergman_levels'),
                Optional(r'bergman_K'): int,
                Optional(r'bergman_symbol'): _symbol_terms(r'bergman_symbol'),
                Optional(r'bergman_bound'): PositiveFloat(r'bergman_bound'),
                Optional(r'ell'): PositiveFloat(r'ell'),
                Optional(r'fractal_levels'): NonNegativeInt(r'fractal_levels'),
                Optional(r'disk_c'): PositiveFloat(r'disk_c'),
                Optional(r'disk_N'): PositiveInt(r'disk_N'),
                Optional(r'disk_levels'): NonNegativeInt(r'disk_levels'),
                Optional(r'hardy_levels'): NonNegativeInt(r'hardy_levels'),
                Optional(r'hardy_K'): int,
                Optional(r'hardy_symbol'): _symbol_terms(r'hardy_symbol'),
                Optional(r'max_words'): PositiveInt(r'max_words'),
                Optional(r'threshold'): PositiveFloat(r'threshold'),
            },
            {
                r'n': 1,
                r'bergman_levels': 12,
                r'bergman_K': 40,
                r'bergman_symbol': [(1, 0, complex(1.0, 0.0))],
                r'ell': 3.0,
                r'fractal_levels': 6,
                r'disk_c': 0.7,
                r'disk_N': 3,
                r'disk_levels': 6,
                r'hardy_levels': 3,
                r'hardy_K': 32,
                r'hardy_symbol': hardy_symbol,
                r'max_words': 64,
                r'threshold': 0.1,
            },
        ),
    }


PARAMETERS = _parameter_table()


class Output(object):
    schema = {Optional(r'formats'): ValueOrArray(str, name=r'formats')}

    def __init__(self, config):
        self.formats = list(FORMATS)
        if config is None or r'output' not in config:
            return
        config = config[r'output']
        if r'formats' in config:
            formats = [f.strip().lower() for f in config[r'formats']]
            for f in formats:
                if f not in FORMATS:
                    raise ConfigError(rf"output.formats: unknown format '{f}' (expected one of {', '.join(FORMATS)})")
            self.formats = [f for f in FORMATS if f in formats]


# =======================================================================================================================
# RUN CONFIG
# =======================================================================================================================


class RunConfig(object):
    """
    A parsed and validated run config.
    """

    schema = Schema(
        {
            r'kind': Or(*KINDS, error=rf'kind: expected one of {", ".join(KINDS)}'),
            Optional(r'name'): Stripped(str, name=r'name'),
            Optional(r'seed'): NonNegativeInt(r'seed'),
            Optional(r'threads'): int,
            Optional(r'treat_warnings_as_errors'): bool,
            Optional(r'system'): [System.schema],
            Optional(r'parameters'): dict,
            Optional(r'output'): Output.schema,
        },
        ignore_extra_keys=True,
    )

    def __init__(self, config: dict, name: str = r''):
        config = assert_no_unexpected_keys(config, RunConfig.schema.validate(config))

        self.kind = config[r'kind']
        self.name = config.get(r'name', name) or self.kind
        self.seed = config.get(r'seed', 0)
        self.threads = config.get(r'threads', None)
        self.treat_warnings_as_errors = config.get(r'treat_warnings_as_errors', None)
        self.systems = [System(s, i) for i, s in enumerate(config.get(r'system', []))]
        self.output = Output(config)

        schema, defaults = PARAMETERS[self.kind]
        raw = config.get(r'parameters', dict())
        validated = Schema(schema, ignore_extra_keys=True).validate(raw)
        assert_no_unexpected_keys(raw, validated, prefix=r'parameters.')
        self.parameters = dict(defaults)
        self.parameters.update(validated)
        self.__check()

    def system(self, require_polygon=False) -> System:
        if not self.systems:
            raise ConfigError(rf'{self.kind} needs a [[system]]')
        if require_polygon:
            self.systems[0].require_polygon(self.kind)
        return self.systems[0]

    def ratio_and_count(self):
        """(c, N) from parameters when given, else from the first system."""
        p = self.parameters
        if r'c' in p or r'N' in p:
            if r'c' not in p or r'N' not in p:
                raise ConfigError(r'parameters: c and N must be given together')
            return p[r'c'], p[r'N']
        ifs = self.system().ifs
        return ifs.ratio, ifs.N

    def __check(self):
        p = self.parameters
        kind = self.kind

        for key in (r'K', r'bergman_K', r'hardy_K', r'disk_K'):
            if key not in p:
                continue
            for K in p[key] if isinstance(p[key], list) else [p[key]]:
                if isinstance(K, bool) or not isinstance(K, int) or K < MIN_CUTOFF:
                    raise ConfigError(rf'parameters.{key}: cutoff must be an integer >= {MIN_CUTOFF} (got {K})')

        if kind == r'verify-bergman':
            if len(p[r'K']) not in (1, len(p[r'n'])):
                raise ConfigError(r'parameters.K: expected one cutoff or one per entry of n')
            for m in p[r'm']:
                if not m > -1.0:
                    raise ConfigError(rf'parameters.m: weight exponents must be > -1 (got {m})')
            if r'margin' not in p:
                p[r'margin'] = p[r'max_degree']
            if p[r'margin'] < p[r'max_degree']:
                raise ConfigError(r'parameters.margin: must be at least max_degree')
            cutoffs = p[r'K'] + (p[r'K'] if not p[r'disk_levels'] else [p[r'disk_K']])
            if 2 * p[r'margin'] > min(cutoffs):
                raise ConfigError(r'parameters.margin: too large for the smallest cutoff')
            if not 0.0 < p[r'disk_c'] < 1.0:
                raise ConfigError(rf'parameters.disk_c: must lie in (0, 1) (got {p["disk_c"]})')

        elif kind == r'verify-hardy':
            if not self.systems:
                raise ConfigError(r'verify-hardy needs at least one [[system]]')
            for s in self.systems:
                s.require_polygon(kind)
            if p[r'margin'] < p[r'max_degree']:
                raise ConfigError(r'parameters.margin: must be at least max_degree')
            if 2 * p[r'margin'] > p[r'K']:
                raise ConfigError(r'parameters.margin: too large for the cutoff K')

        elif kind == r'dimension-fractal':
            c, N = self.ratio_and_count()
            if p[r'family'] == r'hardy':
                self.__check_ell(c, N, p[r'ell'])
                p.setdefault(r'target_tolerance', 0.01)
                p.setdefault(r'count_levels', 8)
            else:
                p.setdefault(r'target_tolerance', 0.05)
                p.setdefault(r'count_levels', 12)
            if not 0.0 < c < 1.0:
                raise ConfigError(rf'parameters.c: must lie in (0, 1) (got {c})')

        elif kind == r'dimension-bergman':
            if p[r'window'][1] > 1.0:
                raise ConfigError(r'parameters.window: fractions of lambda_max must not exceed 1')
            if not p[r's'] > p[r'n'] + 1.0:
                raise ConfigError(rf'parameters.s: the zeta series converges only for s > n + 1 (got {p["s"]})')

        elif kind == r'zeta':
            if p[r'family'] != r'bergman':
                c, N = self.ratio_and_count()
                if p[r'family'] == r'fractal':
                    self.__check_ell(c, N, [p[r'ell']])
            lowest = p[r'n'] + 1.0 if p[r'family'] == r'bergman' else 1.0
            for s in p[r's']:
                if not s > lowest:
                    raise ConfigError(rf'parameters.s: values must exceed {lowest:g} (got {s})')
            if p[r'ratio_from'] > p[r'levels']:
                raise ConfigError(r'parameters.ratio_from: must not exceed levels')

        elif kind == r'attractor':
            self.system(require_polygon=True)

        elif kind == r'conditions':
            system = self.system(require_polygon=True)
            self.__check_ell(system.ifs.ratio, system.ifs.N, [p[r'ell']])
            if not 0.0 < p[r'disk_c'] < 1.0:
                raise ConfigError(rf'parameters.disk_c: must lie in (0, 1) (got {p["disk_c"]})')

    @staticmethod
    def __check_ell(c, N, ells):
        try:
            bound = ell_lower_bound(c, N)
        except DomainError as err:
            raise ConfigError(rf'parameters: {err}')
        for ell in ells:
            if not ell > bound:
                raise ConfigError(
                    rf'parameters.ell: {ell:g} is not admissible; ℓ must exceed log N / log(cN) = {bound:.6f}'
                )

    def to_dict(self):
        return {
            r'kind': self.kind,
            r'name': self.name,
            r'seed': self.seed,
            r'systems': [s.to_dict() for s in self.systems],
            r'parameters': dict(self.parameters),
        }


def find_config(path) -> Path:
    """Resolves a config path, or the name of one of the bundled configs."""
    path = coerce_path(path)
    if path.is_file():
        return path.resolve()
    for candidate in (paths.CONFIGS / path, paths.CONFIGS / rf'{path}.toml', paths.CONFIGS / rf'{path}.json'):
        if candidate.is_file():
            return candidate.resolve()
    raise ConfigError(rf"Config '{path}' did not exist or was not a file")


def load_config(path, logger=None) -> RunConfig:
    path = find_config(path)
    text = read_all_text_from_file(path, logger=logger)
    try:
        if path.suffix.lower() == r'.json':
            config = json.loads(text)
        else:
            config = toml.loads(text)
    except (ValueError, toml.TOMLDecodeError) as err:
        raise ConfigError(rf'{path.name}: {err}')
    if not isinstance(config, dict):
        raise ConfigError(rf'{path.name}: expected a table at the top level')
    return RunConfig(config, name=path.stem)


# =======================================================================================================================
# CONTEXT
# =======================================================================================================================


class Context(object):
    """
    The context object passed around during one invocation.
    """

    def is_verbose(self):
        return self.__verbose

    def __log(self, level, msg, indent=None):
        if msg is None:
            return
        msg = str(msg).strip(r'\r\n\v\f')
        if not msg:
            return
        if indent:
            msg = '\n'.join(rf'{indent}{line}' for line in msg.splitlines())
        log(self.logger, msg, level=level)

    def verbose(self, msg, indent=None):
        if self.__verbose:
            self.__log(logging.DEBUG, msg, indent=indent)

    def info(self, msg, indent=None):
        self.__log(logging.INFO, msg, indent=indent)

    def warning(self, msg, indent=None):
        if self.treat_warnings_as_errors:
            raise WarningTreatedAsError(msg)
        self.__log(logging.WARNING, rf'{Style.BRIGHT}{Fore.YELLOW}warning:{Style.RESET_ALL} {msg}', indent=indent)

    def verbose_value(self, name, val):
        if not self.__verbose:
            return
        lines = []
        if isinstance(val, dict):
            rpad = max((len(str(k)) for k in val), default=0)
            lines = [rf'{str(k):<{rpad}} => {v}' for k, v in val.items()]
        elif is_collection(val):
            lines = [str(v) for v in val]
        elif val is not None:
            lines = [str(val)]
        text = rf'{name+": ":<35}' + (lines[0] if lines else r'')
        for line in lines[1:]:
            text += f'\n{" ":<35}{line}'
        self.verbose(text)

    def __init__(
        self,  #
        config_path: Path,
        output_dir: Path = None,
        threads: int = None,
        seed: int = None,
        verbose: bool = False,
        logger=None,
        treat_warnings_as_errors: bool = None,
    ):
        self.logger = logger
        self.__verbose = bool(verbose)
        self.verbose_logger = logger if self.__verbose else None
        self.treat_warnings_as_errors = bool(treat_warnings_as_errors)

        self.verbose_value(r'dirs.PACKAGE', paths.PACKAGE)
        self.verbose_value(r'dirs.CONFIGS', paths.CONFIGS)
        self.verbose_value(r'dirs.TEMPLATES', paths.TEMPLATES)

        # resolve paths
        if 1:
            if output_dir is None:
                output_dir = Path.cwd()
            self.output_dir = coerce_path(output_dir).resolve()
            self.verbose_value(r'Context.output_dir', self.output_dir)
            assert self.output_dir.is_absolute()

            self.config_path = find_config(config_path if config_path is not None else r'ncdim.toml')
            self.verbose_value(r'Context.config_path', self.config_path)
            assert self.config_path.is_absolute()

        # read + check config
        if 1:
            self.config = load_config(self.config_path, logger=self.verbose_logger)
            self.verbose_value(r'Context.kind', self.config.kind)
            self.verbose_value(r'Context.name', self.config.name)
            self.verbose_value(r'Context.parameters', self.config.parameters)
            for s in self.config.systems:
                self.verbose_value(rf'Context.system', s.name)

            if treat_warnings_as_errors is None and self.config.treat_warnings_as_errors is not None:
                self.treat_warnings_as_errors = bool(self.config.treat_warnings_as_errors)
            self.verbose_value(r'Context.treat_warnings_as_errors', self.treat_warnings_as_errors)

            self.seed = int(seed) if seed is not None else int(self.config.seed)
            if self.seed < 0:
                raise ConfigError(rf'seed must be >= 0 (got {self.seed})')
            self.verbose_value(r'Context.seed', self.seed)

            if threads is None:
                threads = self.config.threads
            threads = int(threads) if threads is not None else 0
            if threads <= 0:
                threads = os.cpu_count()
            self.threads = max(1, min(os.cpu_count() or 1, threads))
            self.verbose_value(r'Context.threads', self.threads)

            self.formats = self.config.output.formats
            self.verbose_value(r'Context.formats', self.formats)

        self.output_dir.mkdir(parents=True, exist_ok=True)

    @property
    def kind(self) -> str:
        return self.config.kind

    @property
    def parameters(self) -> dict:
        return self.config.parameters

    def rng(self, *keys) -> np.random.Generator:
        """A generator for one task, seeded from the run seed and the task's keys."""
        return np.random.default_rng([self.seed, *[int(k) for k in keys]])

    def __enter__(self):
        return self

    def __exit__(self, type, value, traceback):
        pass

    def __bool__(self):
        return True


__all__ = [
    'KINDS',
    'FORMATS',
    'assert_no_unexpected_keys',
    'System',
    'Output',
    'RunConfig',
    'find_config',
    'load_config',
    'Context',
]
