#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT
"""
Schema helpers for run configs.
"""

from schema import And, Optional, Or, Schema, SchemaError, Use

py2toml = {str: r'string', list: r'array', dict: r'table', int: r'integer', float: r'float', bool: r'boolean'}


def _prefix(name):
    return rf'{name + ": " if name else ""}'


def ValueOrArray(typ, name=''):
    """A single value or an array of them; always validates to a list."""
    inner = Or(typ, [typ], error=rf'{_prefix(name)}expected {py2toml[typ]} or array of {py2toml[typ]}s')
    return And(inner, Use(lambda x: x if isinstance(x, list) else [x]))


def Stripped(typ, allow_empty=True, name=''):
    if not name:
        name = 'value'
    return And(
        And(typ, Use(lambda x: x.strip())),
        (lambda x: True) if allow_empty else (lambda x: len(x) > 0),
        error=rf'{name} cannot be blank',
    )


def Number(name=''):
    """Integers are accepted wherever a float is (TOML and JSON both write 1 for 1.0)."""
    return And(Or(int, float), lambda v: not isinstance(v, bool), Use(float), error=rf'{_prefix(name)}expected number')


def PositiveInt(name=''):
    return And(int, lambda v: not isinstance(v, bool) and v > 0, error=rf'{_prefix(name)}expected positive integer')


def NonNegativeInt(name=''):
    return And(int, lambda v: not isinstance(v, bool) and v >= 0, error=rf'{_prefix(name)}expected integer >= 0')


def PositiveFloat(name=''):
    return And(Number(name), lambda v: v > 0.0, error=rf'{_prefix(name)}expected positive number')


def ComplexPair(name=''):
    """A complex number written as [re, im]."""
    return And(
        [Or(int, float)],
        lambda v: len(v) == 2,
        Use(lambda v: [float(v[0]), float(v[1])]),
        error=rf'{_prefix(name)}expected [re, im] pair of numbers',
    )


def NumberOrArray(name=''):
    return And(
        Or(int, float, [Or(int, float)], error=rf'{_prefix(name)}expected number or array of numbers'),
        Use(lambda x: [float(v) for v in x] if isinstance(x, list) else [float(x)]),
    )


def IntOrArray(name='', minimum=0):
    return And(
        ValueOrArray(int, name=name),
        lambda v: all(i >= minimum for i in v),
        error=rf'{_prefix(name)}expected integer(s) >= {minimum}',
    )


__all__ = [
    'And',
    'Optional',
    'Or',
    'Schema',
    'Use',
    'ValueOrArray',
    'Stripped',
    'Number',
    'PositiveInt',
    'NonNegativeInt',
    'PositiveFloat',
    'ComplexPair',
    'NumberOrArray',
    'IntOrArray',
    'SchemaError',
]
