#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT
"""
Low-level helper functions and useful bits.
"""

import io
import logging
import math
import sys
import typing  # used transitively
from pathlib import Path  # used transitively

import numpy as np
from misk import *

from . import paths  # used transitively

# =======================================================================================================================
# FUNCTIONS
# =======================================================================================================================


def log(logger, msg, level=logging.INFO):
    if logger is None or msg is None:
        return
    if isinstance(logger, bool):
        if logger:
            print(msg, file=sys.stderr if level >= logging.WARNING else sys.stdout, flush=True)
    elif isinstance(logger, logging.Logger):
        logger.log(level, msg)
    elif isinstance(logger, io.IOBase):
        print(msg, file=logger)
    else:
        logger(msg)


def coerce_complex(val) -> complex:
    """Accepts complex numbers, reals and [re, im] pairs (as they appear in run configs)."""
    if isinstance(val, (list, tuple)):
        if len(val) != 2:
            raise DomainError(rf'expected [re, im] pair, got {val!r}')
        return complex(float(val[0]), float(val[1]))
    return complex(val)


def complex_pair(z: complex) -> typing.List[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def is_strictly_increasing(values, rtol=1e-12) -> bool:
    values = [float(v) for v in values]
    if len(values) < 2:
        return False
    return all(b > a + rtol * max(abs(a), abs(b)) for a, b in zip(values, values[1:]))


def to_jsonable(obj):
    """Converts numpy scalars/arrays, complex numbers and paths into plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        val = float(obj)
        if math.isnan(val) or math.isinf(val):
            return str(val)
        return val
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_pair(obj)
    if isinstance(obj, Path):
        return str(obj)
    if hasattr(obj, r'to_dict'):
        return to_jsonable(obj.to_dict())
    return obj


# =======================================================================================================================
# Custom exceptions
# =======================================================================================================================


class Error(Exception):
    """Base class for other exceptions."""

    def __init__(self, *message):
        self.__message = r' '.join([str(m) for m in message])
        super().__init__(self.__message)

    def __str__(self):
        return self.__message


class WarningTreatedAsError(Error):
    """Raised when a warning is generated and the user has chosen to treat warnings as errors."""

    pass


class DomainError(Error):
    """Raised when an argument lies outside the domain of an operation."""

    pass


class GeometryError(DomainError):
    """Raised when a polygon or chart cannot be constructed."""

    pass


class InsufficientHarmonicsError(DomainError):
    """Raised when a set of Fourier coefficients is too short for the requested truncation."""

    pass


class ResourceError(Error):
    """Raised when a configured word, basis, harmonic or eigenvalue budget would be exceeded."""

    pass


class NumericError(Error):
    """Raised when an iterative method fails to converge. The best estimate is kept in `estimate`."""

    def __init__(self, *message, estimate=None):
        super().__init__(*message)
        self.estimate = estimate


class ConfigError(Error):
    """Raised when a run config is malformed or out of bounds."""

    pass


class ContractViolation(Error):
    """Raised after a run has written its artifacts if any numeric contract failed."""

    pass
