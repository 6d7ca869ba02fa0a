#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT
"""
Constants for various key paths.
"""

from pathlib import Path

PACKAGE = Path(Path(__file__).resolve().parent)
"""The root directory of the package installation."""

CONFIGS = Path(PACKAGE, r'configs')
"""The bundled run configs."""

TEMPLATES = Path(PACKAGE, r'templates')
"""Jinja templates used when writing reports."""
