#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT

from .main import main
from .run import run
from .version import VERSION, VERSION_STRING

__all__ = ['main', 'run', 'VERSION', 'VERSION_STRING']

__version__ = VERSION_STRING

if __name__ == '__main__':
    main()
