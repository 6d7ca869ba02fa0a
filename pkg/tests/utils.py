#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT

import subprocess
import sys
from pathlib import Path
from subprocess import CompletedProcess

from misk import *

SRC = Path(Path(__file__).parents[1], r'src').resolve()
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

_ncdim_path = None


def run_ncdim(dir=Path.cwd(), *args, check=True) -> CompletedProcess:
    """Runs ncdim in a child interpreter with dir as the working directory, capturing stdout and stderr."""
    if dir is None:
        dir = Path.cwd()
    dir = str(coerce_path(dir).resolve())

    global _ncdim_path
    if _ncdim_path is None:
        _ncdim_path = str(Path(SRC, r'__main__.py').resolve())
        assert_existing_file(_ncdim_path)

    return subprocess.run(
        [sys.executable, _ncdim_path, *[str(arg) for arg in args if arg is not None]],
        cwd=dir,
        check=check,
        capture_output=True,
        encoding=r'utf-8',
    )


def cfg(config, path, default=None):
    assert isinstance(config, dict)
    assert path is not None
    path = coerce_collection(path)
    assert path

    for p in range(len(path) - 1):
        if path[p] not in config:
            return default
        config = config[path[p]]
        assert isinstance(config, dict)

    if path[-1] not in config:
        return default
    return config[path[-1]]
